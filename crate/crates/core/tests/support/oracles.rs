//! Independent oracles for random-map properties. Shared by the core
//! property tests and the acceptance suite.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, HashSet};

use hymap_core::analysis::{assign_layers, categorize, HypothesisKind};
use hymap_core::dsl::{parse_str, serialize};
use hymap_core::model::{CognitiveMap, DiagnosticCode, EdgeId, EdgeKind, MapEdge, ModelError, NodeId, NodeKind, Sign};
use hymap_core::testutil::{random_map, GenConfig};
use hymap_core::{generate, layout};

pub fn kind_of(map: &CognitiveMap, id: &NodeId) -> NodeKind {
    map.node(id.as_str()).expect("endpoint exists").kind
}

/// Hypothesis kind an edge must produce, by endpoint kinds alone.
pub fn expected_kind(src: NodeKind, dst: NodeKind) -> Option<HypothesisKind> {
    use NodeKind::*;
    match (src, dst) {
        (Product, Feature) => Some(HypothesisKind::Product),
        (Feature, Concept) | (Concept, Concept) => Some(HypothesisKind::Value),
        (Customer, Concept) => Some(HypothesisKind::Problem),
        _ => None,
    }
}

/// Longest-path layers computed by memoised recursion over predecessors.
pub fn oracle_layers(map: &CognitiveMap) -> BTreeMap<NodeId, usize> {
    fn concept(map: &CognitiveMap, id: &NodeId, memo: &mut HashMap<NodeId, usize>) -> usize {
        if let Some(l) = memo.get(id) {
            return *l;
        }
        let mut l = 2;
        for e in map.edges().iter().filter(|e| &e.dst == id) {
            let from = match kind_of(map, &e.src) {
                NodeKind::Feature => 1,
                NodeKind::Concept => concept(map, &e.src, memo),
                _ => continue,
            };
            l = l.max(from + 1);
        }
        memo.insert(id.clone(), l);
        l
    }
    let mut memo = HashMap::new();
    let mut out = BTreeMap::new();
    let mut deepest = None::<usize>;
    for n in map.nodes() {
        let l = match n.kind {
            NodeKind::Product => 0,
            NodeKind::Feature => 1,
            NodeKind::Concept => {
                let l = concept(map, &n.id, &mut memo);
                deepest = Some(deepest.map_or(l, |d| d.max(l)));
                l
            }
            NodeKind::Customer => continue,
        };
        out.insert(n.id.clone(), l);
    }
    for n in map.nodes().iter().filter(|n| n.kind == NodeKind::Customer) {
        out.insert(n.id.clone(), deepest.unwrap_or(1) + 1);
    }
    out
}

pub fn reachable(map: &CognitiveMap, from: &NodeId) -> HashSet<NodeId> {
    let mut seen = HashSet::new();
    let mut stack = vec![from.clone()];
    while let Some(cur) = stack.pop() {
        for e in map.edges().iter().filter(|e| e.src == cur) {
            if seen.insert(e.dst.clone()) {
                stack.push(e.dst.clone());
            }
        }
    }
    seen
}

pub fn check_bijection(map: &CognitiveMap) -> Result<(), String> {
    let hyps = generate(map).map_err(|e| e.to_string())?;
    if hyps.len() != map.edges().len() {
        return Err(format!("{} hypotheses for {} edges", hyps.len(), map.edges().len()));
    }
    let by_edge: HashSet<&EdgeId> = hyps.iter().map(|h| &h.edge).collect();
    let edges: HashSet<&EdgeId> = map.edges().iter().map(|e| &e.id).collect();
    if by_edge != edges {
        return Err("hypothesis edges differ from map edges".into());
    }
    let ids: HashSet<&str> = hyps.iter().map(|h| h.id.as_str()).collect();
    if ids.len() != hyps.len() {
        return Err("hypothesis ids collide".into());
    }
    for h in &hyps {
        let e = map.edge(h.edge.as_str()).unwrap();
        let want = expected_kind(kind_of(map, &e.src), kind_of(map, &e.dst));
        if want != Some(h.kind) {
            return Err(format!("{} has kind {:?}, expected {want:?}", h.id.as_str(), h.kind));
        }
        if categorize(map, &e.id).map_err(|e| e.to_string())? != h.kind {
            return Err(format!("categorize disagrees on {}", e.id));
        }
    }
    Ok(())
}

pub fn check_round_trip(map: &CognitiveMap) -> Result<(), String> {
    let text = serialize(map);
    let parsed = parse_str(text.text()).map_err(|d| format!("{d:?}\n{}", text.text()))?.map;
    if !parsed.structurally_eq(map) {
        return Err(format!("structure changed:\n{}", text.text()));
    }
    let flags = |m: &CognitiveMap| {
        let mut v: Vec<_> = m
            .edges()
            .iter()
            .map(|e| {
                let l = |id: &NodeId| m.node(id.as_str()).unwrap().label.clone();
                (l(&e.src), l(&e.dst), e.saturated, e.connective)
            })
            .collect();
        v.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        v
    };
    if flags(&parsed) != flags(map) {
        return Err("saturation or connective lost".into());
    }
    if serialize(&parsed).text() != text.text() {
        return Err("serialization is not a fixpoint".into());
    }
    Ok(())
}

pub fn check_layers(map: &CognitiveMap) -> Result<(), String> {
    let got = assign_layers(map).map_err(|e| format!("{e:?}"))?;
    let want = oracle_layers(map);
    let got_map: BTreeMap<NodeId, usize> = got.iter().map(|(k, v)| (k.clone(), v)).collect();
    if got_map != want {
        return Err(format!("layers {got_map:?} != oracle {want:?}"));
    }
    for e in map.edges() {
        let (s, d) = (want[&e.src], want[&e.dst]);
        let ok = match e.kind {
            EdgeKind::Perception => s > d,
            _ => d > s,
        };
        if !ok {
            return Err(format!("edge {} breaks monotonicity ({s} -> {d})", e.id));
        }
    }
    let l = layout(map).map_err(|e| e.to_string())?;
    for n in map.nodes() {
        let band = l.node(n.id.as_str()).map(|n| n.band);
        if band != Some(want[&n.id]) {
            return Err(format!("layout puts {} in band {band:?}, expected {}", n.id, want[&n.id]));
        }
    }
    Ok(())
}

/// Close a cycle through an existing path; both the mutation API and the
/// validator must refuse it.
pub fn check_cycle_injection(map: &CognitiveMap, pick: usize) -> Result<bool, String> {
    let concepts: Vec<&NodeId> = map.nodes().iter().filter(|n| n.kind == NodeKind::Concept).map(|n| &n.id).collect();
    let mut pairs = Vec::new();
    for a in &concepts {
        for b in reachable(map, a) {
            if kind_of(map, &b) == NodeKind::Concept {
                pairs.push(((*a).clone(), b));
            }
        }
    }
    if pairs.is_empty() {
        return Ok(false);
    }
    let (a, b) = pairs[pick % pairs.len()].clone();

    let mut m = map.clone();
    match m.add_edge(&b, &a, Some(Sign::Positive)) {
        Err(ModelError::WouldCreateCycle { path }) => {
            if path.first() != Some(&b) || path.last() != Some(&b) || path.len() < 3 {
                return Err(format!("bad cycle path {path:?}"));
            }
            for w in path.windows(2) {
                if !map.edges().iter().any(|e| e.src == w[0] && e.dst == w[1]) && !(w[0] == b && w[1] == a) {
                    return Err(format!("cycle path step {} -> {} is not an edge", w[0], w[1]));
                }
            }
        }
        other => return Err(format!("closing {b} -> {a} gave {other:?}")),
    }

    let mut edges = map.edges().to_vec();
    edges.push(MapEdge {
        id: EdgeId("influence-999999".into()),
        src: b.clone(),
        dst: a.clone(),
        kind: EdgeKind::Influence,
        sign: Some(Sign::Negative),
        saturated: false,
        rationale: None,
        connective: Default::default(),
    });
    let raw = CognitiveMap::from_parts("raw", "raw", map.nodes().to_vec(), edges);
    let d = raw.validate();
    if !d.iter().any(|d| d.code == DiagnosticCode::Cycle && d.is_error()) {
        return Err(format!("validator missed the cycle: {d:?}"));
    }
    if assign_layers(&raw).is_ok() || generate(&raw).is_ok() {
        return Err("cyclic map accepted downstream".into());
    }
    Ok(true)
}

#[derive(Debug, Default)]
pub struct SweepStats {
    pub maps: u64,
    pub max_nodes: usize,
    pub edges: usize,
    pub cycles_injected: u64,
}

/// Run every map-level check over seeds `0..n`.
pub fn sweep(n: u64) -> Result<SweepStats, String> {
    let mut stats = SweepStats::default();
    for seed in 0..n {
        let map = random_map(seed, GenConfig::default());
        let tag = |r: Result<(), String>| r.map_err(|e| format!("seed {seed}: {e}"));
        tag(check_bijection(&map))?;
        tag(check_round_trip(&map))?;
        tag(check_layers(&map))?;
        if check_cycle_injection(&map, seed as usize).map_err(|e| format!("seed {seed}: {e}"))? {
            stats.cycles_injected += 1;
        }
        stats.maps += 1;
        stats.max_nodes = stats.max_nodes.max(map.nodes().len());
        stats.edges += map.edges().len();
    }
    Ok(stats)
}

/// Check every ordered pair of node kinds against both the mutation API and
/// the validator. Returns the number of illegal pairs, all of which must
/// have been rejected.
pub fn check_endpoint_pairs() -> Result<usize, String> {
    let mut illegal = 0;
    for src in NodeKind::ALL {
        for dst in NodeKind::ALL {
            let legal = expected_kind(src, dst).is_some();
            if EdgeKind::between(src, dst).is_some() != legal {
                return Err(format!("{src:?} -> {dst:?} legality differs"));
            }
            if legal {
                continue;
            }
            illegal += 1;
            let mut map = CognitiveMap::new("pairs");
            let p = map.add_node(NodeKind::Product, "p").unwrap();
            let mut node = |k: NodeKind, l: &str| {
                if k == NodeKind::Product {
                    p.clone()
                } else {
                    map.add_node(k, l).unwrap()
                }
            };
            let a = node(src, "a");
            // A second product cannot be added, so that pair is only
            // checked on a raw map.
            let b = if dst == NodeKind::Product && src == NodeKind::Product {
                NodeId("product-99".into())
            } else {
                node(dst, "b")
            };
            if map.node(b.as_str()).is_some() {
                for sign in [None, Some(Sign::Positive)] {
                    if !matches!(map.add_edge(&a, &b, sign), Err(ModelError::IllegalEndpointPair { .. })) {
                        return Err(format!("{src:?} -> {dst:?} accepted by add_edge"));
                    }
                }
            }
            let mut nodes = map.nodes().to_vec();
            if map.node(b.as_str()).is_none() {
                let mut second = nodes[0].clone();
                second.id = b.clone();
                second.label = "q".into();
                nodes.push(second);
            }
            let raw = CognitiveMap::from_parts(
                "raw",
                "raw",
                nodes,
                vec![MapEdge {
                    id: EdgeId("influence-99".into()),
                    src: a.clone(),
                    dst: b.clone(),
                    kind: EdgeKind::Influence,
                    sign: Some(Sign::Positive),
                    saturated: false,
                    rationale: None,
                    connective: Default::default(),
                }],
            );
            if !raw.validate().iter().any(|d| d.code == DiagnosticCode::IllegalEndpointPair && d.is_error()) {
                return Err(format!("validator accepts {src:?} -> {dst:?}"));
            }
        }
    }
    Ok(illegal)
}
