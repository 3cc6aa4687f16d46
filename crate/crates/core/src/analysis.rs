//! Layering, edge categorization and structural reports.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{has_errors, CognitiveMap, Diagnostic, EdgeId, EdgeKind, MapEdge, NodeId, NodeKind};

pub const PRODUCT_LAYER: usize = 0;
pub const FEATURE_LAYER: usize = 1;
pub const FIRST_PROBLEM_LAYER: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("map has {} validation error(s)", .0.iter().filter(|d| d.is_error()).count())]
    InvalidMap(Vec<Diagnostic>),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
}

impl AnalysisError {
    pub fn code(&self) -> &'static str {
        match self {
            AnalysisError::InvalidMap(_) => "InvalidMap",
            AnalysisError::UnknownEdge(_) => "UnknownId",
        }
    }
}

/// Which horizontal band of the map template a layer belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BandRole {
    Product,
    Features,
    Problems,
    Customers,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerAssignment {
    layers: BTreeMap<NodeId, usize>,
    deepest_problem: Option<usize>,
    customer_band: Option<usize>,
}

impl LayerAssignment {
    pub fn layer(&self, id: &NodeId) -> Option<usize> {
        self.layers.get(id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NodeId, usize)> {
        self.layers.iter().map(|(k, v)| (k, *v))
    }

    pub fn customer_band(&self) -> Option<usize> {
        self.customer_band
    }

    /// Number of bands from the product band down to the last occupied one,
    /// empty intermediate bands included.
    pub fn band_count(&self) -> usize {
        self.layers.values().max().map_or(0, |m| m + 1)
    }

    pub fn role(&self, band: usize) -> BandRole {
        match band {
            PRODUCT_LAYER => BandRole::Product,
            FEATURE_LAYER => BandRole::Features,
            b if Some(b) == self.customer_band => BandRole::Customers,
            _ => BandRole::Problems,
        }
    }
}

/// Longest-path layering: product 0, features 1, each concept one below its
/// deepest influencing feature or concept (at least 2), customers in one
/// band after the deepest concept.
pub fn assign_layers(map: &CognitiveMap) -> Result<LayerAssignment, AnalysisError> {
    let diagnostics = map.validate();
    if has_errors(&diagnostics) {
        return Err(AnalysisError::InvalidMap(diagnostics));
    }

    let mut layers: BTreeMap<NodeId, usize> = BTreeMap::new();
    for n in map.nodes() {
        match n.kind {
            NodeKind::Product => {
                layers.insert(n.id.clone(), PRODUCT_LAYER);
            }
            NodeKind::Feature => {
                layers.insert(n.id.clone(), FEATURE_LAYER);
            }
            _ => {}
        }
    }

    // Kahn over influence edges whose target is a concept; sources are
    // features (fixed) or concepts.
    let influence: Vec<&MapEdge> = map.edges_of(EdgeKind::Influence).collect();
    let mut indegree: HashMap<&NodeId, usize> = map
        .nodes_of(NodeKind::Concept)
        .map(|n| (&n.id, 0))
        .collect();
    for e in &influence {
        if map.node(e.src.as_str()).map(|n| n.kind) == Some(NodeKind::Concept) {
            *indegree.get_mut(&e.dst).expect("validated") += 1;
        }
    }
    let mut concept_layer: HashMap<&NodeId, usize> = map
        .nodes_of(NodeKind::Concept)
        .map(|n| (&n.id, FIRST_PROBLEM_LAYER))
        .collect();
    for e in &influence {
        if map.node(e.src.as_str()).map(|n| n.kind) == Some(NodeKind::Feature) {
            let l = concept_layer.get_mut(&e.dst).expect("validated");
            *l = (*l).max(FEATURE_LAYER + 1);
        }
    }
    let mut ready: VecDeque<&NodeId> = map
        .nodes_of(NodeKind::Concept)
        .map(|n| &n.id)
        .filter(|id| indegree[id] == 0)
        .collect();
    while let Some(cur) = ready.pop_front() {
        let here = concept_layer[cur];
        for e in influence.iter().filter(|e| &e.src == cur) {
            let l = concept_layer.get_mut(&e.dst).expect("validated");
            *l = (*l).max(here + 1);
            let d = indegree.get_mut(&e.dst).expect("validated");
            *d -= 1;
            if *d == 0 {
                ready.push_back(&e.dst);
            }
        }
    }
    let deepest_problem = concept_layer.values().max().copied();
    for (id, l) in concept_layer {
        layers.insert(id.clone(), l);
    }

    let mut customer_band = None;
    if map.nodes_of(NodeKind::Customer).next().is_some() {
        let band = deepest_problem.unwrap_or(FEATURE_LAYER) + 1;
        customer_band = Some(band);
        for c in map.nodes_of(NodeKind::Customer) {
            layers.insert(c.id.clone(), band);
        }
    }

    Ok(LayerAssignment {
        layers,
        deepest_problem,
        customer_band,
    })
}

/// Hypothesis type implied by an edge. Declaration order is the order in
/// which hypotheses should be put to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HypothesisKind {
    Problem,
    Value,
    Product,
}

impl HypothesisKind {
    pub const ALL: [HypothesisKind; 3] = [HypothesisKind::Problem, HypothesisKind::Value, HypothesisKind::Product];

    pub fn of(kind: EdgeKind) -> HypothesisKind {
        match kind {
            EdgeKind::Offering => HypothesisKind::Product,
            EdgeKind::Influence => HypothesisKind::Value,
            EdgeKind::Perception => HypothesisKind::Problem,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            HypothesisKind::Problem => "problem",
            HypothesisKind::Value => "value",
            HypothesisKind::Product => "product",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            HypothesisKind::Problem => "Problem",
            HypothesisKind::Value => "Value",
            HypothesisKind::Product => "Product",
        }
    }
}

impl fmt::Display for HypothesisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn categorize(map: &CognitiveMap, edge: &EdgeId) -> Result<HypothesisKind, AnalysisError> {
    map.edge(edge.as_str())
        .map(|e| HypothesisKind::of(e.kind))
        .ok_or_else(|| AnalysisError::UnknownEdge(edge.0.clone()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandCount {
    pub band: usize,
    pub role: BandRole,
    pub count: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KindCounts {
    pub products: usize,
    pub customers: usize,
    pub features: usize,
    pub concepts: usize,
    pub offering: usize,
    pub influence: usize,
    pub perception: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub counts: KindCounts,
    /// Empty when the map has validation errors.
    pub bands: Vec<BandCount>,
    pub orphan_features: Vec<NodeId>,
    pub unreachable_concepts: Vec<NodeId>,
    pub customers_without_problems: Vec<NodeId>,
    /// Unsaturated edges, candidates for further how?/why? questioning.
    pub deepening_candidates: Vec<EdgeId>,
}

pub fn structure_report(map: &CognitiveMap) -> StructureReport {
    let count_nodes = |k| map.nodes_of(k).count();
    let count_edges = |k| map.edges_of(k).count();
    let counts = KindCounts {
        products: count_nodes(NodeKind::Product),
        customers: count_nodes(NodeKind::Customer),
        features: count_nodes(NodeKind::Feature),
        concepts: count_nodes(NodeKind::Concept),
        offering: count_edges(EdgeKind::Offering),
        influence: count_edges(EdgeKind::Influence),
        perception: count_edges(EdgeKind::Perception),
    };
    let bands = match assign_layers(map) {
        Ok(layers) => {
            let mut per = vec![0usize; layers.band_count()];
            for (_, l) in layers.iter() {
                per[l] += 1;
            }
            per.into_iter()
                .enumerate()
                .map(|(band, count)| BandCount {
                    band,
                    role: layers.role(band),
                    count,
                })
                .collect()
        }
        Err(_) => Vec::new(),
    };
    let gaps = map.gaps();
    StructureReport {
        counts,
        bands,
        orphan_features: gaps.orphan_features,
        unreachable_concepts: gaps.unreachable_concepts,
        customers_without_problems: gaps.customers_without_problems,
        deepening_candidates: map
            .edges()
            .iter()
            .filter(|e| !e.saturated)
            .map(|e| e.id.clone())
            .collect(),
    }
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.counts;
        writeln!(
            f,
            "nodes: {} product, {} customers, {} features, {} concepts",
            c.products, c.customers, c.features, c.concepts
        )?;
        writeln!(
            f,
            "edges: {} offering, {} influence, {} perception",
            c.offering, c.influence, c.perception
        )?;
        if !self.bands.is_empty() {
            writeln!(f, "bands:")?;
            for b in &self.bands {
                writeln!(f, "  {:>2} {:<9} {}", b.band, format!("{:?}", b.role).to_lowercase(), b.count)?;
            }
        }
        let list = |f: &mut fmt::Formatter<'_>, title: &str, ids: Vec<&str>| -> fmt::Result {
            if ids.is_empty() {
                Ok(())
            } else {
                writeln!(f, "{title}: {}", ids.join(", "))
            }
        };
        list(f, "orphan features", self.orphan_features.iter().map(|i| i.as_str()).collect())?;
        list(f, "unreachable concepts", self.unreachable_concepts.iter().map(|i| i.as_str()).collect())?;
        list(
            f,
            "customers without problems",
            self.customers_without_problems.iter().map(|i| i.as_str()).collect(),
        )?;
        list(f, "deepening candidates", self.deepening_candidates.iter().map(|i| i.as_str()).collect())
    }
}
