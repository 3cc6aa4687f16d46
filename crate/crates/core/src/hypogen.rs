//! Turning relationships into testable hypothesis statements.
//!
//! Each edge yields exactly one statement:
//!
//! * offering: `the team developing <product> is capable of implementing <feature>`
//! * influence: `<source> increases|decreases|does not affect <target>`
//! * perception: `<customer> has|would like to <problem>`
//!
//! Statements are produced mechanically and never rephrased; human edits live
//! in [`Hypothesis::edited_text`] and survive regeneration.

use std::cmp::Reverse;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::analysis::HypothesisKind;
use crate::model::{has_errors, normalize_label, CognitiveMap, Diagnostic, EdgeId, EdgeKind, MapEdge, ProblemConnective, Sign};
use crate::registry::{Registry, Risk, Status};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HypothesisId(pub String);

impl HypothesisId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for HypothesisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for HypothesisId {
    fn from(s: &str) -> Self {
        HypothesisId(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub id: HypothesisId,
    pub edge: EdgeId,
    pub kind: HypothesisKind,
    pub generated_text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edited_text: Option<String>,
    /// An endpoint changed since the statement was last reviewed.
    #[serde(default)]
    pub stale: bool,
}

impl Hypothesis {
    /// Text to show: the human edit when present.
    pub fn statement(&self) -> &str {
        self.edited_text.as_deref().unwrap_or(&self.generated_text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypogenError {
    #[error("map has validation errors")]
    InvalidMap(Vec<Diagnostic>),
}

impl HypogenError {
    pub fn code(&self) -> &'static str {
        "InvalidMap"
    }
}

pub fn verb(sign: Sign) -> &'static str {
    match sign {
        Sign::Positive => "increases",
        Sign::Negative => "decreases",
        Sign::Neutral => "does not affect",
    }
}

fn label<'m>(map: &'m CognitiveMap, id: &crate::model::NodeId) -> &'m str {
    map.node(id.as_str()).map(|n| n.label.as_str()).unwrap_or("")
}

/// Template text for one edge.
pub fn statement_for(map: &CognitiveMap, edge: &MapEdge) -> String {
    let src = label(map, &edge.src);
    let dst = label(map, &edge.dst);
    match edge.kind {
        EdgeKind::Offering => format!("the team developing {src} is capable of implementing {dst}"),
        EdgeKind::Influence => {
            // Validation guarantees a sign; fall back to the neutral verb so
            // no statement is ever verb-less.
            let v = verb(edge.sign.unwrap_or(Sign::Neutral));
            format!("{src} {v} {dst}")
        }
        EdgeKind::Perception => {
            let connective = match edge.connective {
                ProblemConnective::Has if plural(src) => "have",
                c => c.phrase(),
            };
            format!("{src} {connective} {dst}")
        }
    }
}

/// Crude number agreement for customer segments: "players", "enthusiasts"
/// are plural; "patient", "business" are not.
fn plural(label: &str) -> bool {
    let last = label.split_whitespace().last().unwrap_or("").to_lowercase();
    last.len() > 2 && last.ends_with('s') && !last.ends_with("ss") && !last.ends_with("us") && !last.ends_with("is")
}

/// Content-derived id: the same relationship gets the same id in every map
/// and across file reloads.
pub fn hypothesis_id(map: &CognitiveMap, edge: &MapEdge) -> HypothesisId {
    let end = |id: &crate::model::NodeId| {
        map.node(id.as_str())
            .map(|n| format!("{}:{}", n.kind, normalize_label(&n.label)))
            .unwrap_or_default()
    };
    let sign = edge.sign.map(Sign::symbol).unwrap_or("");
    let mut hasher = Sha256::new();
    hasher.update(format!("{}|{}|{}|{}", edge.kind, end(&edge.src), end(&edge.dst), sign).as_bytes());
    let digest = hasher.finalize();
    let hex: String = digest.iter().take(5).map(|b| format!("{b:02x}")).collect();
    let prefix = match HypothesisKind::of(edge.kind) {
        HypothesisKind::Problem => "prob",
        HypothesisKind::Value => "val",
        HypothesisKind::Product => "prod",
    };
    HypothesisId(format!("{prefix}-{hex}"))
}

fn sort_key(map: &CognitiveMap, edge: &MapEdge) -> (HypothesisKind, String, String) {
    (
        HypothesisKind::of(edge.kind),
        label(map, &edge.src).to_string(),
        label(map, &edge.dst).to_string(),
    )
}

/// One hypothesis per edge, ordered by (kind, source label, target label)
/// so the result does not depend on edge creation order.
pub fn generate(map: &CognitiveMap) -> Result<Vec<Hypothesis>, HypogenError> {
    let diagnostics = map.validate();
    if has_errors(&diagnostics) {
        return Err(HypogenError::InvalidMap(diagnostics));
    }
    let mut edges: Vec<&MapEdge> = map.edges().iter().collect();
    edges.sort_by_cached_key(|e| sort_key(map, e));
    Ok(edges
        .into_iter()
        .map(|e| Hypothesis {
            id: hypothesis_id(map, e),
            edge: e.id.clone(),
            kind: HypothesisKind::of(e.kind),
            generated_text: statement_for(map, e),
            edited_text: None,
            stale: false,
        })
        .collect())
}

/// Bring a previous hypothesis list in line with the current map.
///
/// Surviving edges keep their hypothesis id and edited text; the entry turns
/// stale when its generated text changed. Removed edges drop out and new
/// edges get fresh hypotheses.
pub fn regenerate(map: &CognitiveMap, previous: &[Hypothesis]) -> Result<Vec<Hypothesis>, HypogenError> {
    let by_edge: HashMap<&EdgeId, &Hypothesis> = previous.iter().map(|h| (&h.edge, h)).collect();
    Ok(generate(map)?
        .into_iter()
        .map(|fresh| match by_edge.get(&fresh.edge) {
            Some(old) => Hypothesis {
                id: old.id.clone(),
                edge: fresh.edge,
                kind: fresh.kind,
                stale: old.stale || old.generated_text != fresh.generated_text,
                generated_text: fresh.generated_text,
                edited_text: old.edited_text.clone(),
            },
            None => fresh,
        })
        .collect())
}

/// Order for experimentation: unvalidated before validated, then problem
/// before value before product, then higher risk first (unassessed risk
/// counts as high), then input order.
pub fn prioritize(hypotheses: &[Hypothesis], registry: &Registry) -> Vec<Hypothesis> {
    let mut out: Vec<Hypothesis> = hypotheses.to_vec();
    out.sort_by_key(|h| {
        let current = registry.current(&h.id);
        let validated = current.is_some_and(|a| a.status == Status::Validated);
        let risk = current.and_then(|a| a.risk).unwrap_or(Risk::High);
        (validated, h.kind, Reverse(risk))
    });
    out
}

pub fn to_json(hypotheses: &[Hypothesis]) -> String {
    serde_json::to_string_pretty(hypotheses).expect("hypotheses always serialize")
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

/// Markdown table with id, kind, statement, status and risk columns.
pub fn to_markdown(hypotheses: &[Hypothesis], registry: Option<&Registry>) -> String {
    let mut out = String::from("| id | kind | statement | status | risk |\n|---|---|---|---|---|\n");
    for h in hypotheses {
        let current = registry.and_then(|r| r.current(&h.id));
        let status = current.map_or(Status::Unassessed, |a| a.status);
        let risk = current.and_then(|a| a.risk).map_or("-", Risk::letter);
        let stale = if h.stale { " (stale)" } else { "" };
        out.push_str(&format!(
            "| {} | {} | {}{} | {} | {} |\n",
            h.id,
            h.kind,
            md_cell(h.statement()),
            stale,
            status.as_str(),
            risk
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{NodeId, NodeKind, ProblemConnective};
    use crate::registry::{Evidence, EvidenceKind};

    fn two(kind_a: NodeKind, a: &str, kind_b: NodeKind, b: &str, sign: Option<Sign>) -> (CognitiveMap, EdgeId) {
        let mut m = CognitiveMap::new("t");
        let (pa, pb);
        if kind_a == NodeKind::Product {
            pa = m.add_node(kind_a, a).unwrap();
        } else {
            m.add_node(NodeKind::Product, "app").unwrap();
            pa = m.add_node(kind_a, a).unwrap();
        }
        pb = m.add_node(kind_b, b).unwrap();
        let e = m.add_edge(&pa, &pb, sign).unwrap();
        (m, e)
    }

    fn text_of(m: &CognitiveMap, e: &EdgeId) -> String {
        statement_for(m, m.edge(e.as_str()).unwrap())
    }

    #[test]
    fn product_template() {
        let (m, e) = two(
            NodeKind::Product,
            "app",
            NodeKind::Feature,
            "search of nearby people with similar interests",
            None,
        );
        assert_eq!(
            text_of(&m, &e),
            "the team developing app is capable of implementing search of nearby people with similar interests"
        );
    }

    #[test]
    fn value_template_verbs() {
        for (sign, expected) in [
            (Sign::Positive, "a increases b"),
            (Sign::Negative, "a decreases b"),
            (Sign::Neutral, "a does not affect b"),
        ] {
            let (m, e) = two(NodeKind::Concept, "a", NodeKind::Concept, "b", Some(sign));
            assert_eq!(text_of(&m, &e), expected);
        }
    }

    #[test]
    fn problem_template_connectives() {
        let (mut m, e) = two(
            NodeKind::Customer,
            "sports enthusiasts",
            NodeKind::Concept,
            "difficulty to access sports gear",
            None,
        );
        assert_eq!(text_of(&m, &e), "sports enthusiasts have difficulty to access sports gear");
        m.set_connective(e.as_str(), ProblemConnective::WouldLikeTo).unwrap();
        assert_eq!(text_of(&m, &e), "sports enthusiasts would like to difficulty to access sports gear");
    }

    #[test]
    fn connective_agrees_with_segment() {
        for (customer, expected) in [
            ("the patient", "the patient has x"),
            ("board game players", "board game players have x"),
            ("small business", "small business has x"),
            ("campus", "campus has x"),
        ] {
            let (m, e) = two(NodeKind::Customer, customer, NodeKind::Concept, "x", None);
            assert_eq!(text_of(&m, &e), expected);
        }
    }

    #[test]
    fn generate_refuses_invalid_maps() {
        let m = CognitiveMap::new("empty");
        assert!(matches!(generate(&m), Err(HypogenError::InvalidMap(_))));
    }

    #[test]
    fn regenerate_tracks_changes() {
        let mut m = CognitiveMap::new("t");
        let p = m.add_node(NodeKind::Product, "p").unwrap();
        let f = m.add_node(NodeKind::Feature, "f").unwrap();
        let c = m.add_node(NodeKind::Concept, "c").unwrap();
        let d = m.add_node(NodeKind::Concept, "d").unwrap();
        m.add_edge(&p, &f, None).unwrap();
        m.add_edge(&f, &c, Some(Sign::Positive)).unwrap();
        let cd = m.add_edge(&c, &d, Some(Sign::Positive)).unwrap();
        let mut first = generate(&m).unwrap();

        // identity
        assert_eq!(regenerate(&m, &first).unwrap(), first);

        let fc = first.iter_mut().find(|h| h.generated_text == "f increases c").unwrap();
        fc.edited_text = Some("feature f raises c".into());
        let fc_id = fc.id.clone();
        m.substitute_node(c.as_str(), "see").unwrap();
        let second = regenerate(&m, &first).unwrap();
        let h = second.iter().find(|h| h.id == fc_id).unwrap();
        assert!(h.stale);
        assert_eq!(h.edited_text.as_deref(), Some("feature f raises c"));
        assert_eq!(h.generated_text, "f increases see");
        assert_eq!(second.iter().filter(|h| h.stale).count(), 2);

        m.remove_element(cd.as_str()).unwrap();
        let third = regenerate(&m, &second).unwrap();
        assert_eq!(third.len(), 2);
        assert!(third.iter().all(|h| h.edge != cd));

        let nd = NodeId(d.0.clone());
        m.add_edge(&f, &nd, Some(Sign::Negative)).unwrap();
        let fourth = regenerate(&m, &third).unwrap();
        assert_eq!(fourth.len(), 3);
        assert!(!fourth.iter().find(|h| h.generated_text == "f decreases d").unwrap().stale);
    }

    fn hyp(id: &str, kind: HypothesisKind) -> Hypothesis {
        Hypothesis {
            id: id.into(),
            edge: EdgeId(format!("e-{id}")),
            kind,
            generated_text: id.into(),
            edited_text: None,
            stale: false,
        }
    }

    #[test]
    fn prioritize_rules() {
        let hs = vec![hyp("prob", HypothesisKind::Problem), hyp("val", HypothesisKind::Value)];
        let mut reg = Registry::default();
        let ev = vec![Evidence::new(EvidenceKind::OwnExperience)];
        reg.assess(&hs, &"prob".into(), Status::Validated, Some(Risk::High), ev).unwrap();
        reg.assess(&hs, &"val".into(), Status::NotValidated, Some(Risk::High), vec![]).unwrap();
        let order: Vec<_> = prioritize(&hs, &reg).into_iter().map(|h| h.id.0).collect();
        assert_eq!(order, vec!["val", "prob"]);

        let hs = vec![hyp("m", HypothesisKind::Problem), hyp("h", HypothesisKind::Problem)];
        let mut reg = Registry::default();
        reg.assess(&hs, &"m".into(), Status::NotValidated, Some(Risk::Medium), vec![]).unwrap();
        reg.assess(&hs, &"h".into(), Status::NotValidated, Some(Risk::High), vec![]).unwrap();
        let order: Vec<_> = prioritize(&hs, &reg).into_iter().map(|h| h.id.0).collect();
        assert_eq!(order, vec!["h", "m"]);

        let hs = vec![
            hyp("a", HypothesisKind::Value),
            hyp("b", HypothesisKind::Value),
            hyp("c", HypothesisKind::Value),
        ];
        let order: Vec<_> = prioritize(&hs, &Registry::default()).into_iter().map(|h| h.id.0).collect();
        assert_eq!(order, vec!["a", "b", "c"]);
    }

    #[test]
    fn markdown_columns() {
        let hs = vec![hyp("x|y", HypothesisKind::Value)];
        let md = to_markdown(&hs, None);
        assert!(md.starts_with("| id | kind | statement | status | risk |"));
        assert!(md.contains("x\\|y | unassessed | - |"));
    }
}
