//! JSON interchange for maps (schema version 1).

use std::collections::HashSet;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{CognitiveMap, EdgeId, EdgeKind, MapEdge, MapNode, NodeId, NodeKind, ProblemConnective, Sign};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Malformed(String),
    #[error("unsupported schema version {found} (expected {SCHEMA_VERSION})")]
    UnsupportedVersion { found: u64 },
    #[error("schema violation at {path}: {message}")]
    SchemaViolation { path: String, message: String },
    #[error("{path} references unknown node `{id}`")]
    DanglingReference { path: String, id: String },
}

impl JsonError {
    pub fn code(&self) -> &'static str {
        match self {
            JsonError::Malformed(_) => "Malformed",
            JsonError::UnsupportedVersion { .. } => "UnsupportedVersion",
            JsonError::SchemaViolation { .. } => "SchemaViolation",
            JsonError::DanglingReference { .. } => "DanglingReference",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    pub version: u32,
    pub id: String,
    pub title: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub created: Option<DateTime<Utc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modified: Option<DateTime<Utc>>,
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<EdgeDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDoc {
    pub id: NodeId,
    pub kind: NodeKind,
    pub label: String,
    #[serde(default)]
    pub notes: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: EdgeId,
    pub src: NodeId,
    pub dst: NodeId,
    pub kind: EdgeKind,
    #[serde(default)]
    pub sign: Option<Sign>,
    #[serde(default)]
    pub saturated: bool,
    #[serde(default)]
    pub rationale: Option<String>,
    #[serde(default, skip_serializing_if = "ProblemConnective::is_default")]
    pub connective: ProblemConnective,
}

impl From<&CognitiveMap> for MapDocument {
    fn from(map: &CognitiveMap) -> Self {
        MapDocument {
            version: SCHEMA_VERSION,
            id: map.id().to_string(),
            title: map.title().to_string(),
            created: Some(map.created()),
            modified: Some(map.modified()),
            nodes: map
                .nodes()
                .iter()
                .map(|n| NodeDoc {
                    id: n.id.clone(),
                    kind: n.kind,
                    label: n.label.clone(),
                    notes: n.notes.clone(),
                })
                .collect(),
            edges: map
                .edges()
                .iter()
                .map(|e| EdgeDoc {
                    id: e.id.clone(),
                    src: e.src.clone(),
                    dst: e.dst.clone(),
                    kind: e.kind,
                    sign: e.sign,
                    saturated: e.saturated,
                    rationale: e.rationale.clone(),
                    connective: e.connective,
                })
                .collect(),
        }
    }
}

impl MapDocument {
    /// Reference checks, then assembly. Semantic rules are left to
    /// [`CognitiveMap::validate`].
    pub fn into_map(self) -> Result<CognitiveMap, JsonError> {
        let mut seen = HashSet::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if !seen.insert(n.id.as_str()) {
                return Err(JsonError::SchemaViolation {
                    path: format!("/nodes/{i}/id"),
                    message: format!("duplicate id `{}`", n.id),
                });
            }
        }
        let node_ids = seen.clone();
        for (i, e) in self.edges.iter().enumerate() {
            if !seen.insert(e.id.as_str()) {
                return Err(JsonError::SchemaViolation {
                    path: format!("/edges/{i}/id"),
                    message: format!("duplicate id `{}`", e.id),
                });
            }
            for (field, id) in [("src", &e.src), ("dst", &e.dst)] {
                if !node_ids.contains(id.as_str()) {
                    return Err(JsonError::DanglingReference {
                        path: format!("/edges/{i}/{field}"),
                        id: id.0.clone(),
                    });
                }
            }
        }
        let nodes = self
            .nodes
            .into_iter()
            .map(|n| MapNode {
                id: n.id,
                kind: n.kind,
                label: n.label,
                notes: n.notes,
            })
            .collect();
        let edges = self
            .edges
            .into_iter()
            .map(|e| MapEdge {
                id: e.id,
                src: e.src,
                dst: e.dst,
                kind: e.kind,
                sign: e.sign,
                saturated: e.saturated,
                rationale: e.rationale,
                connective: e.connective,
            })
            .collect();
        let mut map = CognitiveMap::from_parts(self.id, self.title, nodes, edges);
        if let (Some(c), Some(m)) = (self.created, self.modified) {
            map.set_timestamps(c, m);
        }
        Ok(map)
    }

    /// Parse and schema-check a JSON value, with JSON-pointer error paths.
    pub fn from_value(value: serde_json::Value) -> Result<Self, JsonError> {
        match value.get("version") {
            None => {
                return Err(JsonError::SchemaViolation {
                    path: "/version".into(),
                    message: "missing field `version`".into(),
                })
            }
            Some(v) => match v.as_u64() {
                Some(n) if n == u64::from(SCHEMA_VERSION) => {}
                Some(n) => return Err(JsonError::UnsupportedVersion { found: n }),
                None => {
                    return Err(JsonError::SchemaViolation {
                        path: "/version".into(),
                        message: "expected an integer".into(),
                    })
                }
            },
        }
        serde_path_to_error::deserialize(value).map_err(|e| {
            let path = pointer(&e.path().to_string());
            JsonError::SchemaViolation {
                path,
                message: e.into_inner().to_string(),
            }
        })
    }
}

/// `edges[2].kind` -> `/edges/2/kind`
fn pointer(path: &str) -> String {
    if path == "." || path.is_empty() {
        return String::new();
    }
    let mut out = String::new();
    for seg in path.split('.') {
        let mut rest = seg;
        if let Some(open) = rest.find('[') {
            out.push('/');
            out.push_str(&rest[..open]);
            rest = &rest[open..];
            while let Some(close) = rest.find(']') {
                out.push('/');
                out.push_str(&rest[1..close]);
                rest = &rest[close + 1..];
            }
        } else {
            out.push('/');
            out.push_str(rest);
        }
    }
    out.replace("//", "/")
}

pub fn export_json(map: &CognitiveMap) -> String {
    serde_json::to_string_pretty(&MapDocument::from(map)).expect("map documents always serialize")
}

pub fn import_json(text: &str) -> Result<CognitiveMap, JsonError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| JsonError::Malformed(e.to_string()))?;
    MapDocument::from_value(value)?.into_map()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::NodeKind;

    fn sample() -> CognitiveMap {
        let mut m = CognitiveMap::new("sample");
        let p = m.add_node(NodeKind::Product, "app").unwrap();
        let f = m.add_node(NodeKind::Feature, "search").unwrap();
        let c = m.add_node(NodeKind::Concept, "difficulty").unwrap();
        m.add_edge(&p, &f, None).unwrap();
        let e = m.add_edge(&f, &c, Some(Sign::Negative)).unwrap();
        m.set_saturated(e.as_str(), true).unwrap();
        m.set_rationale(e.as_str(), Some("surveys".into())).unwrap();
        m.set_notes(c.as_str(), Some("from interviews".into())).unwrap();
        m
    }

    #[test]
    fn round_trip_keeps_ids_and_flags() {
        let m = sample();
        let back = import_json(&export_json(&m)).unwrap();
        assert_eq!(back.nodes(), m.nodes());
        assert_eq!(back.edges(), m.edges());
        assert_eq!(back.id(), m.id());
        assert_eq!(back.created(), m.created());
    }

    #[test]
    fn unknown_version() {
        let mut v: serde_json::Value = serde_json::from_str(&export_json(&sample())).unwrap();
        v["version"] = 7.into();
        assert_eq!(
            import_json(&v.to_string()).unwrap_err(),
            JsonError::UnsupportedVersion { found: 7 }
        );
    }

    #[test]
    fn dangling_reference_has_path() {
        let mut v: serde_json::Value = serde_json::from_str(&export_json(&sample())).unwrap();
        v["edges"][1]["dst"] = "concept-99".into();
        assert_eq!(
            import_json(&v.to_string()).unwrap_err(),
            JsonError::DanglingReference {
                path: "/edges/1/dst".into(),
                id: "concept-99".into()
            }
        );
    }

    #[test]
    fn schema_violation_has_pointer() {
        let mut v: serde_json::Value = serde_json::from_str(&export_json(&sample())).unwrap();
        v["nodes"][2]["kind"] = "widget".into();
        match import_json(&v.to_string()).unwrap_err() {
            JsonError::SchemaViolation { path, .. } => assert_eq!(path, "/nodes/2/kind"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(import_json("{"), Err(JsonError::Malformed(_))));
    }
}
