//! Cognitive-map graph model.
//!
//! A map holds exactly one product, any number of customers, features and
//! concepts, and typed directed edges between them. The edge kind is never
//! chosen by the caller: it follows from the kinds of the two endpoints.
//!
//! | source   | target  | kind       |
//! |----------|---------|------------|
//! | Product  | Feature | Offering   |
//! | Feature  | Concept | Influence  |
//! | Concept  | Concept | Influence  |
//! | Customer | Concept | Perception |
//!
//! Every other ordered pair of kinds is rejected. Influence edges carry a
//! [`Sign`], the others never do, and the graph as a whole stays acyclic.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Product,
    Customer,
    Feature,
    Concept,
}

impl NodeKind {
    pub const ALL: [NodeKind; 4] = [
        NodeKind::Product,
        NodeKind::Customer,
        NodeKind::Feature,
        NodeKind::Concept,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Product => "product",
            NodeKind::Customer => "customer",
            NodeKind::Feature => "feature",
            NodeKind::Concept => "concept",
        }
    }

    /// Features and concepts can both start an influence edge and are
    /// referenced by label in the same position, so they share one label
    /// namespace.
    fn label_namespace(self) -> u8 {
        match self {
            NodeKind::Product => 0,
            NodeKind::Customer => 1,
            NodeKind::Feature | NodeKind::Concept => 2,
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NodeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "product" => Ok(NodeKind::Product),
            "customer" => Ok(NodeKind::Customer),
            "feature" => Ok(NodeKind::Feature),
            "concept" => Ok(NodeKind::Concept),
            other => Err(format!("unknown node kind `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Offering,
    Influence,
    Perception,
}

impl EdgeKind {
    /// The edge kind implied by an ordered pair of endpoint kinds, or `None`
    /// when the pair is not a legal relationship.
    pub fn between(src: NodeKind, dst: NodeKind) -> Option<EdgeKind> {
        use NodeKind::*;
        match (src, dst) {
            (Product, Feature) => Some(EdgeKind::Offering),
            (Feature, Concept) | (Concept, Concept) => Some(EdgeKind::Influence),
            (Customer, Concept) => Some(EdgeKind::Perception),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Offering => "offering",
            EdgeKind::Influence => "influence",
            EdgeKind::Perception => "perception",
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Direction of an influence relationship.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
    /// "does not affect"; also used for claims of the form "will not decrease".
    #[serde(rename = "o")]
    Neutral,
}

impl Sign {
    pub const ALL: [Sign; 3] = [Sign::Positive, Sign::Negative, Sign::Neutral];

    /// Symbol used in source files and JSON.
    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
            Sign::Neutral => "o",
        }
    }

    /// Arrow label used in diagrams.
    pub fn diagram_label(self) -> &'static str {
        match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
            Sign::Neutral => "/o/",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Sign {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "+" | "positive" | "increases" => Ok(Sign::Positive),
            "-" | "\u{2212}" | "negative" | "decreases" => Ok(Sign::Negative),
            "o" | "/o/" | "neutral" | "0" => Ok(Sign::Neutral),
            other => Err(format!("unknown sign `{other}` (expected +, - or o)")),
        }
    }
}

/// Connective used when a perception edge is phrased as a problem statement.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemConnective {
    #[default]
    Has,
    WouldLikeTo,
}

impl ProblemConnective {
    pub fn phrase(self) -> &'static str {
        match self {
            ProblemConnective::Has => "has",
            ProblemConnective::WouldLikeTo => "would like to",
        }
    }

    pub fn is_default(&self) -> bool {
        *self == ProblemConnective::Has
    }
}

macro_rules! string_id {
    ($name:ident) => {
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub String);

        impl $name {
            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name(s.to_string())
            }
        }

        impl std::borrow::Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }
    };
}

string_id!(NodeId);
string_id!(EdgeId);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapNode {
    pub id: NodeId,
    pub kind: NodeKind,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapEdge {
    pub id: EdgeId,
    pub src: NodeId,
    pub dst: NodeId,
    pub kind: EdgeKind,
    pub sign: Option<Sign>,
    /// The founder judged that no underlying concept remains to be made explicit.
    #[serde(default)]
    pub saturated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rationale: Option<String>,
    #[serde(default, skip_serializing_if = "ProblemConnective::is_default")]
    pub connective: ProblemConnective,
}

/// Case-fold and collapse whitespace. Two labels of the same namespace that
/// normalize identically are duplicates.
pub fn normalize_label(label: &str) -> String {
    label
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("label must not be empty")]
    EmptyLabel,
    #[error("a {kind} labelled {label:?} already exists")]
    DuplicateLabel { kind: NodeKind, label: String },
    #[error("the map already has a product node")]
    SecondProduct,
    #[error("unknown element id `{0}`")]
    UnknownId(String),
    #[error("a {src} cannot point to a {dst}")]
    IllegalEndpointPair { src: NodeKind, dst: NodeKind },
    #[error("influence edges need a sign (+, - or o)")]
    MissingSign,
    #[error("only influence edges carry a sign")]
    UnexpectedSign,
    #[error("edge would close a cycle: {}", join_ids(.path))]
    WouldCreateCycle { path: Vec<NodeId> },
    #[error("an edge {src} -> {dst} already exists")]
    DuplicateEdge { src: NodeId, dst: NodeId },
    #[error("an element cannot point to itself")]
    SelfLoop,
    #[error("the product node can only be removed by deleting the map")]
    ProductRemoval,
}

impl ModelError {
    /// Stable identifier shared by the CLI, the HTTP API and diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            ModelError::EmptyLabel => "EmptyLabel",
            ModelError::DuplicateLabel { .. } => "DuplicateLabel",
            ModelError::SecondProduct => "SecondProduct",
            ModelError::UnknownId(_) => "UnknownId",
            ModelError::IllegalEndpointPair { .. } => "IllegalEndpointPair",
            ModelError::MissingSign => "MissingSign",
            ModelError::UnexpectedSign => "UnexpectedSign",
            ModelError::WouldCreateCycle { .. } => "WouldCreateCycle",
            ModelError::DuplicateEdge { .. } => "DuplicateEdge",
            ModelError::SelfLoop => "SelfLoop",
            ModelError::ProductRemoval => "ProductRemoval",
        }
    }
}

fn join_ids(path: &[NodeId]) -> String {
    path.iter().map(|id| id.as_str()).collect::<Vec<_>>().join(" -> ")
}

/// What [`CognitiveMap::remove_element`] took out of the map.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Removal {
    pub node: Option<MapNode>,
    pub edges: Vec<MapEdge>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CognitiveMap {
    id: String,
    title: String,
    nodes: Vec<MapNode>,
    edges: Vec<MapEdge>,
    created: DateTime<Utc>,
    modified: DateTime<Utc>,
    next_seq: u64,
}

impl CognitiveMap {
    pub fn new(title: impl Into<String>) -> Self {
        let now = Utc::now();
        CognitiveMap {
            id: "map".to_string(),
            title: title.into(),
            nodes: Vec::new(),
            edges: Vec::new(),
            created: now,
            modified: now,
            next_seq: 1,
        }
    }

    /// Assemble a map from raw parts without checking any invariant.
    ///
    /// Used by importers; run [`CognitiveMap::validate`] on the result.
    pub fn from_parts(
        id: impl Into<String>,
        title: impl Into<String>,
        nodes: Vec<MapNode>,
        edges: Vec<MapEdge>,
    ) -> Self {
        let next_seq = nodes
            .iter()
            .map(|n| n.id.as_str())
            .chain(edges.iter().map(|e| e.id.as_str()))
            .filter_map(|id| id.rsplit('-').next()?.parse::<u64>().ok())
            .max()
            .unwrap_or(0)
            + 1;
        let mut map = CognitiveMap::new(title);
        map.id = id.into();
        map.nodes = nodes;
        map.edges = edges;
        map.next_seq = next_seq;
        map
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn set_id(&mut self, id: impl Into<String>) {
        self.id = id.into();
    }

    pub fn title(&self) -> &str {
        &self.title
    }

    pub fn set_title(&mut self, title: impl Into<String>) {
        self.title = title.into();
        self.touch();
    }

    pub fn created(&self) -> DateTime<Utc> {
        self.created
    }

    pub fn modified(&self) -> DateTime<Utc> {
        self.modified
    }

    pub fn set_timestamps(&mut self, created: DateTime<Utc>, modified: DateTime<Utc>) {
        self.created = created;
        self.modified = modified;
    }

    /// Nodes in creation order.
    pub fn nodes(&self) -> &[MapNode] {
        &self.nodes
    }

    /// Edges in creation order.
    pub fn edges(&self) -> &[MapEdge] {
        &self.edges
    }

    pub fn node(&self, id: &str) -> Option<&MapNode> {
        self.nodes.iter().find(|n| n.id.as_str() == id)
    }

    pub fn edge(&self, id: &str) -> Option<&MapEdge> {
        self.edges.iter().find(|e| e.id.as_str() == id)
    }

    pub fn product(&self) -> Option<&MapNode> {
        self.nodes.iter().find(|n| n.kind == NodeKind::Product)
    }

    pub fn nodes_of(&self, kind: NodeKind) -> impl Iterator<Item = &MapNode> {
        self.nodes.iter().filter(move |n| n.kind == kind)
    }

    pub fn edges_of(&self, kind: EdgeKind) -> impl Iterator<Item = &MapEdge> {
        self.edges.iter().filter(move |e| e.kind == kind)
    }

    /// Node of `kind` whose label normalizes like `label`.
    pub fn find_label(&self, kind: NodeKind, label: &str) -> Option<&MapNode> {
        let wanted = normalize_label(label);
        self.nodes
            .iter()
            .find(|n| n.kind == kind && normalize_label(&n.label) == wanted)
    }

    /// All nodes, of any kind, whose label normalizes like `label`.
    pub fn find_any_label(&self, label: &str) -> Vec<&MapNode> {
        let wanted = normalize_label(label);
        self.nodes
            .iter()
            .filter(|n| normalize_label(&n.label) == wanted)
            .collect()
    }

    pub fn add_node(&mut self, kind: NodeKind, label: &str) -> Result<NodeId, ModelError> {
        if label.trim().is_empty() {
            return Err(ModelError::EmptyLabel);
        }
        if kind == NodeKind::Product && self.product().is_some() {
            return Err(ModelError::SecondProduct);
        }
        self.check_label_free(kind, label, None)?;
        let id = NodeId(format!("{}-{}", kind.as_str(), self.bump()));
        self.nodes.push(MapNode {
            id: id.clone(),
            kind,
            label: label.to_string(),
            notes: None,
        });
        self.touch();
        Ok(id)
    }

    pub fn add_edge(
        &mut self,
        src: &NodeId,
        dst: &NodeId,
        sign: Option<Sign>,
    ) -> Result<EdgeId, ModelError> {
        let src_kind = self
            .node(src.as_str())
            .ok_or_else(|| ModelError::UnknownId(src.0.clone()))?
            .kind;
        let dst_kind = self
            .node(dst.as_str())
            .ok_or_else(|| ModelError::UnknownId(dst.0.clone()))?
            .kind;
        if src == dst {
            return Err(ModelError::SelfLoop);
        }
        let kind = EdgeKind::between(src_kind, dst_kind).ok_or(ModelError::IllegalEndpointPair {
            src: src_kind,
            dst: dst_kind,
        })?;
        match (kind, sign) {
            (EdgeKind::Influence, None) => return Err(ModelError::MissingSign),
            (EdgeKind::Offering | EdgeKind::Perception, Some(_)) => {
                return Err(ModelError::UnexpectedSign)
            }
            _ => {}
        }
        if self
            .edges
            .iter()
            .any(|e| &e.src == src && &e.dst == dst && e.kind == kind)
        {
            return Err(ModelError::DuplicateEdge {
                src: src.clone(),
                dst: dst.clone(),
            });
        }
        if let Some(back) = self.path(dst, src) {
            let mut cycle = vec![src.clone()];
            cycle.extend(back);
            return Err(ModelError::WouldCreateCycle { path: cycle });
        }
        let id = EdgeId(format!("{}-{}", kind.as_str(), self.bump()));
        self.edges.push(MapEdge {
            id: id.clone(),
            src: src.clone(),
            dst: dst.clone(),
            kind,
            sign,
            saturated: false,
            rationale: None,
            connective: ProblemConnective::Has,
        });
        self.touch();
        Ok(id)
    }

    /// Remove a node (with its incident edges) or a single edge.
    pub fn remove_element(&mut self, id: &str) -> Result<Removal, ModelError> {
        if let Some(pos) = self.edges.iter().position(|e| e.id.as_str() == id) {
            let edge = self.edges.remove(pos);
            self.touch();
            return Ok(Removal {
                node: None,
                edges: vec![edge],
            });
        }
        let pos = self
            .nodes
            .iter()
            .position(|n| n.id.as_str() == id)
            .ok_or_else(|| ModelError::UnknownId(id.to_string()))?;
        if self.nodes[pos].kind == NodeKind::Product {
            return Err(ModelError::ProductRemoval);
        }
        let node = self.nodes.remove(pos);
        let (gone, kept): (Vec<_>, Vec<_>) = std::mem::take(&mut self.edges)
            .into_iter()
            .partition(|e| e.src == node.id || e.dst == node.id);
        self.edges = kept;
        self.touch();
        Ok(Removal {
            node: Some(node),
            edges: gone,
        })
    }

    /// Replace a node's label, keeping its id and every incident edge.
    pub fn substitute_node(&mut self, id: &str, label: &str) -> Result<String, ModelError> {
        if label.trim().is_empty() {
            return Err(ModelError::EmptyLabel);
        }
        let kind = self
            .node(id)
            .ok_or_else(|| ModelError::UnknownId(id.to_string()))?
            .kind;
        self.check_label_free(kind, label, Some(id))?;
        let node = self
            .nodes
            .iter_mut()
            .find(|n| n.id.as_str() == id)
            .expect("checked above");
        let old = std::mem::replace(&mut node.label, label.to_string());
        self.touch();
        Ok(old)
    }

    pub fn set_saturated(&mut self, edge: &str, saturated: bool) -> Result<(), ModelError> {
        self.edge_mut(edge)?.saturated = saturated;
        self.touch();
        Ok(())
    }

    pub fn set_connective(
        &mut self,
        edge: &str,
        connective: ProblemConnective,
    ) -> Result<(), ModelError> {
        self.edge_mut(edge)?.connective = connective;
        self.touch();
        Ok(())
    }

    pub fn set_rationale(&mut self, edge: &str, rationale: Option<String>) -> Result<(), ModelError> {
        self.edge_mut(edge)?.rationale = rationale;
        self.touch();
        Ok(())
    }

    pub fn set_notes(&mut self, node: &str, notes: Option<String>) -> Result<(), ModelError> {
        self.nodes
            .iter_mut()
            .find(|n| n.id.as_str() == node)
            .ok_or_else(|| ModelError::UnknownId(node.to_string()))?
            .notes = notes;
        self.touch();
        Ok(())
    }

    /// Shape of the map with ids, timestamps and free text stripped.
    ///
    /// Two maps with equal signatures are "equal up to ids".
    pub fn signature(&self) -> MapSignature {
        let label_of: HashMap<&str, &MapNode> =
            self.nodes.iter().map(|n| (n.id.as_str(), n)).collect();
        let mut nodes: Vec<(NodeKind, String)> = self
            .nodes
            .iter()
            .map(|n| (n.kind, n.label.clone()))
            .collect();
        nodes.sort();
        let mut edges: Vec<EdgeSignature> = self
            .edges
            .iter()
            .map(|e| {
                let end = |id: &NodeId| {
                    label_of
                        .get(id.as_str())
                        .map(|n| (n.kind, n.label.clone()))
                        .unwrap_or((NodeKind::Concept, format!("<missing {id}>")))
                };
                EdgeSignature {
                    kind: e.kind,
                    src: end(&e.src),
                    dst: end(&e.dst),
                    sign: e.sign,
                }
            })
            .collect();
        edges.sort();
        MapSignature { nodes, edges }
    }

    pub fn structurally_eq(&self, other: &CognitiveMap) -> bool {
        self.signature() == other.signature()
    }

    fn edge_mut(&mut self, id: &str) -> Result<&mut MapEdge, ModelError> {
        self.edges
            .iter_mut()
            .find(|e| e.id.as_str() == id)
            .ok_or_else(|| ModelError::UnknownId(id.to_string()))
    }

    fn check_label_free(
        &self,
        kind: NodeKind,
        label: &str,
        except: Option<&str>,
    ) -> Result<(), ModelError> {
        let wanted = normalize_label(label);
        let clash = self.nodes.iter().any(|n| {
            Some(n.id.as_str()) != except
                && n.kind.label_namespace() == kind.label_namespace()
                && normalize_label(&n.label) == wanted
        });
        if clash {
            Err(ModelError::DuplicateLabel {
                kind,
                label: label.to_string(),
            })
        } else {
            Ok(())
        }
    }

    /// Shortest directed path `from ~> to`, both ends included.
    fn path(&self, from: &NodeId, to: &NodeId) -> Option<Vec<NodeId>> {
        let mut parent: HashMap<&NodeId, &NodeId> = HashMap::new();
        let mut seen: HashSet<&NodeId> = HashSet::from([from]);
        let mut queue = VecDeque::from([from]);
        while let Some(cur) = queue.pop_front() {
            if cur == to {
                let mut path = vec![cur.clone()];
                let mut at = cur;
                while let Some(p) = parent.get(at) {
                    path.push((*p).clone());
                    at = p;
                }
                path.reverse();
                return Some(path);
            }
            for e in self.edges.iter().filter(|e| &e.src == cur) {
                if seen.insert(&e.dst) {
                    parent.insert(&e.dst, cur);
                    queue.push_back(&e.dst);
                }
            }
        }
        None
    }

    fn bump(&mut self) -> u64 {
        let n = self.next_seq;
        self.next_seq += 1;
        n
    }

    fn touch(&mut self) {
        self.modified = Utc::now();
    }
}

/// Id-free view of an edge: endpoints as (kind, label).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeSignature {
    pub kind: EdgeKind,
    pub src: (NodeKind, String),
    pub dst: (NodeKind, String),
    pub sign: Option<Sign>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MapSignature {
    pub nodes: Vec<(NodeKind, String)>,
    pub edges: Vec<EdgeSignature>,
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiagnosticCode {
    MissingProduct,
    MultipleProducts,
    DuplicateId,
    EmptyLabel,
    DuplicateLabel,
    DanglingEndpoint,
    SelfLoop,
    IllegalEndpointPair,
    EdgeKindMismatch,
    MissingSign,
    UnexpectedSign,
    DuplicateEdge,
    Cycle,
    OrphanFeature,
    UnreachableConcept,
    CustomerWithoutProblems,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticCode::MissingProduct => "MissingProduct",
            DiagnosticCode::MultipleProducts => "MultipleProducts",
            DiagnosticCode::DuplicateId => "DuplicateId",
            DiagnosticCode::EmptyLabel => "EmptyLabel",
            DiagnosticCode::DuplicateLabel => "DuplicateLabel",
            DiagnosticCode::DanglingEndpoint => "DanglingEndpoint",
            DiagnosticCode::SelfLoop => "SelfLoop",
            DiagnosticCode::IllegalEndpointPair => "IllegalEndpointPair",
            DiagnosticCode::EdgeKindMismatch => "EdgeKindMismatch",
            DiagnosticCode::MissingSign => "MissingSign",
            DiagnosticCode::UnexpectedSign => "UnexpectedSign",
            DiagnosticCode::DuplicateEdge => "DuplicateEdge",
            DiagnosticCode::Cycle => "Cycle",
            DiagnosticCode::OrphanFeature => "OrphanFeature",
            DiagnosticCode::UnreachableConcept => "UnreachableConcept",
            DiagnosticCode::CustomerWithoutProblems => "CustomerWithoutProblems",
        }
    }
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: DiagnosticCode,
    pub subjects: Vec<String>,
    pub message: String,
}

impl Diagnostic {
    fn new(severity: Severity, code: DiagnosticCode, subjects: Vec<String>, message: String) -> Self {
        Diagnostic {
            severity,
            code,
            subjects,
            message,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}[{}]: {}", self.code, self.message)?;
        if !self.subjects.is_empty() {
            write!(f, " ({})", self.subjects.join(", "))?;
        }
        Ok(())
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}

impl CognitiveMap {
    /// Check every structural rule. The list is empty iff the map is well
    /// formed and has no structural gaps; gaps are reported as warnings.
    ///
    /// Ordered by (severity, code, subjects).
    pub fn validate(&self) -> Vec<Diagnostic> {
        use DiagnosticCode as C;
        use Severity::{Error as E, Warning as W};
        let mut out = Vec::new();

        let products: Vec<&MapNode> = self.nodes_of(NodeKind::Product).collect();
        match products.len() {
            0 => out.push(Diagnostic::new(
                E,
                C::MissingProduct,
                vec![],
                "the map has no product node".into(),
            )),
            1 => {}
            _ => out.push(Diagnostic::new(
                E,
                C::MultipleProducts,
                products.iter().map(|n| n.id.0.clone()).collect(),
                "the map has more than one product node".into(),
            )),
        }

        let mut by_id: HashMap<&str, &MapNode> = HashMap::new();
        let mut seen_ids: HashSet<&str> = HashSet::new();
        for n in &self.nodes {
            if !seen_ids.insert(n.id.as_str()) {
                out.push(Diagnostic::new(
                    E,
                    C::DuplicateId,
                    vec![n.id.0.clone()],
                    format!("id `{}` is used more than once", n.id),
                ));
            }
            by_id.entry(n.id.as_str()).or_insert(n);
            if n.label.trim().is_empty() {
                out.push(Diagnostic::new(
                    E,
                    C::EmptyLabel,
                    vec![n.id.0.clone()],
                    format!("{} `{}` has an empty label", n.kind, n.id),
                ));
            }
        }
        for e in &self.edges {
            if !seen_ids.insert(e.id.as_str()) {
                out.push(Diagnostic::new(
                    E,
                    C::DuplicateId,
                    vec![e.id.0.clone()],
                    format!("id `{}` is used more than once", e.id),
                ));
            }
        }

        let mut labels: BTreeMap<(u8, String), Vec<&MapNode>> = BTreeMap::new();
        for n in self.nodes.iter().filter(|n| !n.label.trim().is_empty()) {
            labels
                .entry((n.kind.label_namespace(), normalize_label(&n.label)))
                .or_default()
                .push(n);
        }
        for ((_, label), group) in labels.iter().filter(|(_, g)| g.len() > 1) {
            let mut ids: Vec<String> = group.iter().map(|n| n.id.0.clone()).collect();
            ids.sort();
            out.push(Diagnostic::new(
                E,
                C::DuplicateLabel,
                ids,
                format!("label {label:?} is used by more than one element"),
            ));
        }

        let mut seen_edges: HashSet<(&str, &str, EdgeKind)> = HashSet::new();
        for e in &self.edges {
            let subject = vec![e.id.0.clone()];
            let (Some(src), Some(dst)) = (by_id.get(e.src.as_str()), by_id.get(e.dst.as_str()))
            else {
                out.push(Diagnostic::new(
                    E,
                    C::DanglingEndpoint,
                    subject,
                    format!("edge `{}` references a missing node", e.id),
                ));
                continue;
            };
            if e.src == e.dst {
                out.push(Diagnostic::new(
                    E,
                    C::SelfLoop,
                    subject.clone(),
                    format!("edge `{}` points to its own source", e.id),
                ));
            }
            match EdgeKind::between(src.kind, dst.kind) {
                None => out.push(Diagnostic::new(
                    E,
                    C::IllegalEndpointPair,
                    subject.clone(),
                    format!("a {} cannot point to a {}", src.kind, dst.kind),
                )),
                Some(k) if k != e.kind => out.push(Diagnostic::new(
                    E,
                    C::EdgeKindMismatch,
                    subject.clone(),
                    format!("edge `{}` is stored as {} but its endpoints imply {k}", e.id, e.kind),
                )),
                Some(_) => {}
            }
            match (e.kind, e.sign) {
                (EdgeKind::Influence, None) => out.push(Diagnostic::new(
                    E,
                    C::MissingSign,
                    subject.clone(),
                    format!("influence edge `{}` has no sign", e.id),
                )),
                (EdgeKind::Offering | EdgeKind::Perception, Some(_)) => {
                    out.push(Diagnostic::new(
                        E,
                        C::UnexpectedSign,
                        subject.clone(),
                        format!("{} edge `{}` carries a sign", e.kind, e.id),
                    ))
                }
                _ => {}
            }
            if !seen_edges.insert((e.src.as_str(), e.dst.as_str(), e.kind)) {
                out.push(Diagnostic::new(
                    E,
                    C::DuplicateEdge,
                    subject,
                    format!("edge `{}` duplicates an earlier {} -> {}", e.id, e.src, e.dst),
                ));
            }
        }

        for cycle in find_cycles(&self.nodes, &self.edges) {
            let shown = cycle
                .iter()
                .map(|id| by_id.get(id.as_str()).map(|n| n.label.as_str()).unwrap_or(id.as_str()))
                .collect::<Vec<_>>()
                .join(" -> ");
            out.push(Diagnostic::new(
                E,
                C::Cycle,
                cycle.iter().map(|id| id.0.clone()).collect(),
                format!("cycle: {shown}"),
            ));
        }

        let gaps = self.gaps();
        for id in gaps.orphan_features {
            let n = by_id[id.as_str()];
            out.push(Diagnostic::new(
                W,
                C::OrphanFeature,
                vec![id.0.clone()],
                format!("feature {:?} is not offered by the product or influences nothing", n.label),
            ));
        }
        for id in gaps.unreachable_concepts {
            let n = by_id[id.as_str()];
            out.push(Diagnostic::new(
                W,
                C::UnreachableConcept,
                vec![id.0.clone()],
                format!("concept {:?} is neither reached from a feature nor perceived by a customer", n.label),
            ));
        }
        for id in gaps.customers_without_problems {
            let n = by_id[id.as_str()];
            out.push(Diagnostic::new(
                W,
                C::CustomerWithoutProblems,
                vec![id.0.clone()],
                format!("customer {:?} perceives no problem", n.label),
            ));
        }

        out.sort_by(|a, b| {
            (a.severity, a.code.as_str(), &a.subjects).cmp(&(b.severity, b.code.as_str(), &b.subjects))
        });
        out
    }

    /// Structural gaps: elements that are legal but not yet tied into the map.
    pub fn gaps(&self) -> Gaps {
        let mut gaps = Gaps::default();
        let has_in = |id: &NodeId, kind: EdgeKind| {
            self.edges.iter().any(|e| &e.dst == id && e.kind == kind)
        };
        let has_out = |id: &NodeId, kind: EdgeKind| {
            self.edges.iter().any(|e| &e.src == id && e.kind == kind)
        };

        for f in self.nodes_of(NodeKind::Feature) {
            if !has_in(&f.id, EdgeKind::Offering) || !has_out(&f.id, EdgeKind::Influence) {
                gaps.orphan_features.push(f.id.clone());
            }
        }

        // Concepts reachable from any feature through influence edges.
        let mut reached: HashSet<&NodeId> = HashSet::new();
        let mut queue: VecDeque<&NodeId> = self.nodes_of(NodeKind::Feature).map(|n| &n.id).collect();
        while let Some(cur) = queue.pop_front() {
            for e in self
                .edges
                .iter()
                .filter(|e| &e.src == cur && e.kind == EdgeKind::Influence)
            {
                if reached.insert(&e.dst) {
                    queue.push_back(&e.dst);
                }
            }
        }
        for c in self.nodes_of(NodeKind::Concept) {
            if !reached.contains(&c.id) && !has_in(&c.id, EdgeKind::Perception) {
                gaps.unreachable_concepts.push(c.id.clone());
            }
        }

        for c in self.nodes_of(NodeKind::Customer) {
            if !has_out(&c.id, EdgeKind::Perception) {
                gaps.customers_without_problems.push(c.id.clone());
            }
        }
        gaps
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gaps {
    pub orphan_features: Vec<NodeId>,
    pub unreachable_concepts: Vec<NodeId>,
    pub customers_without_problems: Vec<NodeId>,
}

/// One concrete cycle per strongly connected component that has one.
fn find_cycles(nodes: &[MapNode], edges: &[MapEdge]) -> Vec<Vec<NodeId>> {
    let mut ids: Vec<&NodeId> = nodes.iter().map(|n| &n.id).collect();
    ids.sort();
    ids.dedup();
    let index: HashMap<&NodeId, usize> = ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); ids.len()];
    for e in edges {
        if let (Some(&s), Some(&d)) = (index.get(&e.src), index.get(&e.dst)) {
            if s != d {
                adj[s].push(d);
            }
        }
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }

    let sccs = tarjan(&adj);
    let mut cycles = Vec::new();
    for comp in sccs.into_iter().filter(|c| c.len() > 1) {
        let members: HashSet<usize> = comp.iter().copied().collect();
        let start = *comp.iter().min().expect("non-empty");
        // BFS inside the component from `start` back to `start`.
        let mut parent: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::from([start]);
        let mut seen = HashSet::from([start]);
        let mut closing = None;
        'search: while let Some(cur) = queue.pop_front() {
            for &nx in &adj[cur] {
                if !members.contains(&nx) {
                    continue;
                }
                if nx == start {
                    closing = Some(cur);
                    break 'search;
                }
                if seen.insert(nx) {
                    parent.insert(nx, cur);
                    queue.push_back(nx);
                }
            }
        }
        let Some(mut at) = closing else { continue };
        let mut path = vec![start, at];
        while let Some(&p) = parent.get(&at) {
            path.push(p);
            at = p;
        }
        path.reverse();
        cycles.push(path.into_iter().map(|i| ids[i].clone()).collect());
    }
    cycles.sort();
    cycles
}

fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct State<'a> {
        adj: &'a [Vec<usize>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }

    fn visit(s: &mut State<'_>, v: usize) {
        s.index[v] = Some(s.next);
        s.low[v] = s.next;
        s.next += 1;
        s.stack.push(v);
        s.on_stack[v] = true;
        for i in 0..s.adj[v].len() {
            let w = s.adj[v][i];
            match s.index[w] {
                None => {
                    visit(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(iw) if s.on_stack[w] => s.low[v] = s.low[v].min(iw),
                Some(_) => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            let mut comp = Vec::new();
            while let Some(w) = s.stack.pop() {
                s.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            s.out.push(comp);
        }
    }

    let n = adj.len();
    let mut s = State {
        adj,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if s.index[v].is_none() {
            visit(&mut s, v);
        }
    }
    s.out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(path: &[NodeId]) -> Vec<&str> {
        path.iter().map(|p| p.as_str()).collect()
    }

    #[test]
    fn first_product_then_second_is_rejected() {
        let mut m = CognitiveMap::new("t");
        let p = m.add_node(NodeKind::Product, "Board-game meetup app").unwrap();
        assert_eq!(m.node(p.as_str()).unwrap().kind, NodeKind::Product);
        assert_eq!(m.add_node(NodeKind::Product, "X"), Err(ModelError::SecondProduct));
    }

    #[test]
    fn empty_and_duplicate_labels() {
        let mut m = CognitiveMap::new("t");
        assert_eq!(m.add_node(NodeKind::Concept, "   "), Err(ModelError::EmptyLabel));
        m.add_node(NodeKind::Customer, "board game players").unwrap();
        assert!(matches!(
            m.add_node(NodeKind::Customer, "Board  Game players"),
            Err(ModelError::DuplicateLabel { .. })
        ));
        // Different namespace is fine.
        m.add_node(NodeKind::Concept, "board game players").unwrap();
        // Features share the concept namespace.
        assert!(matches!(
            m.add_node(NodeKind::Feature, "BOARD game players"),
            Err(ModelError::DuplicateLabel { .. })
        ));
    }

    #[test]
    fn edge_kind_follows_endpoints() {
        let mut m = CognitiveMap::new("t");
        let p = m.add_node(NodeKind::Product, "app").unwrap();
        let f = m.add_node(NodeKind::Feature, "nearby search").unwrap();
        let c = m
            .add_node(NodeKind::Concept, "difficulty to find people with similar interests")
            .unwrap();
        let cu = m.add_node(NodeKind::Customer, "players").unwrap();

        let off = m.add_edge(&p, &f, None).unwrap();
        assert_eq!(m.edge(off.as_str()).unwrap().kind, EdgeKind::Offering);
        let inf = m.add_edge(&f, &c, Some(Sign::Negative)).unwrap();
        let e = m.edge(inf.as_str()).unwrap();
        assert_eq!((e.kind, e.sign), (EdgeKind::Influence, Some(Sign::Negative)));
        let per = m.add_edge(&cu, &c, None).unwrap();
        assert_eq!(m.edge(per.as_str()).unwrap().kind, EdgeKind::Perception);

        assert_eq!(
            m.add_edge(&cu, &f, None),
            Err(ModelError::IllegalEndpointPair {
                src: NodeKind::Customer,
                dst: NodeKind::Feature
            })
        );
        assert_eq!(m.add_edge(&p, &f, Some(Sign::Positive)), Err(ModelError::UnexpectedSign));
        let c2 = m.add_node(NodeKind::Concept, "fun").unwrap();
        assert_eq!(m.add_edge(&c, &c2, None), Err(ModelError::MissingSign));
        assert!(matches!(m.add_edge(&p, &f, None), Err(ModelError::DuplicateEdge { .. })));
    }

    #[test]
    fn legal_pairs_enumeration() {
        // Oracle: the three legal pairs written out by hand.
        let legal = [
            (NodeKind::Product, NodeKind::Feature),
            (NodeKind::Feature, NodeKind::Concept),
            (NodeKind::Concept, NodeKind::Concept),
            (NodeKind::Customer, NodeKind::Concept),
        ];
        let mut rejected = 0;
        for s in NodeKind::ALL {
            for d in NodeKind::ALL {
                let is_legal = legal.contains(&(s, d));
                assert_eq!(EdgeKind::between(s, d).is_some(), is_legal, "{s}->{d}");
                if !is_legal {
                    rejected += 1;
                }
            }
        }
        // Feature->Concept and Concept->Concept are both Influence: three
        // edge kinds over four legal ordered pairs, twelve rejected.
        assert_eq!(rejected, 12);
    }

    #[test]
    fn two_cycle_reports_path_and_leaves_map_unchanged() {
        let mut m = CognitiveMap::new("t");
        m.add_node(NodeKind::Product, "p").unwrap();
        let a = m.add_node(NodeKind::Concept, "A").unwrap();
        let b = m.add_node(NodeKind::Concept, "B").unwrap();
        m.add_edge(&a, &b, Some(Sign::Positive)).unwrap();
        let before = m.signature();
        match m.add_edge(&b, &a, Some(Sign::Positive)) {
            Err(ModelError::WouldCreateCycle { path }) => {
                assert_eq!(ids(&path), vec![b.as_str(), a.as_str(), b.as_str()])
            }
            other => panic!("expected cycle, got {other:?}"),
        }
        assert_eq!(m.signature(), before);
        assert_eq!(m.add_edge(&a, &a, Some(Sign::Positive)), Err(ModelError::SelfLoop));
    }

    #[test]
    fn remove_cascades_and_protects_product() {
        let mut m = CognitiveMap::new("t");
        let p = m.add_node(NodeKind::Product, "p").unwrap();
        let f = m.add_node(NodeKind::Feature, "f").unwrap();
        let c = m.add_node(NodeKind::Concept, "c").unwrap();
        let d = m.add_node(NodeKind::Concept, "d").unwrap();
        m.add_edge(&p, &f, None).unwrap();
        m.add_edge(&f, &c, Some(Sign::Positive)).unwrap();
        let cd = m.add_edge(&c, &d, Some(Sign::Negative)).unwrap();

        let removed = m.remove_element(cd.as_str()).unwrap();
        assert!(removed.node.is_none());
        assert_eq!(m.edges().len(), 2);
        assert_eq!(m.nodes().len(), 4);

        m.add_edge(&c, &d, Some(Sign::Negative)).unwrap();
        let removed = m.remove_element(c.as_str()).unwrap();
        assert_eq!(removed.edges.len(), 2);
        assert!(m.node(c.as_str()).is_none());
        assert_eq!(m.edges().len(), 1);

        assert_eq!(m.remove_element(p.as_str()).unwrap_err(), ModelError::ProductRemoval);
        assert_eq!(
            m.remove_element("nope").unwrap_err(),
            ModelError::UnknownId("nope".into())
        );
    }

    #[test]
    fn substitute_keeps_edges() {
        let mut m = CognitiveMap::new("t");
        m.add_node(NodeKind::Product, "p").unwrap();
        let fun = m.add_node(NodeKind::Concept, "fun").unwrap();
        let prod = m.add_node(NodeKind::Concept, "developers productivity").unwrap();
        m.add_edge(&fun, &prod, Some(Sign::Positive)).unwrap();
        m.substitute_node(fun.as_str(), "making the development work more fun")
            .unwrap();
        assert_eq!(
            m.node(fun.as_str()).unwrap().label,
            "making the development work more fun"
        );
        assert_eq!(m.edges().len(), 1);
        assert!(matches!(
            m.substitute_node(fun.as_str(), "Developers Productivity"),
            Err(ModelError::DuplicateLabel { .. })
        ));
        // Renaming to its own label (different case) is allowed.
        m.substitute_node(prod.as_str(), "Developers productivity").unwrap();
    }

    #[test]
    fn remove_then_readd_is_equal_up_to_ids() {
        let mut m = CognitiveMap::new("t");
        m.add_node(NodeKind::Product, "p").unwrap();
        let before = m.signature();
        let c = m.add_node(NodeKind::Concept, "c").unwrap();
        let with = m.signature();
        m.remove_element(c.as_str()).unwrap();
        assert_eq!(m.signature(), before);
        let c2 = m.add_node(NodeKind::Concept, "c").unwrap();
        assert_ne!(c, c2);
        assert_eq!(m.signature(), with);
    }

    #[test]
    fn validate_reports_gaps_as_warnings() {
        let mut m = CognitiveMap::new("t");
        let p = m.add_node(NodeKind::Product, "p").unwrap();
        let f = m.add_node(NodeKind::Feature, "lonely").unwrap();
        m.add_node(NodeKind::Concept, "floating").unwrap();
        m.add_node(NodeKind::Customer, "silent").unwrap();
        let d = m.validate();
        let codes: Vec<_> = d.iter().map(|d| d.code).collect();
        assert_eq!(
            codes,
            vec![
                DiagnosticCode::CustomerWithoutProblems,
                DiagnosticCode::OrphanFeature,
                DiagnosticCode::UnreachableConcept
            ]
        );
        assert!(!has_errors(&d));
        m.add_edge(&p, &f, None).unwrap();
        // Still orphan: offered but influencing nothing.
        assert!(m.validate().iter().any(|d| d.code == DiagnosticCode::OrphanFeature));
    }

    #[test]
    fn validate_flags_injected_errors() {
        let node = |id: &str, kind, label: &str| MapNode {
            id: NodeId(id.into()),
            kind,
            label: label.into(),
            notes: None,
        };
        let edge = |id: &str, s: &str, d: &str, kind, sign| MapEdge {
            id: EdgeId(id.into()),
            src: NodeId(s.into()),
            dst: NodeId(d.into()),
            kind,
            sign,
            saturated: false,
            rationale: None,
            connective: ProblemConnective::Has,
        };
        let m = CognitiveMap::from_parts(
            "m",
            "t",
            vec![
                node("p", NodeKind::Product, "p"),
                node("a", NodeKind::Concept, "a"),
                node("b", NodeKind::Concept, "b"),
                node("c", NodeKind::Concept, "c"),
            ],
            vec![
                edge("e1", "a", "b", EdgeKind::Influence, Some(Sign::Positive)),
                edge("e2", "b", "c", EdgeKind::Influence, Some(Sign::Positive)),
                edge("e3", "c", "a", EdgeKind::Influence, Some(Sign::Positive)),
                edge("e4", "a", "p", EdgeKind::Influence, None),
                edge("e5", "a", "zz", EdgeKind::Influence, Some(Sign::Positive)),
            ],
        );
        let d = m.validate();
        let cycle = d.iter().find(|d| d.code == DiagnosticCode::Cycle).unwrap();
        assert_eq!(cycle.subjects, vec!["a", "b", "c", "a"]);
        for code in [
            DiagnosticCode::IllegalEndpointPair,
            DiagnosticCode::MissingSign,
            DiagnosticCode::DanglingEndpoint,
        ] {
            assert!(d.iter().any(|x| x.code == code), "{code} missing in {d:?}");
        }
        // errors sort before warnings
        let first_warning = d.iter().position(|x| !x.is_error()).unwrap_or(d.len());
        assert!(d[first_warning..].iter().all(|x| !x.is_error()));
    }

    #[test]
    fn from_parts_continues_id_sequence() {
        let m = CognitiveMap::from_parts(
            "m",
            "t",
            vec![MapNode {
                id: NodeId("concept-41".into()),
                kind: NodeKind::Product,
                label: "p".into(),
                notes: None,
            }],
            vec![],
        );
        let mut m = m;
        let id = m.add_node(NodeKind::Concept, "c").unwrap();
        assert_eq!(id.as_str(), "concept-42");
    }
}
