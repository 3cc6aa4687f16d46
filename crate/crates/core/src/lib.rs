//! Cognitive maps for early-stage startups, and the hypotheses they imply.
//!
//! A map is a layered acyclic graph: one product, the features it offers,
//! the problem concepts those features influence, and the customers who
//! perceive the problems. Every relationship compiles into a testable
//! hypothesis (problem, value or product) whose status, risk and evidence
//! are tracked in a [`registry::Registry`].

pub mod analysis;
pub mod dsl;
pub mod elicitation;
pub mod hypogen;
pub mod model;
pub mod registry;
pub mod render;

#[cfg(feature = "test-util")]
pub mod testutil;

pub use analysis::{assign_layers, categorize, structure_report, HypothesisKind, LayerAssignment, StructureReport};
pub use dsl::{parse_str, serialize, SourceDocument};
pub use elicitation::{Answer, ElicitationSession, Phase, Prompt};
pub use hypogen::{generate, prioritize, Hypothesis, HypothesisId};
pub use model::{
    CognitiveMap, Diagnostic, DiagnosticCode, EdgeId, EdgeKind, MapEdge, MapNode, ModelError, NodeId, NodeKind,
    Severity, Sign,
};
pub use registry::{Assessment, Evidence, EvidenceKind, Registry, Risk, Status, Summary, SummaryMode};
pub use render::{layout, to_dot, to_svg, Layout, RenderOptions};
