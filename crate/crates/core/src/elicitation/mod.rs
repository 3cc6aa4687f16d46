//! Guided elicitation: a resumable question protocol that builds a map from
//! a founder's answers.
//!
//! Phases run in order: naming the product, listing customers, the aspects
//! each customer expects to improve, the envisioned features and which
//! aspects they serve, deepening every relationship with how?/why? until
//! the founder judges it testable, cross-linking the concepts introduced
//! while deepening, and a final coherence review. Review is the only phase
//! that may go back (to deepening).
//!
//! Every answer is applied to a copy of the session and committed only when
//! all resulting map mutations succeed. Accepted answers are appended to the
//! session log; replaying the log reproduces the session exactly.

pub mod log;

use std::collections::VecDeque;
use std::fmt;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypogen::{self, Hypothesis};
use crate::model::{
    has_errors, CognitiveMap, Diagnostic, EdgeId, EdgeKind, MapNode, ModelError, NodeId, NodeKind, Sign,
};

pub use log::SessionEvent;

pub const DEFAULT_NODE_BUDGET: usize = 200;

pub const NAMING_QUESTION: &str = "What is the product/solution name?";
pub const CUSTOMERS_QUESTION: &str = "What are the customers targeted by the solution?";
pub const FEATURES_QUESTION: &str =
    "Which are the solution features envisioned, and which aspects are identified in the previous step they help fulfill?";
pub const SATURATION_PROBE: &str = "can you create a simple experiment to evaluate this relationship?";
pub const REVIEW_QUESTION: &str = "Is the map coherent with your understanding of the customer and market?";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    Naming,
    Customers,
    Aspects,
    Features,
    Deepening,
    CrossLinking,
    Review,
    Done,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Phase::Naming => "naming",
            Phase::Customers => "customers",
            Phase::Aspects => "aspects",
            Phase::Features => "features",
            Phase::Deepening => "deepening",
            Phase::CrossLinking => "cross-linking",
            Phase::Review => "review",
            Phase::Done => "done",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnswerShape {
    Text,
    TextList,
    NodeChoice,
    YesNo,
    EdgeAnnotation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prompt {
    pub id: String,
    pub phase: Phase,
    pub question: String,
    pub shape: AnswerShape,
    /// Node or edge ids the question is about.
    pub subjects: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AspectLink {
    pub aspect: String,
    pub sign: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub label: String,
    #[serde(default)]
    pub links: Vec<AspectLink>,
}

/// Link from the concept under discussion to an existing element, or from
/// an existing element to it when `reverse` is set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossLink {
    pub concept: String,
    pub sign: Sign,
    #[serde(default)]
    pub reverse: bool,
}

/// Refinement commands accepted during review. Elements are referenced by
/// id or label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum ReviewCommand {
    AddNode {
        kind: NodeKind,
        label: String,
    },
    AddEdge {
        src: String,
        dst: String,
        #[serde(default)]
        sign: Option<Sign>,
    },
    Remove {
        target: String,
    },
    RemoveEdge {
        src: String,
        dst: String,
    },
    Substitute {
        target: String,
        label: String,
    },
    /// Go back to deepening all unsaturated edges.
    Deepen,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Answer {
    Text {
        text: String,
    },
    List {
        items: Vec<String>,
    },
    Features {
        features: Vec<FeatureSpec>,
    },
    /// The relationship needs no further decomposition.
    Saturated,
    /// Explain the relationship through a new concept: `src -> concept -> dst`.
    Intermediate {
        concept: String,
        #[serde(default)]
        sign_in: Option<Sign>,
        sign_out: Sign,
    },
    CrossLinks {
        links: Vec<CrossLink>,
    },
    Confirm {
        coherent: bool,
    },
    Review {
        commands: Vec<ReviewCommand>,
    },
    /// Leave the rest of the current phase.
    Skip,
}

/// Map change caused by one answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum MapDelta {
    AddNode {
        id: NodeId,
        kind: NodeKind,
        label: String,
    },
    RemoveNode {
        id: NodeId,
    },
    RenameNode {
        id: NodeId,
        label: String,
    },
    AddEdge {
        id: EdgeId,
        src: NodeId,
        dst: NodeId,
        kind: EdgeKind,
        sign: Option<Sign>,
    },
    RemoveEdge {
        id: EdgeId,
    },
    Saturate {
        id: EdgeId,
        saturated: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElicitationError {
    #[error("prompt `{got}` is not the current prompt (`{expected}`)")]
    StalePrompt { expected: String, got: String },
    #[error("answer does not fit the {phase} question (expected {expected:?})")]
    ShapeMismatch { phase: Phase, expected: AnswerShape },
    #[error("the session is finished")]
    SessionDone,
    #[error("expected phase {expected}, session is in {found}")]
    PhaseError { expected: Phase, found: Phase },
    #[error("the founder has not confirmed the map is coherent")]
    NotConfirmed,
    #[error("no element labelled {0:?}")]
    UnknownLabel(String),
    #[error("label {0:?} matches more than one element; use its id")]
    AmbiguousLabel(String),
    #[error("{0} edges cannot be explained through an intermediate concept")]
    NotDeepenable(EdgeKind),
    #[error("node budget of {0} reached")]
    BudgetExhausted(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("the map has validation errors")]
    InvalidMap(Vec<Diagnostic>),
    #[error("replay diverged: {0}")]
    ReplayMismatch(String),
    #[error("session log: {0}")]
    Log(String),
}

impl ElicitationError {
    pub fn code(&self) -> &'static str {
        match self {
            ElicitationError::StalePrompt { .. } => "StalePrompt",
            ElicitationError::ShapeMismatch { .. } => "ShapeMismatch",
            ElicitationError::SessionDone => "SessionDone",
            ElicitationError::PhaseError { .. } => "PhaseError",
            ElicitationError::NotConfirmed => "NotConfirmed",
            ElicitationError::UnknownLabel(_) => "UnknownLabel",
            ElicitationError::AmbiguousLabel(_) => "AmbiguousLabel",
            ElicitationError::NotDeepenable(_) => "NotDeepenable",
            ElicitationError::BudgetExhausted(_) => "BudgetExhausted",
            ElicitationError::Model(e) => e.code(),
            ElicitationError::InvalidMap(_) => "InvalidMap",
            ElicitationError::ReplayMismatch(_) => "ReplayMismatch",
            ElicitationError::Log(_) => "SessionLog",
        }
    }
}

/// A deepened edge that was replaced by two new ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetiredEdge {
    pub edge: EdgeId,
    pub via: NodeId,
    pub replaced_by: [EdgeId; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Finished {
    pub map: CognitiveMap,
    pub hypotheses: Vec<Hypothesis>,
    /// Edges the founder never judged saturated. Reported, not blocking.
    pub unsaturated: Vec<EdgeId>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElicitationSession {
    id: String,
    title: String,
    phase: Phase,
    map: CognitiveMap,
    prompt: Option<Prompt>,
    prompt_seq: u64,
    answer_seq: u64,
    aspect_cursor: usize,
    deepening_queue: VecDeque<EdgeId>,
    deepened_concepts: Vec<NodeId>,
    crosslink_cursor: usize,
    confirmed: bool,
    node_budget: usize,
    retired: Vec<RetiredEdge>,
    log: Vec<SessionEvent>,
}

impl ElicitationSession {
    pub fn start(title: &str) -> Self {
        Self::start_with("session", title, DEFAULT_NODE_BUDGET, Utc::now())
    }

    pub fn start_with(id: &str, title: &str, node_budget: usize, at: DateTime<Utc>) -> Self {
        let mut map = CognitiveMap::new(title);
        map.set_id(id);
        let mut s = ElicitationSession {
            id: id.to_string(),
            title: title.to_string(),
            phase: Phase::Naming,
            map,
            prompt: None,
            prompt_seq: 0,
            answer_seq: 0,
            aspect_cursor: 0,
            deepening_queue: VecDeque::new(),
            deepened_concepts: Vec::new(),
            crosslink_cursor: 0,
            confirmed: false,
            node_budget,
            retired: Vec::new(),
            log: vec![SessionEvent::Start {
                session: id.to_string(),
                title: title.to_string(),
                node_budget,
                at,
            }],
        };
        s.settle();
        s
    }

    /// Rebuild a session from its log.
    pub fn replay(events: &[SessionEvent]) -> Result<Self, ElicitationError> {
        let mut it = events.iter();
        let mut session = match it.next() {
            Some(SessionEvent::Start {
                session,
                title,
                node_budget,
                at,
            }) => Self::start_with(session, title, *node_budget, *at),
            _ => return Err(ElicitationError::ReplayMismatch("log does not begin with a start event".into())),
        };
        for ev in it {
            match ev {
                SessionEvent::Start { .. } => {
                    return Err(ElicitationError::ReplayMismatch("second start event".into()))
                }
                SessionEvent::Answer {
                    prompt_id,
                    payload,
                    at,
                    ..
                } => {
                    session
                        .answer_at(prompt_id, payload.clone(), *at)
                        .map_err(|e| ElicitationError::ReplayMismatch(format!("answer to {prompt_id}: {e}")))?;
                }
                SessionEvent::Finish { at } => {
                    session.finish_at(*at)?;
                }
            }
        }
        Ok(session)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn title(&self) -> &str {
        &self.title
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn map(&self) -> &CognitiveMap {
        &self.map
    }

    pub fn log(&self) -> &[SessionEvent] {
        &self.log
    }

    pub fn retired_edges(&self) -> &[RetiredEdge] {
        &self.retired
    }

    pub fn is_confirmed(&self) -> bool {
        self.confirmed
    }

    pub fn next_prompt(&self) -> Result<&Prompt, ElicitationError> {
        self.prompt.as_ref().ok_or(ElicitationError::SessionDone)
    }

    pub fn answer(&mut self, prompt_id: &str, payload: Answer) -> Result<Vec<MapDelta>, ElicitationError> {
        self.answer_at(prompt_id, payload, Utc::now())
    }

    pub fn answer_at(
        &mut self,
        prompt_id: &str,
        payload: Answer,
        at: DateTime<Utc>,
    ) -> Result<Vec<MapDelta>, ElicitationError> {
        let current = self.next_prompt()?;
        if current.id != prompt_id {
            return Err(ElicitationError::StalePrompt {
                expected: current.id.clone(),
                got: prompt_id.to_string(),
            });
        }
        let current = current.clone();
        let mut work = self.clone();
        work.apply(&current, &payload)?;
        work.answer_seq += 1;
        work.log.push(SessionEvent::Answer {
            seq: work.answer_seq,
            prompt_id: prompt_id.to_string(),
            payload,
            at,
        });
        work.prompt = None;
        work.settle();
        let deltas = diff(&self.map, &work.map);
        *self = work;
        Ok(deltas)
    }

    pub fn finish(&mut self) -> Result<Finished, ElicitationError> {
        self.finish_at(Utc::now())
    }

    pub fn finish_at(&mut self, at: DateTime<Utc>) -> Result<Finished, ElicitationError> {
        if self.phase == Phase::Done {
            return Err(ElicitationError::SessionDone);
        }
        if self.phase != Phase::Review {
            return Err(ElicitationError::PhaseError {
                expected: Phase::Review,
                found: self.phase,
            });
        }
        if !self.confirmed {
            return Err(ElicitationError::NotConfirmed);
        }
        let diagnostics = self.map.validate();
        if has_errors(&diagnostics) {
            return Err(ElicitationError::InvalidMap(diagnostics));
        }
        let hypotheses = hypogen::generate(&self.map).map_err(|hypogen::HypogenError::InvalidMap(d)| {
            ElicitationError::InvalidMap(d)
        })?;
        let unsaturated = self
            .map
            .edges()
            .iter()
            .filter(|e| !e.saturated)
            .map(|e| e.id.clone())
            .collect();
        self.phase = Phase::Done;
        self.prompt = None;
        self.log.push(SessionEvent::Finish { at });
        Ok(Finished {
            map: self.map.clone(),
            hypotheses,
            unsaturated,
        })
    }

    // -- answer handling -----------------------------------------------------

    fn apply(&mut self, prompt: &Prompt, payload: &Answer) -> Result<(), ElicitationError> {
        let mismatch = || ElicitationError::ShapeMismatch {
            phase: prompt.phase,
            expected: prompt.shape,
        };
        match (self.phase, payload) {
            (Phase::Naming, Answer::Text { text }) => {
                self.add_node(NodeKind::Product, text)?;
                if self.map.title().trim().is_empty() {
                    self.map.set_title(text.clone());
                }
                self.phase = Phase::Customers;
            }
            (Phase::Customers, Answer::List { items }) => {
                for item in items {
                    self.add_node(NodeKind::Customer, item)?;
                }
                self.phase = Phase::Aspects;
            }
            (Phase::Aspects, Answer::List { items }) => {
                let customer = NodeId(prompt.subjects[0].clone());
                for item in items {
                    let concept = self.concept_or_new(item)?;
                    self.map.add_edge(&customer, &concept, None)?;
                }
                self.aspect_cursor += 1;
            }
            (Phase::Features, Answer::Features { features }) => {
                let product = self.map.product().expect("named in the first phase").id.clone();
                for spec in features {
                    let feature = match self.map.find_label(NodeKind::Feature, &spec.label) {
                        Some(f) => f.id.clone(),
                        None => self.add_node(NodeKind::Feature, &spec.label)?,
                    };
                    if !self.map.edges().iter().any(|e| e.src == product && e.dst == feature) {
                        self.map.add_edge(&product, &feature, None)?;
                    }
                    for link in &spec.links {
                        let aspect = self
                            .map
                            .find_label(NodeKind::Concept, &link.aspect)
                            .ok_or_else(|| ElicitationError::UnknownLabel(link.aspect.clone()))?
                            .id
                            .clone();
                        self.map.add_edge(&feature, &aspect, Some(link.sign))?;
                    }
                }
                self.enter_deepening();
            }
            (Phase::Deepening, Answer::Saturated) => {
                let edge = self.deepening_queue.pop_front().expect("prompt implies a queued edge");
                self.map.set_saturated(edge.as_str(), true)?;
            }
            (
                Phase::Deepening,
                Answer::Intermediate {
                    concept,
                    sign_in,
                    sign_out,
                },
            ) => {
                let edge_id = self.deepening_queue.pop_front().expect("prompt implies a queued edge");
                let edge = self.map.edge(edge_id.as_str()).expect("queue holds live edges").clone();
                if edge.kind != EdgeKind::Influence {
                    return Err(ElicitationError::NotDeepenable(edge.kind));
                }
                self.map.remove_element(edge_id.as_str())?;
                let via = self.add_node(NodeKind::Concept, concept)?;
                let first = self.map.add_edge(&edge.src, &via, *sign_in)?;
                let second = self.map.add_edge(&via, &edge.dst, Some(*sign_out))?;
                self.deepening_queue.push_back(first.clone());
                self.deepening_queue.push_back(second.clone());
                self.deepened_concepts.push(via.clone());
                self.retired.push(RetiredEdge {
                    edge: edge_id,
                    via,
                    replaced_by: [first, second],
                });
            }
            (Phase::CrossLinking, Answer::CrossLinks { links }) => {
                let here = NodeId(prompt.subjects[0].clone());
                for link in links {
                    let other = self.resolve(&link.concept)?;
                    let (src, dst) = if link.reverse { (other, here.clone()) } else { (here.clone(), other) };
                    self.map.add_edge(&src, &dst, Some(link.sign))?;
                }
                self.crosslink_cursor += 1;
            }
            (Phase::Review, Answer::Confirm { coherent }) => {
                self.confirmed = *coherent;
            }
            (Phase::Review, Answer::Review { commands }) => {
                self.confirmed = false;
                let mut deepen = false;
                for cmd in commands {
                    deepen |= self.review(cmd)?;
                }
                if deepen {
                    self.enter_deepening();
                }
            }
            (Phase::Customers, Answer::Skip) => self.phase = Phase::Aspects,
            (Phase::Aspects, Answer::Skip) => self.phase = Phase::Features,
            (Phase::Features, Answer::Skip) => self.enter_deepening(),
            (Phase::Deepening, Answer::Skip) => {
                self.deepening_queue.clear();
                self.phase = Phase::CrossLinking;
            }
            (Phase::CrossLinking, Answer::Skip) => {
                self.crosslink_cursor = self.deepened_concepts.len();
                self.phase = Phase::Review;
            }
            _ => return Err(mismatch()),
        }
        Ok(())
    }

    fn review(&mut self, cmd: &ReviewCommand) -> Result<bool, ElicitationError> {
        match cmd {
            ReviewCommand::AddNode { kind, label } => {
                self.add_node(*kind, label)?;
            }
            ReviewCommand::AddEdge { src, dst, sign } => {
                let s = self.resolve(src)?;
                let d = self.resolve(dst)?;
                self.map.add_edge(&s, &d, *sign)?;
            }
            ReviewCommand::Remove { target } => {
                if self.map.edge(target).is_some() {
                    self.map.remove_element(target)?;
                } else {
                    let id = self.resolve(target)?;
                    self.map.remove_element(id.as_str())?;
                }
            }
            ReviewCommand::RemoveEdge { src, dst } => {
                let s = self.resolve(src)?;
                let d = self.resolve(dst)?;
                let id = self
                    .map
                    .edges()
                    .iter()
                    .find(|e| e.src == s && e.dst == d)
                    .map(|e| e.id.clone())
                    .ok_or_else(|| ElicitationError::UnknownLabel(format!("{src} -> {dst}")))?;
                self.map.remove_element(id.as_str())?;
            }
            ReviewCommand::Substitute { target, label } => {
                let id = self.resolve(target)?;
                self.map.substitute_node(id.as_str(), label)?;
            }
            ReviewCommand::Deepen => return Ok(true),
        }
        Ok(false)
    }

    fn enter_deepening(&mut self) {
        self.phase = Phase::Deepening;
        self.deepening_queue = self
            .map
            .edges()
            .iter()
            .filter(|e| !e.saturated)
            .map(|e| e.id.clone())
            .collect();
    }

    fn add_node(&mut self, kind: NodeKind, label: &str) -> Result<NodeId, ElicitationError> {
        if self.map.nodes().len() >= self.node_budget {
            return Err(ElicitationError::BudgetExhausted(self.node_budget));
        }
        Ok(self.map.add_node(kind, label)?)
    }

    fn concept_or_new(&mut self, label: &str) -> Result<NodeId, ElicitationError> {
        match self.map.find_label(NodeKind::Concept, label) {
            Some(n) => Ok(n.id.clone()),
            None => self.add_node(NodeKind::Concept, label),
        }
    }

    /// Node by exact id, else by unique label.
    fn resolve(&self, reference: &str) -> Result<NodeId, ElicitationError> {
        if let Some(n) = self.map.node(reference) {
            return Ok(n.id.clone());
        }
        let found: Vec<&MapNode> = self.map.find_any_label(reference);
        match found.as_slice() {
            [one] => Ok(one.id.clone()),
            [] => Err(ElicitationError::UnknownLabel(reference.to_string())),
            _ => Err(ElicitationError::AmbiguousLabel(reference.to_string())),
        }
    }

    // -- prompt scheduling ---------------------------------------------------

    /// Advance through phases with nothing to ask and set the next prompt.
    fn settle(&mut self) {
        loop {
            let next = match self.phase {
                Phase::Naming => Some((AnswerShape::Text, NAMING_QUESTION.to_string(), vec![])),
                Phase::Customers => Some((AnswerShape::TextList, CUSTOMERS_QUESTION.to_string(), vec![])),
                Phase::Aspects => {
                    let customers: Vec<&MapNode> = self.map.nodes_of(NodeKind::Customer).collect();
                    customers.get(self.aspect_cursor).map(|c| {
                        (
                            AnswerShape::TextList,
                            format!(
                                "For the customer \"{}\", what are the aspects the actor expects to improve using the solution?",
                                c.label
                            ),
                            vec![c.id.0.clone()],
                        )
                    })
                }
                Phase::Features => Some((AnswerShape::EdgeAnnotation, FEATURES_QUESTION.to_string(), vec![])),
                Phase::Deepening => {
                    while let Some(front) = self.deepening_queue.front() {
                        match self.map.edge(front.as_str()) {
                            Some(e) if !e.saturated => break,
                            _ => {
                                self.deepening_queue.pop_front();
                            }
                        }
                    }
                    self.deepening_queue.front().map(|id| {
                        let edge = self.map.edge(id.as_str()).expect("checked above");
                        let statement = hypogen::statement_for(&self.map, edge);
                        (
                            AnswerShape::EdgeAnnotation,
                            format!(
                                "\"{statement}\" How? Why? Is there an underlying concept that explains this relationship, or {SATURATION_PROBE}"
                            ),
                            vec![id.0.clone()],
                        )
                    })
                }
                Phase::CrossLinking => {
                    while let Some(id) = self.deepened_concepts.get(self.crosslink_cursor) {
                        if self.map.node(id.as_str()).is_some() {
                            break;
                        }
                        self.crosslink_cursor += 1;
                    }
                    self.deepened_concepts.get(self.crosslink_cursor).map(|id| {
                        let label = &self.map.node(id.as_str()).expect("checked above").label;
                        (
                            AnswerShape::NodeChoice,
                            format!("Is \"{label}\" related to other concepts already on the map?"),
                            vec![id.0.clone()],
                        )
                    })
                }
                Phase::Review => Some((AnswerShape::YesNo, REVIEW_QUESTION.to_string(), vec![])),
                Phase::Done => {
                    self.prompt = None;
                    return;
                }
            };
            match next {
                Some((shape, question, subjects)) => {
                    self.prompt_seq += 1;
                    self.prompt = Some(Prompt {
                        id: format!("p{}", self.prompt_seq),
                        phase: self.phase,
                        question,
                        shape,
                        subjects,
                    });
                    return;
                }
                None => {
                    self.phase = match self.phase {
                        Phase::Aspects => Phase::Features,
                        Phase::Deepening => Phase::CrossLinking,
                        Phase::CrossLinking => Phase::Review,
                        other => unreachable!("phase {other} always has a prompt"),
                    };
                    if self.phase == Phase::Deepening {
                        self.enter_deepening();
                    }
                }
            }
        }
    }
}

/// Changes from `before` to `after`, removals first.
pub fn diff(before: &CognitiveMap, after: &CognitiveMap) -> Vec<MapDelta> {
    let mut out = Vec::new();
    for e in before.edges() {
        if after.edge(e.id.as_str()).is_none() {
            out.push(MapDelta::RemoveEdge { id: e.id.clone() });
        }
    }
    for n in before.nodes() {
        if after.node(n.id.as_str()).is_none() {
            out.push(MapDelta::RemoveNode { id: n.id.clone() });
        }
    }
    for n in after.nodes() {
        match before.node(n.id.as_str()) {
            None => out.push(MapDelta::AddNode {
                id: n.id.clone(),
                kind: n.kind,
                label: n.label.clone(),
            }),
            Some(old) if old.label != n.label => out.push(MapDelta::RenameNode {
                id: n.id.clone(),
                label: n.label.clone(),
            }),
            Some(_) => {}
        }
    }
    for e in after.edges() {
        match before.edge(e.id.as_str()) {
            None => {
                out.push(MapDelta::AddEdge {
                    id: e.id.clone(),
                    src: e.src.clone(),
                    dst: e.dst.clone(),
                    kind: e.kind,
                    sign: e.sign,
                });
                if e.saturated {
                    out.push(MapDelta::Saturate {
                        id: e.id.clone(),
                        saturated: true,
                    });
                }
            }
            Some(old) if old.saturated != e.saturated => out.push(MapDelta::Saturate {
                id: e.id.clone(),
                saturated: e.saturated,
            }),
            Some(_) => {}
        }
    }
    out
}
