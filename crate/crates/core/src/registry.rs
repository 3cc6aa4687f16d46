//! Assessment registry: validation status, perceived risk and evidence per
//! hypothesis, with an append-only history.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::{DateTime, NaiveDate, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::HypothesisKind;
use crate::hypogen::{Hypothesis, HypothesisId};

pub const REGISTRY_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Unassessed,
    Validated,
    Refuted,
    NotValidated,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Unassessed => "unassessed",
            Status::Validated => "validated",
            Status::Refuted => "refuted",
            Status::NotValidated => "not-validated",
        }
    }
}

impl FromStr for Status {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace(['_', ' '], "-").as_str() {
            "unassessed" => Ok(Status::Unassessed),
            "validated" => Ok(Status::Validated),
            "refuted" => Ok(Status::Refuted),
            "not-validated" | "notvalidated" => Ok(Status::NotValidated),
            other => Err(format!(
                "unknown status `{other}` (expected validated, not-validated, refuted or unassessed)"
            )),
        }
    }
}

/// Founder's perceived risk to the business if the hypothesis were false.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Risk {
    #[serde(rename = "L")]
    Low,
    #[serde(rename = "M")]
    Medium,
    #[serde(rename = "H")]
    High,
}

impl Risk {
    pub fn letter(self) -> &'static str {
        match self {
            Risk::Low => "L",
            Risk::Medium => "M",
            Risk::High => "H",
        }
    }
}

impl FromStr for Risk {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "l" | "low" => Ok(Risk::Low),
            "m" | "medium" => Ok(Risk::Medium),
            "h" | "high" => Ok(Risk::High),
            other => Err(format!("unknown risk `{other}` (expected L, M or H)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvidenceKind {
    OwnExperience,
    OfflineSurvey,
    OnlineSurvey,
    SimilarTools,
    ResemblingBusinessModels,
    ProductUsage,
    Interviews,
    Other,
}

impl EvidenceKind {
    pub const ALL: [EvidenceKind; 8] = [
        EvidenceKind::OwnExperience,
        EvidenceKind::OfflineSurvey,
        EvidenceKind::OnlineSurvey,
        EvidenceKind::SimilarTools,
        EvidenceKind::ResemblingBusinessModels,
        EvidenceKind::ProductUsage,
        EvidenceKind::Interviews,
        EvidenceKind::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EvidenceKind::OwnExperience => "own-experience",
            EvidenceKind::OfflineSurvey => "offline-survey",
            EvidenceKind::OnlineSurvey => "online-survey",
            EvidenceKind::SimilarTools => "similar-tools",
            EvidenceKind::ResemblingBusinessModels => "resembling-business-models",
            EvidenceKind::ProductUsage => "product-usage",
            EvidenceKind::Interviews => "interviews",
            EvidenceKind::Other => "other",
        }
    }
}

impl FromStr for EvidenceKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let wanted = s.trim().to_ascii_lowercase().replace(['_', ' '], "-");
        EvidenceKind::ALL
            .into_iter()
            .find(|k| k.as_str() == wanted)
            .ok_or_else(|| format!("unknown evidence kind `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub source: EvidenceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub date: Option<NaiveDate>,
}

impl Evidence {
    pub fn new(source: EvidenceKind) -> Self {
        Evidence {
            source,
            note: None,
            date: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// `kind[:note]`, as accepted on the command line.
impl FromStr for Evidence {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, note) = match s.split_once(':') {
            Some((k, n)) => (k, Some(n.trim().to_string()).filter(|n| !n.is_empty())),
            None => (s, None),
        };
        Ok(Evidence {
            source: kind.parse()?,
            note,
            date: None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assessment {
    pub hypothesis: HypothesisId,
    pub status: Status,
    pub risk: Option<Risk>,
    #[serde(default)]
    pub evidence: Vec<Evidence>,
    pub assessed_at: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("unknown hypothesis `{0}`")]
    UnknownHypothesis(HypothesisId),
    #[error("hypothesis `{0}` cannot be validated without evidence")]
    ValidatedWithoutEvidence(HypothesisId),
    #[error("assessment for unknown hypothesis `{0}`")]
    DanglingAssessment(HypothesisId),
    #[error("unsupported registry version {0} (expected {REGISTRY_VERSION})")]
    UnsupportedVersion(u64),
    #[error("corrupt assessments file: {0}")]
    Corrupt(String),
    #[error("{0}")]
    Io(String),
}

impl RegistryError {
    pub fn code(&self) -> &'static str {
        match self {
            RegistryError::UnknownHypothesis(_) => "UnknownHypothesis",
            RegistryError::ValidatedWithoutEvidence(_) => "ValidatedWithoutEvidence",
            RegistryError::DanglingAssessment(_) => "DanglingAssessment",
            RegistryError::UnsupportedVersion(_) => "UnsupportedVersion",
            RegistryError::Corrupt(_) => "Corrupt",
            RegistryError::Io(_) => "Io",
        }
    }
}

/// Assessments keyed by hypothesis. Each entry keeps every assessment ever
/// made; the last one is current.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Registry {
    entries: BTreeMap<HypothesisId, Vec<Assessment>>,
}

impl Registry {
    pub fn current(&self, id: &HypothesisId) -> Option<&Assessment> {
        self.entries.get(id).and_then(|h| h.last())
    }

    /// Every assessment of `id`, oldest first, current last.
    pub fn history(&self, id: &HypothesisId) -> &[Assessment] {
        self.entries.get(id).map_or(&[], Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = &HypothesisId> {
        self.entries.keys()
    }

    pub fn assess(
        &mut self,
        hypotheses: &[Hypothesis],
        id: &HypothesisId,
        status: Status,
        risk: Option<Risk>,
        evidence: Vec<Evidence>,
    ) -> Result<&Assessment, RegistryError> {
        self.assess_at(hypotheses, id, status, risk, evidence, Utc::now())
    }

    pub fn assess_at(
        &mut self,
        hypotheses: &[Hypothesis],
        id: &HypothesisId,
        status: Status,
        risk: Option<Risk>,
        evidence: Vec<Evidence>,
        at: DateTime<Utc>,
    ) -> Result<&Assessment, RegistryError> {
        if !hypotheses.iter().any(|h| &h.id == id) {
            return Err(RegistryError::UnknownHypothesis(id.clone()));
        }
        if status == Status::Validated && evidence.is_empty() {
            return Err(RegistryError::ValidatedWithoutEvidence(id.clone()));
        }
        let history = self.entries.entry(id.clone()).or_default();
        history.push(Assessment {
            hypothesis: id.clone(),
            status,
            risk,
            evidence,
            assessed_at: at,
        });
        Ok(history.last().expect("just pushed"))
    }

    /// Drop the histories of hypotheses that no longer exist, returning
    /// their ids.
    pub fn prune(&mut self, hypotheses: &[Hypothesis]) -> Vec<HypothesisId> {
        let known: HashSet<&HypothesisId> = hypotheses.iter().map(|h| &h.id).collect();
        let gone: Vec<HypothesisId> = self.entries.keys().filter(|id| !known.contains(id)).cloned().collect();
        for id in &gone {
            self.entries.remove(id);
        }
        gone
    }

    pub fn summary(&self, hypotheses: &[Hypothesis], mode: SummaryMode) -> Summary {
        let mut rows = HypothesisKind::ALL.map(KindSummary::new);
        for h in hypotheses {
            let row = &mut rows[HypothesisKind::ALL.iter().position(|k| *k == h.kind).expect("total")];
            let Some(a) = self.current(&h.id) else {
                row.unassessed += 1;
                continue;
            };
            let cell = match (a.status, mode) {
                (Status::Unassessed, _) => {
                    row.unassessed += 1;
                    continue;
                }
                (Status::Validated, _) => &mut row.validated,
                (Status::NotValidated, _) | (Status::Refuted, SummaryMode::Paper) => &mut row.not_validated,
                (Status::Refuted, SummaryMode::Full) => &mut row.refuted,
            };
            cell.add(a.risk);
        }
        Summary { mode, rows }
    }

    pub fn to_json(&self) -> String {
        let doc = RegistryDocument {
            version: REGISTRY_VERSION,
            assessments: self
                .entries
                .iter()
                .map(|(id, history)| RecordDoc {
                    hypothesis: id.clone(),
                    history: history.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("registry always serializes")
    }

    /// Load and check against the current hypothesis set. Any problem fails
    /// the whole file.
    pub fn from_json(text: &str, hypotheses: &[Hypothesis]) -> Result<Registry, RegistryError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| RegistryError::Corrupt(e.to_string()))?;
        match value.get("version").and_then(|v| v.as_u64()) {
            Some(v) if v == u64::from(REGISTRY_VERSION) => {}
            Some(v) => return Err(RegistryError::UnsupportedVersion(v)),
            None => return Err(RegistryError::Corrupt("missing or non-integer `version`".into())),
        }
        let doc: RegistryDocument =
            serde_json::from_value(value).map_err(|e| RegistryError::Corrupt(e.to_string()))?;
        let known: HashSet<&HypothesisId> = hypotheses.iter().map(|h| &h.id).collect();
        let mut entries = BTreeMap::new();
        for rec in doc.assessments {
            if !known.contains(&rec.hypothesis) {
                return Err(RegistryError::DanglingAssessment(rec.hypothesis));
            }
            if rec.history.is_empty() {
                return Err(RegistryError::Corrupt(format!("empty history for `{}`", rec.hypothesis)));
            }
            for a in &rec.history {
                if a.hypothesis != rec.hypothesis {
                    return Err(RegistryError::Corrupt(format!(
                        "history of `{}` contains an assessment for `{}`",
                        rec.hypothesis, a.hypothesis
                    )));
                }
                if a.status == Status::Validated && a.evidence.is_empty() {
                    return Err(RegistryError::ValidatedWithoutEvidence(a.hypothesis.clone()));
                }
            }
            if entries.insert(rec.hypothesis.clone(), rec.history).is_some() {
                return Err(RegistryError::Corrupt(format!("`{}` listed twice", rec.hypothesis)));
            }
        }
        Ok(Registry { entries })
    }

    pub fn save(&self, path: &Path) -> Result<(), RegistryError> {
        let tmp = path.with_extension("json.tmp");
        std::fs::write(&tmp, self.to_json()).map_err(|e| RegistryError::Io(e.to_string()))?;
        std::fs::rename(&tmp, path).map_err(|e| RegistryError::Io(e.to_string()))
    }

    /// Missing file means an empty registry.
    pub fn load(path: &Path, hypotheses: &[Hypothesis]) -> Result<Registry, RegistryError> {
        match std::fs::read_to_string(path) {
            Ok(text) => Registry::from_json(&text, hypotheses),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Registry::default()),
            Err(e) => Err(RegistryError::Io(format!("{}: {e}", path.display()))),
        }
    }
}

/// `maps/case_g.hymap` -> `maps/case_g.assessments.json`
pub fn default_path(map_file: &Path) -> PathBuf {
    map_file.with_extension("assessments.json")
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegistryDocument {
    version: u32,
    assessments: Vec<RecordDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordDoc {
    hypothesis: HypothesisId,
    history: Vec<Assessment>,
}

// ---------------------------------------------------------------------------
// Summary
// ---------------------------------------------------------------------------

/// `Paper` folds refuted hypotheses into "not validated"; `Full` keeps a
/// separate refuted row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SummaryMode {
    Paper,
    Full,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RiskCounts {
    pub low: usize,
    pub medium: usize,
    pub high: usize,
    /// Assessed without a risk level.
    pub unrated: usize,
}

impl RiskCounts {
    fn add(&mut self, risk: Option<Risk>) {
        match risk {
            Some(Risk::Low) => self.low += 1,
            Some(Risk::Medium) => self.medium += 1,
            Some(Risk::High) => self.high += 1,
            None => self.unrated += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.low + self.medium + self.high + self.unrated
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KindSummary {
    pub kind: HypothesisKind,
    pub validated: RiskCounts,
    pub not_validated: RiskCounts,
    pub refuted: RiskCounts,
    pub unassessed: usize,
}

impl KindSummary {
    fn new(kind: HypothesisKind) -> Self {
        KindSummary {
            kind,
            validated: RiskCounts::default(),
            not_validated: RiskCounts::default(),
            refuted: RiskCounts::default(),
            unassessed: 0,
        }
    }

    pub fn total(&self) -> usize {
        self.validated.total() + self.not_validated.total() + self.refuted.total() + self.unassessed
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub mode: SummaryMode,
    /// Problem, value, product.
    pub rows: [KindSummary; 3],
}

impl Summary {
    pub fn kind(&self, kind: HypothesisKind) -> &KindSummary {
        self.rows.iter().find(|r| r.kind == kind).expect("all kinds present")
    }

    pub fn total(&self) -> usize {
        self.rows.iter().map(KindSummary::total).sum()
    }

    fn any_unrated(&self) -> bool {
        self.rows
            .iter()
            .any(|r| r.validated.unrated + r.not_validated.unrated + r.refuted.unrated > 0)
    }

    fn status_rows(&self) -> Vec<(&'static str, Box<dyn Fn(&KindSummary) -> RiskCounts>)> {
        let mut rows: Vec<(&'static str, Box<dyn Fn(&KindSummary) -> RiskCounts>)> = vec![
            ("Validated", Box::new(|k: &KindSummary| k.validated)),
            ("Not validated", Box::new(|k: &KindSummary| k.not_validated)),
        ];
        if self.mode == SummaryMode::Full {
            rows.push(("Refuted", Box::new(|k: &KindSummary| k.refuted)));
        }
        rows
    }

    /// Table shaped like the per-case summary: one row per status, L/M/H and
    /// total columns per hypothesis kind; zero cells print as `-`.
    pub fn to_markdown(&self) -> String {
        let unrated = self.any_unrated();
        let risk_cols: Vec<&str> = if unrated { vec!["L", "M", "H", "?"] } else { vec!["L", "M", "H"] };
        let dash = |n: usize| if n == 0 { "-".to_string() } else { n.to_string() };
        let cells = |c: RiskCounts| {
            let mut v = vec![dash(c.low), dash(c.medium), dash(c.high)];
            if unrated {
                v.push(dash(c.unrated));
            }
            v.push(dash(c.total()));
            v
        };

        let mut header = vec!["Hypotheses".to_string()];
        for r in &self.rows {
            for col in &risk_cols {
                header.push(format!("{} {col}", r.kind.title()));
            }
            header.push(format!("{} Total", r.kind.title()));
        }
        header.push("Total".into());
        let width = header.len();
        let mut out = format!("| {} |\n|{}\n", header.join(" | "), "---|".repeat(width));

        for (name, get) in self.status_rows() {
            let mut row = vec![name.to_string()];
            let mut total = 0;
            for k in &self.rows {
                let c = get(k);
                total += c.total();
                row.extend(cells(c));
            }
            row.push(dash(total));
            out.push_str(&format!("| {} |\n", row.join(" | ")));
        }

        let blank = risk_cols.len();
        let mut row = vec!["Unassessed".to_string()];
        for k in &self.rows {
            row.extend(std::iter::repeat_n(String::new(), blank));
            row.push(dash(k.unassessed));
        }
        row.push(dash(self.rows.iter().map(|k| k.unassessed).sum()));
        out.push_str(&format!("| {} |\n", row.join(" | ")));

        let mut row = vec!["Total".to_string()];
        for k in &self.rows {
            row.extend(std::iter::repeat_n(String::new(), blank));
            row.push(k.total().to_string());
        }
        row.push(self.total().to_string());
        out.push_str(&format!("| {} |\n", row.join(" | ")));
        out
    }

    /// One line per (kind, status, risk) cell plus unassessed and totals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,status,risk,count\n");
        for k in &self.rows {
            for (name, get) in self.status_rows() {
                let c = get(k);
                let status = name.to_lowercase().replace(' ', "-");
                for (risk, n) in [("L", c.low), ("M", c.medium), ("H", c.high), ("unrated", c.unrated)] {
                    out.push_str(&format!("{},{status},{risk},{n}\n", k.kind));
                }
                out.push_str(&format!("{},{status},total,{}\n", k.kind, c.total()));
            }
            out.push_str(&format!("{},unassessed,total,{}\n", k.kind, k.unassessed));
            out.push_str(&format!("{},all,total,{}\n", k.kind, k.total()));
        }
        out.push_str(&format!("all,all,total,{}\n", self.total()));
        out
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_markdown())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::EdgeId;

    fn hyps(kinds: &[HypothesisKind]) -> Vec<Hypothesis> {
        kinds
            .iter()
            .enumerate()
            .map(|(i, k)| Hypothesis {
                id: HypothesisId(format!("h{i}")),
                edge: EdgeId(format!("e{i}")),
                kind: *k,
                generated_text: format!("statement {i}"),
                edited_text: None,
                stale: false,
            })
            .collect()
    }

    #[test]
    fn validated_needs_evidence() {
        let hs = hyps(&[HypothesisKind::Problem]);
        let mut r = Registry::default();
        assert_eq!(
            r.assess(&hs, &"h0".into(), Status::Validated, Some(Risk::High), vec![]).unwrap_err(),
            RegistryError::ValidatedWithoutEvidence("h0".into())
        );
        assert!(r.is_empty());
        let ev = vec![
            Evidence::new(EvidenceKind::OwnExperience),
            Evidence::new(EvidenceKind::OfflineSurvey),
            Evidence::new(EvidenceKind::OnlineSurvey),
        ];
        r.assess(&hs, &"h0".into(), Status::Validated, Some(Risk::High), ev).unwrap();
        assert_eq!(r.current(&"h0".into()).unwrap().evidence.len(), 3);
        assert_eq!(
            r.assess(&hs, &"nope".into(), Status::Refuted, None, vec![]).unwrap_err(),
            RegistryError::UnknownHypothesis("nope".into())
        );
    }

    #[test]
    fn history_is_append_only() {
        let hs = hyps(&[HypothesisKind::Value]);
        let mut r = Registry::default();
        r.assess(&hs, &"h0".into(), Status::Refuted, Some(Risk::Low), vec![]).unwrap();
        let first = r.history(&"h0".into())[0].clone();
        r.assess(&hs, &"h0".into(), Status::NotValidated, Some(Risk::High), vec![]).unwrap();
        let h = r.history(&"h0".into());
        assert_eq!(h.len(), 2);
        assert_eq!(h[0], first);
        assert_eq!(r.current(&"h0".into()).unwrap().status, Status::NotValidated);
    }

    #[test]
    fn empty_registry_summary_is_all_unassessed() {
        let hs = hyps(&[HypothesisKind::Value, HypothesisKind::Value, HypothesisKind::Product]);
        let s = Registry::default().summary(&hs, SummaryMode::Paper);
        assert_eq!(s.kind(HypothesisKind::Value).unassessed, 2);
        assert_eq!(s.kind(HypothesisKind::Product).unassessed, 1);
        assert_eq!(s.total(), 3);
    }

    #[test]
    fn refuted_folds_in_paper_mode() {
        let hs = hyps(&[HypothesisKind::Value]);
        let mut r = Registry::default();
        r.assess(&hs, &"h0".into(), Status::Refuted, Some(Risk::Medium), vec![]).unwrap();
        let paper = r.summary(&hs, SummaryMode::Paper);
        assert_eq!(paper.kind(HypothesisKind::Value).not_validated.medium, 1);
        let full = r.summary(&hs, SummaryMode::Full);
        assert_eq!(full.kind(HypothesisKind::Value).refuted.medium, 1);
        assert!(full.to_markdown().contains("| Refuted |"));
        assert!(!paper.to_markdown().contains("Refuted"));
    }

    #[test]
    fn save_load_and_errors() {
        let hs = hyps(&[HypothesisKind::Problem, HypothesisKind::Value]);
        let mut r = Registry::default();
        r.assess(
            &hs,
            &"h0".into(),
            Status::Validated,
            Some(Risk::High),
            vec![Evidence::new(EvidenceKind::Interviews).with_note("shops")],
        )
        .unwrap();
        r.assess(&hs, &"h0".into(), Status::Refuted, Some(Risk::High), vec![]).unwrap();
        let dir = std::env::temp_dir().join(format!("hymap-reg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("m.assessments.json");
        r.save(&path).unwrap();
        assert_eq!(Registry::load(&path, &hs).unwrap(), r);
        assert_eq!(
            Registry::load(&path, &hs[1..]).unwrap_err(),
            RegistryError::DanglingAssessment("h0".into())
        );
        let text = std::fs::read_to_string(&path).unwrap().replace("\"version\": 1", "\"version\": 2");
        assert_eq!(Registry::from_json(&text, &hs).unwrap_err(), RegistryError::UnsupportedVersion(2));
        assert!(matches!(Registry::from_json("{\"version\":1,", &hs), Err(RegistryError::Corrupt(_))));
        assert!(Registry::load(&dir.join("missing.json"), &hs).unwrap().is_empty());
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn load_rechecks_evidence() {
        let hs = hyps(&[HypothesisKind::Problem]);
        let text = r#"{"version":1,"assessments":[{"hypothesis":"h0","history":[
            {"hypothesis":"h0","status":"validated","risk":"H","evidence":[],"assessed_at":"2026-01-01T00:00:00Z"}]}]}"#;
        assert_eq!(
            Registry::from_json(text, &hs).unwrap_err(),
            RegistryError::ValidatedWithoutEvidence("h0".into())
        );
    }

    #[test]
    fn parsing_cli_values() {
        assert_eq!("not_validated".parse::<Status>().unwrap(), Status::NotValidated);
        assert_eq!("h".parse::<Risk>().unwrap(), Risk::High);
        let e: Evidence = "offline survey: 40 players".parse().unwrap();
        assert_eq!(e.source, EvidenceKind::OfflineSurvey);
        assert_eq!(e.note.as_deref(), Some("40 players"));
        assert!("telepathy".parse::<Evidence>().is_err());
    }
}
