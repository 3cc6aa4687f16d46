//! Append-only JSON-lines session log.

use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::{Answer, ElicitationError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "kebab-case")]
pub enum SessionEvent {
    Start {
        session: String,
        title: String,
        node_budget: usize,
        at: DateTime<Utc>,
    },
    Answer {
        seq: u64,
        prompt_id: String,
        payload: Answer,
        at: DateTime<Utc>,
    },
    Finish {
        at: DateTime<Utc>,
    },
}

/// `maps/case_d.hymap` -> `maps/case_d.log.jsonl`
pub fn default_log_path(map_file: &Path) -> PathBuf {
    map_file.with_extension("log.jsonl")
}

pub fn append_event(path: &Path, event: &SessionEvent) -> Result<(), ElicitationError> {
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| ElicitationError::Log(format!("{}: {e}", path.display())))?;
    let line = serde_json::to_string(event).expect("events always serialize");
    writeln!(file, "{line}")
        .and_then(|_| file.flush())
        .map_err(|e| ElicitationError::Log(format!("{}: {e}", path.display())))
}

pub fn write_events(path: &Path, events: &[SessionEvent]) -> Result<(), ElicitationError> {
    let text = events_to_string(events);
    std::fs::write(path, text).map_err(|e| ElicitationError::Log(format!("{}: {e}", path.display())))
}

pub fn events_to_string(events: &[SessionEvent]) -> String {
    events
        .iter()
        .map(|e| serde_json::to_string(e).expect("events always serialize") + "\n")
        .collect()
}

pub fn parse_events(text: &str) -> Result<Vec<SessionEvent>, ElicitationError> {
    parse_lines(text.lines().map(|l| Ok(l.to_string())))
}

pub fn read_events(path: &Path) -> Result<Vec<SessionEvent>, ElicitationError> {
    let file = std::fs::File::open(path).map_err(|e| ElicitationError::Log(format!("{}: {e}", path.display())))?;
    parse_lines(BufReader::new(file).lines())
}

fn parse_lines(
    lines: impl Iterator<Item = std::io::Result<String>>,
) -> Result<Vec<SessionEvent>, ElicitationError> {
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| ElicitationError::Log(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let event = serde_json::from_str(&line)
            .map_err(|e| ElicitationError::Log(format!("line {}: {e}", i + 1)))?;
        out.push(event);
    }
    Ok(out)
}
