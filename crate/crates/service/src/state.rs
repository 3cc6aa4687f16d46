use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use chrono::{DateTime, Utc};
use thiserror::Error;

use hymap_core::dsl::{export_json, import_json};
use hymap_core::elicitation::{log, Answer, ElicitationSession};
use hymap_core::hypogen::{self, Hypothesis};
use hymap_core::registry::Registry;
use hymap_core::CognitiveMap;

use crate::Config;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: {message}")]
    Load { path: PathBuf, message: String },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

pub struct StoredMap {
    pub map: CognitiveMap,
    pub registry: Registry,
}

impl StoredMap {
    /// Hypotheses of the current map; empty while it has validation errors.
    pub fn hypotheses(&self) -> Vec<Hypothesis> {
        hypogen::generate(&self.map).unwrap_or_default()
    }
}

pub struct LiveSession {
    pub session: ElicitationSession,
    pub token: String,
    pub expires_at: DateTime<Utc>,
    /// Last accepted answer and the response it produced, for retries.
    pub last: Option<(String, Answer, serde_json::Value)>,
    pub finished: Option<serde_json::Value>,
}

struct Inner {
    config: Config,
    maps: RwLock<HashMap<String, Arc<Mutex<StoredMap>>>>,
    sessions: RwLock<HashMap<String, Arc<Mutex<LiveSession>>>>,
}

#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

impl AppState {
    /// Create the storage layout and load every stored map.
    pub fn open(config: Config) -> Result<Self, StoreError> {
        std::fs::create_dir_all(config.storage.join("maps"))?;
        std::fs::create_dir_all(config.storage.join("sessions"))?;
        let mut maps = HashMap::new();
        for entry in std::fs::read_dir(config.storage.join("maps"))? {
            let path = entry?.path();
            let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
                continue;
            };
            let Some(id) = name.strip_suffix(".map.json") else {
                continue;
            };
            let load = |path: &Path, message: String| StoreError::Load {
                path: path.to_path_buf(),
                message,
            };
            let text = std::fs::read_to_string(&path)?;
            let map = import_json(&text).map_err(|e| load(&path, e.to_string()))?;
            let hyps = hypogen::generate(&map).unwrap_or_default();
            let reg_path = registry_path(&config.storage, id);
            let registry = Registry::load(&reg_path, &hyps).map_err(|e| load(&reg_path, e.to_string()))?;
            maps.insert(id.to_string(), Arc::new(Mutex::new(StoredMap { map, registry })));
        }
        Ok(AppState {
            inner: Arc::new(Inner {
                config,
                maps: RwLock::new(maps),
                sessions: RwLock::new(HashMap::new()),
            }),
        })
    }

    pub fn config(&self) -> &Config {
        &self.inner.config
    }

    pub fn map(&self, id: &str) -> Option<Arc<Mutex<StoredMap>>> {
        self.inner.maps.read().expect("map table lock").get(id).cloned()
    }

    pub fn insert_map(&self, id: String, stored: StoredMap) -> Arc<Mutex<StoredMap>> {
        let entry = Arc::new(Mutex::new(stored));
        self.inner.maps.write().expect("map table lock").insert(id, entry.clone());
        entry
    }

    /// Write a map and its registry to disk.
    pub fn persist(&self, id: &str, stored: &StoredMap) -> std::io::Result<()> {
        let storage = &self.inner.config.storage;
        let path = storage.join("maps").join(format!("{id}.map.json"));
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, export_json(&stored.map))?;
        std::fs::rename(&tmp, &path)?;
        stored
            .registry
            .save(&registry_path(storage, id))
            .map_err(|e| std::io::Error::other(e.to_string()))
    }

    pub fn session(&self, id: &str) -> Option<Arc<Mutex<LiveSession>>> {
        self.inner.sessions.read().expect("session table lock").get(id).cloned()
    }

    pub fn insert_session(&self, id: String, live: LiveSession) {
        self.inner
            .sessions
            .write()
            .expect("session table lock")
            .insert(id, Arc::new(Mutex::new(live)));
    }

    pub fn session_log_path(&self, id: &str) -> PathBuf {
        log::default_log_path(&self.inner.config.storage.join("sessions").join(id))
    }
}

fn registry_path(storage: &Path, id: &str) -> PathBuf {
    storage.join("maps").join(format!("{id}.assessments.json"))
}
