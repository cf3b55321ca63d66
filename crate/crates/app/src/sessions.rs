//! Pattern-learning sessions kept in memory and mirrored to a JSON sidecar,
//! so a restarted service picks up where it stopped.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use shg::learning::{Criterion, LearnError, Session};
use shg::Store;

#[derive(Debug, Default, Serialize, Deserialize)]
struct Sidecar {
    next: u64,
    sessions: Vec<Session>,
}

#[derive(Debug, Default)]
pub struct SessionBook {
    sessions: BTreeMap<String, Session>,
    next: u64,
    path: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum SidecarError {
    #[error("session sidecar {path}: {message}")]
    Bad { path: PathBuf, message: String },
}

fn bad(path: &Path, message: impl ToString) -> SidecarError {
    SidecarError::Bad { path: path.to_path_buf(), message: message.to_string() }
}

impl SessionBook {
    /// In-memory only.
    pub fn new() -> SessionBook {
        SessionBook::default()
    }

    /// Loads the sidecar if it exists; later changes are written back to it.
    pub fn open(path: impl Into<PathBuf>) -> Result<SessionBook, SidecarError> {
        let path = path.into();
        let mut book = SessionBook { path: Some(path.clone()), ..Default::default() };
        if path.exists() {
            let text = std::fs::read_to_string(&path).map_err(|e| bad(&path, e))?;
            let car: Sidecar = serde_json::from_str(&text).map_err(|e| bad(&path, e))?;
            book.next = car.next;
            for s in car.sessions {
                book.sessions.insert(s.id.clone(), s);
            }
        }
        Ok(book)
    }

    pub fn save(&self) -> Result<(), SidecarError> {
        let Some(path) = &self.path else { return Ok(()) };
        let car = Sidecar { next: self.next, sessions: self.sessions.values().cloned().collect() };
        let tmp = path.with_extension("tmp");
        let text = serde_json::to_string_pretty(&car).map_err(|e| bad(path, e))?;
        std::fs::write(&tmp, text).map_err(|e| bad(path, e))?;
        std::fs::rename(&tmp, path).map_err(|e| bad(path, e))
    }

    pub fn create(&mut self, store: &Store, criterion: Criterion) -> Result<&Session, LearnError> {
        self.next += 1;
        let id = format!("s{}", self.next);
        let s = Session::new(id.clone(), store, criterion)?;
        Ok(self.sessions.entry(id).or_insert(s))
    }

    pub fn get(&self, id: &str) -> Option<&Session> {
        self.sessions.get(id)
    }

    pub fn get_mut(&mut self, id: &str) -> Option<&mut Session> {
        self.sessions.get_mut(id)
    }

    pub fn len(&self) -> usize {
        self.sessions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sessions.is_empty()
    }
}
