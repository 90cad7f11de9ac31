//! Append-only JSONL persistence, one file per session.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::api::{CreateRequest, SubmitRequest};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    Created { id: String, request: CreateRequest },
    Submitted { request: SubmitRequest },
}

#[derive(Clone, Debug, Default)]
pub struct Store {
    dir: Option<PathBuf>,
}

impl Store {
    /// Keeps sessions in memory only.
    pub fn memory() -> Self {
        Store { dir: None }
    }

    pub fn on_disk(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Store { dir: Some(dir) })
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn path(&self, id: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{id}.jsonl")))
    }

    /// Writes one event as a single line in a single write.
    pub fn append(&self, id: &str, event: &Event) -> std::io::Result<()> {
        let Some(path) = self.path(id) else { return Ok(()) };
        let mut line = serde_json::to_string(event)?;
        line.push('\n');
        let mut f = OpenOptions::new().create(true).append(true).open(path)?;
        f.write_all(line.as_bytes())?;
        f.sync_data()
    }

    /// Every stored session's events, sorted by file name.
    pub fn load(&self) -> std::io::Result<Vec<(String, Vec<Event>)>> {
        let Some(dir) = &self.dir else { return Ok(Vec::new()) };
        let mut files: Vec<PathBuf> = fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
            .collect();
        files.sort();
        let mut out = Vec::new();
        for path in files {
            let id = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
            let text = fs::read_to_string(&path)?;
            let events = text
                .lines()
                .filter(|l| !l.trim().is_empty())
                .map(serde_json::from_str)
                .collect::<Result<Vec<Event>, _>>()?;
            out.push((id, events));
        }
        Ok(out)
    }
}
