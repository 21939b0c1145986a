//! On-disk dataset bundles and the published-dataset importer.

mod import;

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub use import::{import_published, ImportError, ImportMapping, ImportSummary};

use crate::model::{Profile, ProfileLabelSet, ThreadTree};
use crate::oracle::{replay_decisions, DecisionError, TaggingDecision};

pub const SCHEMA_VERSION: u32 = 1;

pub const PROFILES_FILE: &str = "profiles.jsonl";
pub const THREADS_FILE: &str = "threads.jsonl";
pub const DECISIONS_FILE: &str = "decisions.jsonl";
pub const LABELS_FILE: &str = "labels.jsonl";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub seed: u64,
    pub created_at: DateTime<Utc>,
    pub generator_model: String,
}

impl Manifest {
    pub fn new(seed: u64, generator_model: impl Into<String>, created_at: DateTime<Utc>) -> Self {
        Self { schema_version: SCHEMA_VERSION, seed, created_at, generator_model: generator_model.into() }
    }
}

/// Everything a run produces. `threads` hold the raw tags; reviewer
/// decisions live in `decisions` and are replayed on demand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetBundle {
    pub manifest: Manifest,
    pub profiles: Vec<Profile>,
    pub threads: Vec<ThreadTree>,
    pub decisions: Vec<TaggingDecision>,
    pub labels: Vec<ProfileLabelSet>,
}

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("IntegrityError: no dataset at {0} (manifest.json missing)")]
    MissingManifest(PathBuf),
    #[error("MigrationRequired: bundle schema {found}, this build reads {expected}")]
    MigrationRequired { found: u32, expected: u32 },
    #[error("IntegrityError: {0}")]
    IntegrityError(String),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> StoreError + '_ {
    move |source| StoreError::Io { path: path.to_path_buf(), source }
}

/// Compact JSON with object keys sorted.
pub fn to_sorted_json<T: Serialize>(value: &T) -> String {
    // serde_json::Value keeps objects in a BTreeMap, hence sorted.
    serde_json::to_value(value).and_then(|v| serde_json::to_string(&v)).expect("bundle types always serialize")
}

fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), StoreError> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut builder = tempfile::Builder::new();
    // Temp files default to owner-only; bundles are meant to be shared.
    #[cfg(unix)]
    builder.permissions(std::os::unix::fs::PermissionsExt::from_mode(0o644));
    let mut tmp = builder.tempfile_in(dir).map_err(io_err(path))?;
    tmp.write_all(contents).map_err(io_err(path))?;
    tmp.as_file().sync_all().map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| StoreError::Io { path: path.to_path_buf(), source: e.error })?;
    Ok(())
}

pub fn jsonl_string<T: Serialize>(items: &[T]) -> String {
    let mut s = String::new();
    for it in items {
        s.push_str(&to_sorted_json(it));
        s.push('\n');
    }
    s
}

pub fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<(), StoreError> {
    write_atomic(path, jsonl_string(items).as_bytes())
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, StoreError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| StoreError::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

/// Append one record to a JSONL file, creating it if needed.
pub fn append_jsonl<T: Serialize>(path: &Path, item: &T) -> Result<(), StoreError> {
    let mut f = fs::OpenOptions::new().create(true).append(true).open(path).map_err(io_err(path))?;
    writeln!(f, "{}", to_sorted_json(item)).map_err(io_err(path))?;
    f.sync_data().map_err(io_err(path))
}

impl DatasetBundle {
    pub fn new(manifest: Manifest) -> Self {
        Self { manifest, profiles: Vec::new(), threads: Vec::new(), decisions: Vec::new(), labels: Vec::new() }
    }

    /// Referential integrity: tree structure, authors, decisions and label
    /// owners all resolve.
    pub fn validate(&self) -> Result<(), StoreError> {
        let bad = |m: String| Err(StoreError::IntegrityError(m));
        let users: BTreeSet<&str> = self.profiles.iter().map(|p| p.username.as_str()).collect();
        if users.len() != self.profiles.len() {
            return bad("duplicate profile usernames".into());
        }
        let mut ids = BTreeSet::new();
        for t in &self.threads {
            if !ids.insert(t.id.as_str()) {
                return bad(format!("duplicate thread id {}", t.id));
            }
            t.validate().map_err(|e| StoreError::IntegrityError(format!("thread {}: {e}", t.id)))?;
            for n in t.comments() {
                if !users.contains(n.author.as_str()) {
                    return bad(format!("thread {} comment {} has unknown author {}", t.id, n.id, n.author));
                }
            }
        }
        for d in &self.decisions {
            let found = self
                .threads
                .iter()
                .find(|t| t.id == d.thread_id)
                .and_then(|t| t.node(d.comment_id).ok())
                .is_some_and(|n| !n.is_system());
            if !found {
                return bad(format!("decision refers to unknown comment {}", d.key()));
            }
        }
        for l in &self.labels {
            if !users.contains(l.username.as_str()) {
                return bad(format!("labels for unknown profile {}", l.username));
            }
        }
        Ok(())
    }

    /// Threads with the decision log applied.
    pub fn resolved_threads(&self) -> (Vec<ThreadTree>, Vec<(TaggingDecision, DecisionError)>) {
        let mut threads = self.threads.clone();
        let failures = replay_decisions(&mut threads, &self.decisions);
        (threads, failures)
    }

    pub fn comment_count(&self) -> usize {
        self.threads.iter().map(|t| t.comments().count()).sum()
    }
}

pub fn save_bundle(bundle: &DatasetBundle, dir: &Path) -> Result<(), StoreError> {
    bundle.validate()?;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    write_jsonl(&dir.join(PROFILES_FILE), &bundle.profiles)?;
    write_jsonl(&dir.join(THREADS_FILE), &bundle.threads)?;
    write_jsonl(&dir.join(DECISIONS_FILE), &bundle.decisions)?;
    write_jsonl(&dir.join(LABELS_FILE), &bundle.labels)?;
    let manifest = serde_json::to_string_pretty(&serde_json::to_value(&bundle.manifest).expect("manifest serializes"))
        .expect("manifest serializes");
    write_atomic(&dir.join(MANIFEST_FILE), format!("{manifest}\n").as_bytes())
}

fn read_optional<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, StoreError> {
    if path.exists() {
        read_jsonl(path)
    } else {
        Ok(Vec::new())
    }
}

/// Load without checking integrity.
pub fn load_bundle_unchecked(dir: &Path) -> Result<DatasetBundle, StoreError> {
    let mpath = dir.join(MANIFEST_FILE);
    if !mpath.exists() {
        return Err(StoreError::MissingManifest(dir.to_path_buf()));
    }
    let text = fs::read_to_string(&mpath).map_err(io_err(&mpath))?;
    let raw: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| StoreError::Parse { path: mpath.clone(), line: e.line(), message: e.to_string() })?;
    let found = raw.get("schema_version").and_then(|v| v.as_u64()).unwrap_or(0) as u32;
    if found != SCHEMA_VERSION {
        return Err(StoreError::MigrationRequired { found, expected: SCHEMA_VERSION });
    }
    let manifest: Manifest = serde_json::from_value(raw)
        .map_err(|e| StoreError::Parse { path: mpath.clone(), line: 1, message: e.to_string() })?;
    Ok(DatasetBundle {
        manifest,
        profiles: read_optional(&dir.join(PROFILES_FILE))?,
        threads: read_optional(&dir.join(THREADS_FILE))?,
        decisions: read_optional(&dir.join(DECISIONS_FILE))?,
        labels: read_optional(&dir.join(LABELS_FILE))?,
    })
}

pub fn load_bundle(dir: &Path) -> Result<DatasetBundle, StoreError> {
    let b = load_bundle_unchecked(dir)?;
    b.validate()?;
    Ok(b)
}
