use std::fs::OpenOptions;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::mpsc::{self, Sender};
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;

use serde::{Deserialize, Serialize};

use super::{BackendError, ChatRequest, ChatTurn};

/// One request/response exchange as written to the run log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunLogEntry {
    pub backend: String,
    pub template: String,
    pub model_id: String,
    pub seed: u64,
    pub attempt: u32,
    pub system_prompt: String,
    pub turns: Vec<ChatTurn>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub response: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RunLogEntry {
    pub fn new(
        backend: &str,
        request: &ChatRequest,
        attempt: u32,
        outcome: &Result<String, BackendError>,
    ) -> Self {
        let (response, error) = match outcome {
            Ok(text) => (Some(text.clone()), None),
            Err(e) => (None, Some(e.to_string())),
        };
        Self {
            backend: backend.to_string(),
            template: request.template.clone(),
            model_id: request.model_id.clone(),
            seed: request.seed,
            attempt,
            system_prompt: request.system_prompt.clone(),
            turns: request.turns.clone(),
            response,
            error,
        }
    }
}

enum Msg {
    Entry(Box<RunLogEntry>),
    Flush(mpsc::Sender<()>),
}

struct Inner {
    tx: Mutex<Option<Sender<Msg>>>,
    writer: Mutex<Option<JoinHandle<()>>>,
}

impl Drop for Inner {
    fn drop(&mut self) {
        if let Ok(mut tx) = self.tx.lock() {
            tx.take();
        }
        if let Ok(mut w) = self.writer.lock() {
            if let Some(handle) = w.take() {
                let _ = handle.join();
            }
        }
    }
}

/// Append-only JSONL log of every backend exchange.
///
/// Callers on any thread push entries into a channel; a single writer thread
/// owns the file.
#[derive(Clone)]
pub struct RunLog {
    inner: Arc<Inner>,
}

impl RunLog {
    pub fn open(path: &Path) -> std::io::Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        let (tx, rx) = mpsc::channel::<Msg>();
        let handle = std::thread::spawn(move || {
            let mut out = BufWriter::new(file);
            for msg in rx {
                match msg {
                    Msg::Entry(entry) => {
                        if let Ok(line) = serde_json::to_string(&entry) {
                            let _ = writeln!(out, "{line}");
                        }
                    }
                    Msg::Flush(ack) => {
                        let _ = out.flush();
                        let _ = ack.send(());
                    }
                }
            }
            let _ = out.flush();
        });
        Ok(Self {
            inner: Arc::new(Inner {
                tx: Mutex::new(Some(tx)),
                writer: Mutex::new(Some(handle)),
            }),
        })
    }

    pub fn record(&self, entry: RunLogEntry) {
        if let Ok(tx) = self.inner.tx.lock() {
            if let Some(tx) = tx.as_ref() {
                let _ = tx.send(Msg::Entry(Box::new(entry)));
            }
        }
    }

    /// Block until everything recorded so far is on disk.
    pub fn flush(&self) {
        let (ack_tx, ack_rx) = mpsc::channel();
        let sent = self
            .inner
            .tx
            .lock()
            .ok()
            .and_then(|tx| tx.as_ref().map(|tx| tx.send(Msg::Flush(ack_tx)).is_ok()))
            .unwrap_or(false);
        if sent {
            let _ = ack_rx.recv();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_are_appended_as_jsonl() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.jsonl");
        let log = RunLog::open(&path).unwrap();
        let req = ChatRequest::new("interest_check", "sys", "hello").with_seed(3);
        log.record(RunLogEntry::new("mock", &req, 1, &Ok("Yes".into())));
        log.record(RunLogEntry::new("mock", &req, 2, &Err(BackendError::Transient("x".into()))));
        log.flush();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<RunLogEntry> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].response.as_deref(), Some("Yes"));
        assert!(lines[1].error.is_some());
    }
}
