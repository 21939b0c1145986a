//! Chat-completion gateway.
//!
//! Every model call in the crate goes through [`Gateway::complete`], which
//! enforces the parallelism cap, retries transient failures with exponential
//! backoff, surfaces refusals untouched and records each exchange to an
//! optional run log. The backend behind it is either a remote
//! OpenAI-compatible endpoint ([`HttpBackend`]) or the deterministic
//! [`MockBackend`].

mod http;
mod mock;
pub mod prompts;
mod runlog;
mod template;

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Duration;

use async_trait::async_trait;
use serde::{Deserialize, Serialize};
use tokio::sync::Semaphore;

pub use http::{HttpBackend, HttpBackendConfig};
pub use mock::{mock_respond, MockBackend, MockScript, REFUSAL_PREFIX, TRANSIENT_PREFIX};
pub use runlog::{RunLog, RunLogEntry};
pub use template::{slots, PromptTemplate, TemplateError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatTurn {
    pub role: Role,
    pub content: String,
}

impl ChatTurn {
    pub fn user(content: impl Into<String>) -> Self {
        Self {
            role: Role::User,
            content: content.into(),
        }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        Self {
            role: Role::Assistant,
            content: content.into(),
        }
    }
}

/// One chat-completion request.
///
/// `template` and `seed` are routing metadata: they key the mock backend and
/// the run log and are never sent to a remote provider.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub template: String,
    pub seed: u64,
    pub model_id: String,
    pub system_prompt: String,
    pub turns: Vec<ChatTurn>,
    pub temperature: f32,
    pub max_tokens: u32,
    pub frequency_penalty: f32,
}

impl ChatRequest {
    pub fn new(template: impl Into<String>, system_prompt: impl Into<String>, user: impl Into<String>) -> Self {
        let template = template.into();
        let settings = GenerationSettings::default_for(&template);
        Self {
            template,
            seed: 0,
            model_id: String::new(),
            system_prompt: system_prompt.into(),
            turns: vec![ChatTurn::user(user)],
            temperature: settings.temperature,
            max_tokens: settings.max_tokens,
            frequency_penalty: settings.frequency_penalty,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn last_user_turn(&self) -> &str {
        self.turns
            .iter()
            .rev()
            .find(|t| t.role == Role::User)
            .map(|t| t.content.as_str())
            .unwrap_or("")
    }

    pub fn validate(&self) -> Result<(), GatewayError> {
        if self.temperature.is_nan() || self.temperature < 0.0 {
            return Err(GatewayError::InvalidRequest(format!(
                "temperature {} < 0",
                self.temperature
            )));
        }
        if self.max_tokens == 0 {
            return Err(GatewayError::InvalidRequest("max_tokens must be > 0".into()));
        }
        Ok(())
    }
}

/// Sampling parameters for one template.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerationSettings {
    pub temperature: f32,
    pub max_tokens: u32,
    pub frequency_penalty: f32,
}

impl GenerationSettings {
    /// Comment generation samples hot with a strong frequency penalty;
    /// judging templates (tagging, inference, equivalence) run near-greedy.
    pub fn default_for(template: &str) -> Self {
        match template {
            prompts::TAGGING
            | prompts::INFERENCE
            | prompts::GUESS_EXTRACTION
            | prompts::EQUIVALENCE
            | prompts::SUBREDDIT_CLASSIFICATION => Self {
                temperature: 0.1,
                max_tokens: 4000,
                frequency_penalty: 0.0,
            },
            prompts::COMMENT_GENERATION => Self {
                temperature: 1.0,
                max_tokens: 1000,
                frequency_penalty: 2.0,
            },
            _ => Self {
                temperature: 1.0,
                max_tokens: 2000,
                frequency_penalty: 0.0,
            },
        }
    }
}

/// Per-template overrides of [`GenerationSettings::default_for`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GenerationConfig {
    #[serde(default)]
    pub overrides: BTreeMap<String, GenerationSettings>,
}

impl GenerationConfig {
    pub fn settings(&self, template: &str) -> GenerationSettings {
        self.overrides
            .get(template)
            .copied()
            .unwrap_or_else(|| GenerationSettings::default_for(template))
    }
}

/// Failure reported by a backend for a single attempt.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BackendError {
    /// Worth retrying: rate limits, 5xx, connection resets, timeouts.
    #[error("transient backend failure: {0}")]
    Transient(String),
    /// The provider declined to answer.
    #[error("model refused: {0}")]
    Refusal(String),
    #[error("backend failure: {0}")]
    Fatal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GatewayError {
    #[error("backend unavailable after {attempts} attempts: {last}")]
    BackendUnavailable { attempts: u32, last: String },
    #[error("model refused to answer")]
    Refusal { raw: String },
    #[error("backend error: {0}")]
    Backend(String),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
}

/// A chat-completion provider.
#[async_trait]
pub trait ChatBackend: Send + Sync {
    fn name(&self) -> &str;

    async fn send(&self, request: &ChatRequest) -> Result<String, BackendError>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub base_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            max_attempts: 3,
            base_delay: Duration::from_secs(2),
        }
    }
}

impl RetryPolicy {
    /// Delay before retry number `retry` (1-based): base * 2^(retry-1).
    pub fn delay(&self, retry: u32) -> Duration {
        self.base_delay
            .saturating_mul(1u32.checked_shl(retry.saturating_sub(1)).unwrap_or(u32::MAX))
    }
}

pub const DEFAULT_PARALLELISM: usize = 8;

/// Shareable front door to a backend. Cloning is cheap and clones share the
/// same in-flight cap.
#[derive(Clone)]
pub struct Gateway {
    backend: Arc<dyn ChatBackend>,
    permits: Arc<Semaphore>,
    retry: RetryPolicy,
    generation: Arc<GenerationConfig>,
    model_id: String,
    log: Option<RunLog>,
}

impl std::fmt::Debug for Gateway {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Gateway")
            .field("backend", &self.backend.name())
            .field("model_id", &self.model_id)
            .field("retry", &self.retry)
            .finish()
    }
}

impl Gateway {
    pub fn new(backend: Arc<dyn ChatBackend>) -> Self {
        Self {
            backend,
            permits: Arc::new(Semaphore::new(DEFAULT_PARALLELISM)),
            retry: RetryPolicy::default(),
            generation: Arc::new(GenerationConfig::default()),
            model_id: String::new(),
            log: None,
        }
    }

    /// Gateway over the built-in deterministic mock with no retry delay.
    pub fn mock() -> Self {
        Self::new(Arc::new(MockBackend::builtin())).with_retry(RetryPolicy {
            max_attempts: 3,
            base_delay: Duration::ZERO,
        })
    }

    pub fn with_parallelism(mut self, cap: usize) -> Self {
        self.permits = Arc::new(Semaphore::new(cap.max(1)));
        self
    }

    pub fn with_retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    pub fn with_generation(mut self, generation: GenerationConfig) -> Self {
        self.generation = Arc::new(generation);
        self
    }

    pub fn with_model(mut self, model_id: impl Into<String>) -> Self {
        self.model_id = model_id.into();
        self
    }

    pub fn with_log(mut self, log: RunLog) -> Self {
        self.log = Some(log);
        self
    }

    pub fn model_id(&self) -> &str {
        &self.model_id
    }

    pub fn backend_name(&self) -> &str {
        self.backend.name()
    }

    /// Build a request for `template` with this gateway's model and the
    /// template's configured sampling parameters.
    pub fn request(
        &self,
        template: &str,
        system_prompt: impl Into<String>,
        user: impl Into<String>,
        seed: u64,
    ) -> ChatRequest {
        let s = self.generation.settings(template);
        ChatRequest {
            template: template.to_string(),
            seed,
            model_id: self.model_id.clone(),
            system_prompt: system_prompt.into(),
            turns: vec![ChatTurn::user(user)],
            temperature: s.temperature,
            max_tokens: s.max_tokens,
            frequency_penalty: s.frequency_penalty,
        }
    }

    /// Send `request`, retrying transient failures.
    pub async fn complete(&self, request: &ChatRequest) -> Result<String, GatewayError> {
        request.validate()?;
        let mut attempt = 0;
        loop {
            attempt += 1;
            let outcome = {
                let _permit = self
                    .permits
                    .acquire()
                    .await
                    .map_err(|_| GatewayError::Backend("gateway closed".into()))?;
                self.backend.send(request).await
            };
            if let Some(log) = &self.log {
                log.record(RunLogEntry::new(self.backend.name(), request, attempt, &outcome));
            }
            match outcome {
                Ok(text) => return Ok(text),
                Err(BackendError::Refusal(raw)) => return Err(GatewayError::Refusal { raw }),
                Err(BackendError::Fatal(msg)) => return Err(GatewayError::Backend(msg)),
                Err(BackendError::Transient(msg)) => {
                    if attempt >= self.retry.max_attempts {
                        return Err(GatewayError::BackendUnavailable {
                            attempts: attempt,
                            last: msg,
                        });
                    }
                    tracing::warn!(template = %request.template, attempt, "transient failure: {msg}");
                    tokio::time::sleep(self.retry.delay(attempt)).await;
                }
            }
        }
    }
}

/// splitmix64 finalizer; used wherever a stable, platform-independent hash of
/// integers is needed.
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// FNV-1a over bytes.
pub(crate) fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// Derive a child seed from a parent seed and a label.
pub fn derive_seed(parent: u64, label: &str) -> u64 {
    mix64(parent ^ fnv1a(label.as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::sync::Mutex;

    struct Scripted {
        outcomes: Mutex<Vec<Result<String, BackendError>>>,
        calls: AtomicUsize,
    }

    #[async_trait]
    impl ChatBackend for Scripted {
        fn name(&self) -> &str {
            "scripted"
        }
        async fn send(&self, _r: &ChatRequest) -> Result<String, BackendError> {
            self.calls.fetch_add(1, Ordering::SeqCst);
            self.outcomes.lock().unwrap().remove(0)
        }
    }

    fn scripted(outcomes: Vec<Result<String, BackendError>>) -> Arc<Scripted> {
        Arc::new(Scripted {
            outcomes: Mutex::new(outcomes),
            calls: AtomicUsize::new(0),
        })
    }

    fn fast(backend: Arc<dyn ChatBackend>) -> Gateway {
        Gateway::new(backend).with_retry(RetryPolicy {
            max_attempts: 3,
            base_delay: Duration::from_millis(1),
        })
    }

    #[tokio::test]
    async fn succeeds_after_two_transient_failures() {
        let b = scripted(vec![
            Err(BackendError::Transient("503".into())),
            Err(BackendError::Transient("429".into())),
            Ok("done".into()),
        ]);
        let gw = fast(b.clone());
        let out = gw.complete(&ChatRequest::new("x", "", "hi")).await.unwrap();
        assert_eq!(out, "done");
        assert_eq!(b.calls.load(Ordering::SeqCst), 3);
    }

    #[tokio::test]
    async fn exhausted_retries() {
        let b = scripted(vec![Err(BackendError::Transient("503".into())); 3]);
        let err = fast(b).complete(&ChatRequest::new("x", "", "hi")).await.unwrap_err();
        assert!(matches!(err, GatewayError::BackendUnavailable { attempts: 3, .. }));
    }

    #[tokio::test]
    async fn refusal_not_retried() {
        let b = scripted(vec![Err(BackendError::Refusal("I can't help with that".into()))]);
        let err = fast(b.clone()).complete(&ChatRequest::new("x", "", "hi")).await.unwrap_err();
        assert_eq!(err, GatewayError::Refusal { raw: "I can't help with that".into() });
        assert_eq!(b.calls.load(Ordering::SeqCst), 1);
    }

    #[test]
    fn backoff_doubles() {
        let p = RetryPolicy::default();
        assert_eq!(p.delay(1), Duration::from_secs(2));
        assert_eq!(p.delay(2), Duration::from_secs(4));
        assert_eq!(p.delay(3), Duration::from_secs(8));
    }

    #[test]
    fn invalid_requests_rejected() {
        let mut r = ChatRequest::new("x", "", "hi");
        r.max_tokens = 0;
        assert!(r.validate().is_err());
        r.max_tokens = 1;
        r.temperature = -0.5;
        assert!(r.validate().is_err());
    }

    #[test]
    fn default_settings() {
        let c = GenerationSettings::default_for(prompts::COMMENT_GENERATION);
        assert_eq!((c.temperature, c.frequency_penalty), (1.0, 2.0));
        let t = GenerationSettings::default_for(prompts::TAGGING);
        assert_eq!((t.temperature, t.max_tokens), (0.1, 4000));
    }

    struct Counting {
        inflight: AtomicUsize,
        peak: AtomicUsize,
    }

    #[async_trait]
    impl ChatBackend for Counting {
        fn name(&self) -> &str {
            "counting"
        }
        async fn send(&self, r: &ChatRequest) -> Result<String, BackendError> {
            let now = self.inflight.fetch_add(1, Ordering::SeqCst) + 1;
            self.peak.fetch_max(now, Ordering::SeqCst);
            tokio::time::sleep(Duration::from_millis(5)).await;
            self.inflight.fetch_sub(1, Ordering::SeqCst);
            Ok(r.seed.to_string())
        }
    }

    #[tokio::test(flavor = "multi_thread", worker_threads = 4)]
    async fn parallelism_cap_respected() {
        let backend = Arc::new(Counting {
            inflight: AtomicUsize::new(0),
            peak: AtomicUsize::new(0),
        });
        let gw = Gateway::new(backend.clone()).with_parallelism(8);
        let tasks: Vec<_> = (0..64u64)
            .map(|i| {
                let gw = gw.clone();
                tokio::spawn(async move { gw.complete(&ChatRequest::new("x", "", "q").with_seed(i)).await })
            })
            .collect();
        let mut done = 0;
        for (i, t) in tasks.into_iter().enumerate() {
            assert_eq!(t.await.unwrap().unwrap(), i.to_string());
            done += 1;
        }
        assert_eq!(done, 64);
        let peak = backend.peak.load(Ordering::SeqCst);
        assert!(peak <= 8, "peak in-flight {peak}");
        assert!(peak > 1, "requests were not concurrent");
    }
}
