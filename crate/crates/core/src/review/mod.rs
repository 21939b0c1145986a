//! HTTP service for the human tag review workflow.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::extract::{Query, Request, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::sync::RwLock;
use tower_http::cors::{AllowOrigin, CorsLayer};
use tower_http::services::ServeDir;

use crate::datastore::{append_jsonl, load_bundle, DatasetBundle, StoreError, DECISIONS_FILE};
use crate::model::{Attribute, AttributeTag, CommentId, CommentKey, TagSource, TagVerdict, ThreadTree};
use crate::oracle::{apply_decision, by_comment, coarse_to_fine, resolve_comment, FieldError, TaggingDecision};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReviewConfig {
    /// Static bearer token; no auth when unset.
    pub token: Option<String>,
    /// Origins allowed by CORS. Empty allows any origin.
    pub allowed_origins: Vec<String>,
    /// Directory with a built review UI, served at `/`.
    pub ui_dir: Option<PathBuf>,
    /// Include the model's reasoning trace in review items.
    pub show_reasoning: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ItemStatus {
    Pending,
    Done,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextEntry {
    pub comment_id: CommentId,
    pub author: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReviewItem {
    pub thread_id: String,
    pub comment_id: CommentId,
    pub author: String,
    pub comment_text: String,
    /// Root first, ending at the comment's parent.
    pub thread_context: Vec<ContextEntry>,
    /// Current tags: model proposals with their verdicts plus human additions.
    pub proposed_tags: Vec<AttributeTag>,
    pub suggested_hardness: BTreeMap<Attribute, u8>,
    pub status: ItemStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reasoning_trace: Option<String>,
}

/// Done once every model-proposed tag carries a verdict.
fn status_of(tags: &[AttributeTag]) -> ItemStatus {
    let open = tags.iter().any(|t| t.source == TagSource::Model && t.verdict.is_none_or(|v| v == TagVerdict::Pending));
    if open {
        ItemStatus::Pending
    } else {
        ItemStatus::Done
    }
}

/// In-memory review state: the raw bundle, its decision log and the tags
/// that log produces.
#[derive(Debug)]
pub struct ReviewState {
    dir: Option<PathBuf>,
    bundle: DatasetBundle,
    current: Vec<ThreadTree>,
}

impl ReviewState {
    /// State over `bundle`; decisions are appended under `dir` when given.
    pub fn new(bundle: DatasetBundle, dir: Option<PathBuf>) -> Self {
        let (current, failures) = bundle.resolved_threads();
        for (d, e) in failures {
            tracing::warn!("decision on {} does not apply: {e}", d.key());
        }
        Self { dir, bundle, current }
    }

    pub fn load(dir: &Path) -> Result<Self, StoreError> {
        Ok(Self::new(load_bundle(dir)?, Some(dir.to_path_buf())))
    }

    pub fn threads(&self) -> &[ThreadTree] {
        &self.current
    }

    pub fn decisions(&self) -> &[TaggingDecision] {
        &self.bundle.decisions
    }

    fn item(&self, thread: &ThreadTree, id: CommentId, reasoning: bool) -> Option<ReviewItem> {
        let node = thread.node(id).ok().filter(|n| !n.is_system())?;
        let path = thread.path_to_root(id).ok()?;
        let thread_context = path[..path.len() - 1]
            .iter()
            .map(|n| ContextEntry { comment_id: n.id, author: n.author.clone(), text: n.text.clone() })
            .collect();
        let suggested_hardness = node
            .tags
            .iter()
            .filter_map(|t| t.hardness_coarse.map(|h| (t.attribute, coarse_to_fine(h))))
            .collect();
        Some(ReviewItem {
            thread_id: thread.id.clone(),
            comment_id: id,
            author: node.author.clone(),
            comment_text: node.text.clone(),
            thread_context,
            proposed_tags: node.tags.clone(),
            suggested_hardness,
            status: status_of(&node.tags),
            reasoning_trace: if reasoning { node.reasoning_trace.clone() } else { None },
        })
    }

    fn keys(&self) -> impl Iterator<Item = (CommentKey, &ThreadTree)> {
        let mut keys: Vec<(CommentKey, &ThreadTree)> = self
            .current
            .iter()
            .flat_map(|t| t.comments().map(move |n| (CommentKey::new(t.id.clone(), n.id), t)))
            .collect();
        keys.sort_by(|a, b| a.0.cmp(&b.0));
        keys.into_iter()
    }

    /// Items after `cursor` in comment-key order.
    pub fn queue(&self, filter: StatusFilter, limit: usize, after: Option<&CommentKey>, reasoning: bool) -> QueuePage {
        let mut items = Vec::new();
        let mut more = false;
        for (key, t) in self.keys().filter(|(k, _)| after.is_none_or(|c| k > c)) {
            let Some(item) = self.item(t, key.comment_id, reasoning) else { continue };
            if !filter.admits(item.status) {
                continue;
            }
            if items.len() == limit {
                more = true;
                break;
            }
            items.push(item);
        }
        let next_cursor = if more { items.last().map(|i| encode_cursor(&CommentKey::new(i.thread_id.clone(), i.comment_id))) } else { None };
        QueuePage { items, next_cursor }
    }

    pub fn progress(&self) -> Progress {
        let mut p = Progress::default();
        for (key, t) in self.keys() {
            let Ok(node) = t.node(key.comment_id) else { continue };
            p.total += 1;
            if status_of(&node.tags) == ItemStatus::Done {
                p.done += 1;
            }
            for tag in node.tags.iter().filter(|t| t.source == TagSource::Model) {
                let c = p.per_attribute.entry(tag.attribute).or_default();
                c.total += 1;
                if tag.verdict.is_none_or(|v| v == TagVerdict::Pending) {
                    c.pending += 1;
                } else {
                    c.done += 1;
                }
            }
        }
        p.pending = p.total - p.done;
        for d in &self.bundle.decisions {
            let e = p.labelers.entry(d.labeler.clone()).or_insert_with(|| Throughput {
                decisions: 0,
                first: d.timestamp,
                last: d.timestamp,
                per_hour: 0.0,
            });
            e.decisions += 1;
            e.first = e.first.min(d.timestamp);
            e.last = e.last.max(d.timestamp);
        }
        for t in p.labelers.values_mut() {
            let hours = (t.last - t.first).num_seconds() as f64 / 3600.0;
            t.per_hour = if hours > 0.0 { t.decisions as f64 / hours } else { t.decisions as f64 };
        }
        p.decisions = self.bundle.decisions.len();
        p
    }

    /// Validate, apply and log one decision.
    pub fn submit(&mut self, d: TaggingDecision, reasoning: bool) -> Result<(ReviewItem, bool), SubmitError> {
        d.validate().map_err(SubmitError::Invalid)?;
        let key = d.key();
        let thread_idx = self.current.iter().position(|t| t.id == d.thread_id).ok_or(SubmitError::NotFound(key.clone()))?;
        let node = self.current[thread_idx]
            .node(d.comment_id)
            .ok()
            .filter(|n| !n.is_system())
            .ok_or(SubmitError::NotFound(key.clone()))?;
        let clash = |o: &&TaggingDecision| o.key() == key && o.attribute == d.attribute && o.timestamp == d.timestamp;
        if let Some(prev) = self.bundle.decisions.iter().find(clash) {
            if *prev == d {
                let item = self.item(&self.current[thread_idx], d.comment_id, reasoning).expect("comment exists");
                return Ok((item, false));
            }
            return Err(SubmitError::Conflict(key));
        }
        let mut probe = node.tags.clone();
        apply_decision(&mut probe, &d).map_err(|e| SubmitError::Invalid(vec![FieldError::new("attribute", e.to_string())]))?;

        if let Some(dir) = &self.dir {
            append_jsonl(&dir.join(DECISIONS_FILE), &d).map_err(|e| SubmitError::Store(e.to_string()))?;
        }
        self.bundle.decisions.push(d.clone());
        let raw = self.bundle.threads[thread_idx].node(d.comment_id).expect("raw mirrors current").tags.clone();
        let all = by_comment(&self.bundle.decisions);
        let tags = resolve_comment(&raw, all.get(&key).map(Vec::as_slice).unwrap_or(&[]));
        self.current[thread_idx].node_mut(d.comment_id).expect("comment exists").tags = tags;
        let item = self.item(&self.current[thread_idx], d.comment_id, reasoning).expect("comment exists");
        Ok((item, true))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SubmitError {
    #[error("invalid decision")]
    Invalid(Vec<FieldError>),
    #[error("unknown comment {0}")]
    NotFound(CommentKey),
    #[error("a different decision for {0} with the same attribute and timestamp exists")]
    Conflict(CommentKey),
    #[error("could not persist decision: {0}")]
    Store(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatusFilter {
    #[default]
    Pending,
    Done,
    All,
}

impl StatusFilter {
    fn admits(self, s: ItemStatus) -> bool {
        match self {
            StatusFilter::All => true,
            StatusFilter::Pending => s == ItemStatus::Pending,
            StatusFilter::Done => s == ItemStatus::Done,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueuePage {
    pub items: Vec<ReviewItem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub next_cursor: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeProgress {
    pub total: usize,
    pub pending: usize,
    pub done: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Throughput {
    pub decisions: usize,
    pub first: chrono::DateTime<chrono::Utc>,
    pub last: chrono::DateTime<chrono::Utc>,
    /// Decisions per hour between the first and last one.
    pub per_hour: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Progress {
    pub total: usize,
    pub done: usize,
    pub pending: usize,
    pub decisions: usize,
    pub per_attribute: BTreeMap<Attribute, AttributeProgress>,
    pub labelers: BTreeMap<String, Throughput>,
}

pub fn encode_cursor(key: &CommentKey) -> String {
    format!("{}~{}", key.thread_id, key.comment_id)
}

pub fn decode_cursor(cursor: &str) -> Option<CommentKey> {
    let (t, c) = cursor.rsplit_once('~')?;
    Some(CommentKey::new(t, c.parse().ok()?))
}

#[derive(Clone)]
struct AppState {
    review: Arc<RwLock<Option<ReviewState>>>,
    config: Arc<ReviewConfig>,
}

#[derive(Debug, Deserialize)]
struct QueueParams {
    limit: Option<usize>,
    #[serde(default)]
    status: StatusFilter,
    cursor: Option<String>,
}

pub const DEFAULT_QUEUE_LIMIT: usize = 50;

fn error(status: StatusCode, message: impl Into<String>) -> Response {
    (status, Json(json!({"error": message.into()}))).into_response()
}

fn no_dataset() -> Response {
    error(StatusCode::CONFLICT, "no dataset loaded")
}

async fn queue(State(app): State<AppState>, Query(q): Query<QueueParams>) -> Response {
    let guard = app.review.read().await;
    let Some(state) = guard.as_ref() else { return no_dataset() };
    let after = match q.cursor.as_deref().map(decode_cursor) {
        Some(None) => return error(StatusCode::BAD_REQUEST, "malformed cursor"),
        Some(k) => k,
        None => None,
    };
    let limit = q.limit.unwrap_or(DEFAULT_QUEUE_LIMIT);
    Json(state.queue(q.status, limit, after.as_ref(), app.config.show_reasoning)).into_response()
}

async fn progress(State(app): State<AppState>) -> Response {
    match app.review.read().await.as_ref() {
        Some(s) => Json(s.progress()).into_response(),
        None => no_dataset(),
    }
}

/// Decode a decision body, turning serde failures into field errors.
/// Attribute aliases are accepted and normalized.
pub fn decode_decision(mut body: Value) -> Result<TaggingDecision, Vec<FieldError>> {
    let Some(obj) = body.as_object_mut() else {
        return Err(vec![FieldError::new("body", "expected a JSON object")]);
    };
    let mut errors = Vec::new();
    match obj.get("attribute").and_then(Value::as_str).map(|s| (s.to_string(), Attribute::normalize(s))) {
        Some((_, Some(a))) => {
            obj.insert("attribute".into(), json!(a.as_str()));
        }
        Some((raw, None)) => errors.push(FieldError::new("attribute", format!("unknown attribute `{raw}`"))),
        None => errors.push(FieldError::new("attribute", "required")),
    }
    for field in ["thread_id", "comment_id", "action", "labeler", "timestamp"] {
        if !obj.contains_key(field) {
            errors.push(FieldError::new(field, "required"));
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    serde_json::from_value(body).map_err(|e| {
        let msg = e.to_string();
        let field = ["action", "timestamp", "comment_id", "hardness_fine", "certainty", "edited_guesses", "thread_id", "labeler"]
            .into_iter()
            .find(|f| msg.contains(f))
            .unwrap_or("body");
        vec![FieldError::new(field, msg)]
    })
}

async fn decisions(State(app): State<AppState>, body: axum::body::Bytes) -> Response {
    let value: Value = match serde_json::from_slice(&body) {
        Ok(v) => v,
        Err(e) => return (StatusCode::UNPROCESSABLE_ENTITY, Json(json!({"errors": [FieldError::new("body", e.to_string())]}))).into_response(),
    };
    let decision = match decode_decision(value) {
        Ok(d) => d,
        Err(errors) => return (StatusCode::UNPROCESSABLE_ENTITY, Json(json!({"errors": errors}))).into_response(),
    };
    let mut guard = app.review.write().await;
    let Some(state) = guard.as_mut() else { return no_dataset() };
    match state.submit(decision, app.config.show_reasoning) {
        Ok((item, true)) => (StatusCode::OK, Json(item)).into_response(),
        Ok((item, false)) => (StatusCode::OK, [("x-duplicate", "true")], Json(item)).into_response(),
        Err(SubmitError::Invalid(errors)) => (StatusCode::UNPROCESSABLE_ENTITY, Json(json!({"errors": errors}))).into_response(),
        Err(e @ SubmitError::NotFound(_)) => error(StatusCode::NOT_FOUND, e.to_string()),
        Err(e @ SubmitError::Conflict(_)) => error(StatusCode::CONFLICT, e.to_string()),
        Err(e @ SubmitError::Store(_)) => error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
    }
}

async fn auth(State(app): State<AppState>, req: Request, next: Next) -> Response {
    if let Some(token) = &app.config.token {
        let ok = req
            .headers()
            .get(header::AUTHORIZATION)
            .and_then(|h| h.to_str().ok())
            .and_then(|h| h.strip_prefix("Bearer "))
            .is_some_and(|t| t == token);
        if !ok && req.method() != Method::OPTIONS {
            return error(StatusCode::UNAUTHORIZED, "missing or wrong bearer token");
        }
    }
    next.run(req).await
}

/// Router over `state` (None answers 409 until a dataset is present).
pub fn router(state: Option<ReviewState>, config: ReviewConfig) -> Router {
    let app = AppState { review: Arc::new(RwLock::new(state)), config: Arc::new(config) };
    let origins = if app.config.allowed_origins.is_empty() {
        AllowOrigin::any()
    } else {
        AllowOrigin::list(app.config.allowed_origins.iter().filter_map(|o| HeaderValue::from_str(o).ok()))
    };
    let cors = CorsLayer::new()
        .allow_origin(origins)
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::AUTHORIZATION, header::CONTENT_TYPE]);
    let api = Router::new()
        .route("/queue", get(queue))
        .route("/decisions", post(decisions))
        .route("/progress", get(progress))
        .route_layer(middleware::from_fn_with_state(app.clone(), auth))
        .with_state(app.clone());
    let router = match &app.config.ui_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    };
    router.layer(cors)
}

/// Serve until ctrl-c.
pub async fn serve(state: Option<ReviewState>, config: ReviewConfig, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("review service listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state, config))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
