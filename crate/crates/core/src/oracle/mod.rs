//! The comment-level attribute oracle: model tagging, reviewer decisions and
//! profile-level aggregation.

mod aggregate;
mod decision;
mod parse;

use async_trait::async_trait;

pub use aggregate::{aggregate_all, aggregate_profile_labels, sanitize_against_ground_truth, LabelSource};
pub use decision::{
    apply_decision, apply_to_threads, by_comment, coarse_to_fine, ordered, replay_decisions, resolve_comment,
    DecisionAction, DecisionError, FieldError, TaggingDecision,
};
pub use parse::{parse_tagging, ParsedTags, TagParseError};

use crate::engine::CommentOracle;
use crate::gateway::prompts::{self, FEATURE_FORMAT};
use crate::gateway::{derive_seed, slots, Gateway, GatewayError};
use crate::model::{AttributeTag, ThreadTree};

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("cannot tag an empty comment")]
    EmptyComment,
    #[error(transparent)]
    Parse(#[from] TagParseError),
    #[error(transparent)]
    Gateway(#[from] GatewayError),
}

/// Ask the model which attributes `comment` gives away.
pub async fn tag_comment(comment: &str, gateway: &Gateway, seed: u64) -> Result<Vec<AttributeTag>, OracleError> {
    if comment.trim().is_empty() {
        return Err(OracleError::EmptyComment);
    }
    let user = prompts::template(prompts::TAGGING)
        .render(&slots([
            ("examples", prompts::tagging_examples()),
            ("feature_format", FEATURE_FORMAT),
            ("comment", comment),
        ]))
        .expect("tagging template slots");
    let request = gateway.request(prompts::TAGGING, "", user, seed);
    let text = gateway.complete(&request).await?;
    Ok(parse_tagging(&text)?.tags)
}

/// [`CommentOracle`] backed by a model through the gateway.
#[derive(Debug, Clone)]
pub struct ModelOracle {
    gateway: Gateway,
}

impl ModelOracle {
    pub fn new(gateway: Gateway) -> Self {
        Self { gateway }
    }
}

#[async_trait]
impl CommentOracle for ModelOracle {
    async fn tag(&self, text: &str, seed: u64) -> Result<Vec<AttributeTag>, String> {
        tag_comment(text, &self.gateway, seed).await.map_err(|e| e.to_string())
    }
}

/// Outcome of a batch tagging pass.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BatchTagStats {
    pub tagged: usize,
    pub failed: usize,
}

/// Tag every comment that has no tags yet, concurrently up to the gateway
/// cap. Failures leave the comment untagged.
pub async fn tag_threads(threads: &mut [ThreadTree], gateway: &Gateway, seed: u64) -> BatchTagStats {
    let mut jobs = Vec::new();
    for (ti, thread) in threads.iter().enumerate() {
        for node in thread.comments().filter(|n| n.tags.is_empty()) {
            let s = derive_seed(seed, &format!("tag/{}/{}", thread.id, node.id));
            let text = node.text.clone();
            let id = node.id;
            jobs.push(async move { (ti, id, tag_comment(&text, gateway, s).await) });
        }
    }
    let mut stats = BatchTagStats::default();
    for (ti, id, outcome) in futures::future::join_all(jobs).await {
        match outcome {
            Ok(tags) => {
                if let Ok(node) = threads[ti].node_mut(id) {
                    node.tags = tags;
                }
                stats.tagged += 1;
            }
            Err(e) => {
                tracing::warn!(thread = %threads[ti].id, comment = id, "tagging failed: {e}");
                stats.failed += 1;
            }
        }
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Attribute;

    #[tokio::test]
    async fn mock_tags_obvious_comment() {
        let tags = tag_comment("as a nurse, i see this a lot", &Gateway::mock(), 1).await.unwrap();
        assert!(tags.iter().any(|t| t.attribute == Attribute::Occupation && t.top_guess() == "nurse"));
    }

    #[tokio::test]
    async fn empty_comment_rejected() {
        assert!(matches!(tag_comment("  ", &Gateway::mock(), 1).await, Err(OracleError::EmptyComment)));
    }
}
