use std::collections::BTreeMap;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::model::{in_scale, Attribute, AttributeTag, CommentId, CommentKey, TagSource, TagVerdict, ThreadTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionAction {
    Accept,
    Edit,
    Reject,
    Add,
}

/// One reviewer action on one attribute of one comment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggingDecision {
    pub thread_id: String,
    pub comment_id: CommentId,
    pub attribute: Attribute,
    pub action: DecisionAction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edited_guesses: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hardness_fine: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certainty: Option<u8>,
    pub labeler: String,
    pub timestamp: DateTime<Utc>,
}

/// A field-level validation failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl FieldError {
    pub fn new(field: &str, message: impl Into<String>) -> Self {
        Self { field: field.to_string(), message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecisionError {
    #[error("decision refers to unknown comment {0}")]
    UnknownComment(CommentKey),
    #[error("no model tag for {attribute} on comment {key}")]
    NoModelTag { key: CommentKey, attribute: Attribute },
    #[error("invalid decision: {0:?}")]
    Invalid(Vec<FieldError>),
}

impl TaggingDecision {
    pub fn key(&self) -> CommentKey {
        CommentKey::new(self.thread_id.clone(), self.comment_id)
    }

    /// Shape checks that do not need the dataset.
    pub fn validate(&self) -> Result<(), Vec<FieldError>> {
        let mut errors = Vec::new();
        let needs_hardness = self.action != DecisionAction::Reject;
        match self.hardness_fine {
            Some(h) if !in_scale(h) => errors.push(FieldError::new("hardness_fine", "must be between 1 and 5")),
            None if needs_hardness => errors.push(FieldError::new("hardness_fine", "required for accept, edit and add")),
            _ => {}
        }
        if let Some(c) = self.certainty {
            if !in_scale(c) {
                errors.push(FieldError::new("certainty", "must be between 1 and 5"));
            }
        } else if self.action == DecisionAction::Add {
            errors.push(FieldError::new("certainty", "required for add"));
        }
        if matches!(self.action, DecisionAction::Edit | DecisionAction::Add) {
            match &self.edited_guesses {
                None => errors.push(FieldError::new("edited_guesses", "required for edit and add")),
                Some(g) if g.is_empty() || g.len() > 3 => {
                    errors.push(FieldError::new("edited_guesses", "must hold 1 to 3 guesses"))
                }
                Some(g) if g.iter().any(|v| v.trim().is_empty()) => {
                    errors.push(FieldError::new("edited_guesses", "guesses must not be empty"))
                }
                _ => {}
            }
        }
        if self.labeler.trim().is_empty() {
            errors.push(FieldError::new("labeler", "must not be empty"));
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }
}

/// Reviewer-suggested fine hardness for a coarse model hardness.
pub fn coarse_to_fine(h: crate::model::CoarseHardness) -> u8 {
    use crate::model::CoarseHardness::*;
    match h {
        Direct => 1,
        Indirect => 3,
        Complicated => 4,
    }
}

/// Apply one decision to the tags of the comment it targets.
pub fn apply_decision(tags: &mut Vec<AttributeTag>, decision: &TaggingDecision) -> Result<(), DecisionError> {
    decision.validate().map_err(DecisionError::Invalid)?;
    let guesses = || {
        decision
            .edited_guesses
            .clone()
            .unwrap_or_default()
            .into_iter()
            .map(|g| g.trim().to_string())
            .collect::<Vec<_>>()
    };
    let model_tag = tags
        .iter()
        .position(|t| t.attribute == decision.attribute && t.source == TagSource::Model);
    let human_tag = tags
        .iter()
        .position(|t| t.attribute == decision.attribute && t.source == TagSource::Human);
    let missing = || DecisionError::NoModelTag { key: decision.key(), attribute: decision.attribute };
    match decision.action {
        DecisionAction::Accept | DecisionAction::Edit => {
            let tag = &mut tags[model_tag.ok_or_else(missing)?];
            tag.hardness_fine = decision.hardness_fine;
            if let Some(c) = decision.certainty {
                tag.certainty = c;
            }
            if decision.action == DecisionAction::Edit {
                tag.guesses = guesses();
                tag.verdict = Some(TagVerdict::Edited);
            } else {
                tag.verdict = Some(TagVerdict::Accepted);
            }
        }
        DecisionAction::Reject => {
            // A reject with no model tag retracts an earlier human addition.
            let idx = model_tag.or(human_tag).ok_or_else(missing)?;
            tags[idx].verdict = Some(TagVerdict::Rejected);
        }
        DecisionAction::Add => {
            let tag = AttributeTag::human(
                decision.attribute,
                guesses(),
                decision.certainty.unwrap_or(1),
                decision.hardness_fine.unwrap_or(1),
            );
            match human_tag {
                Some(i) => tags[i] = tag,
                None => tags.push(tag),
            }
        }
    }
    Ok(())
}

/// Apply a decision to the thread holding its comment.
pub fn apply_to_threads(threads: &mut [ThreadTree], decision: &TaggingDecision) -> Result<(), DecisionError> {
    let unknown = || DecisionError::UnknownComment(decision.key());
    let thread = threads
        .iter_mut()
        .find(|t| t.id == decision.thread_id)
        .ok_or_else(unknown)?;
    let node = thread.node_mut(decision.comment_id).map_err(|_| unknown())?;
    if node.is_system() {
        return Err(unknown());
    }
    apply_decision(&mut node.tags, decision)
}

/// Decisions in application order: by timestamp, log order breaking ties.
pub fn ordered(decisions: &[TaggingDecision]) -> Vec<&TaggingDecision> {
    let mut out: Vec<&TaggingDecision> = decisions.iter().collect();
    out.sort_by_key(|d| d.timestamp);
    out
}

/// Rebuild reviewed state from raw threads and a decision log. Decisions
/// that fail to apply are returned with their error and otherwise skipped.
pub fn replay_decisions(
    threads: &mut [ThreadTree],
    decisions: &[TaggingDecision],
) -> Vec<(TaggingDecision, DecisionError)> {
    let mut failures = Vec::new();
    for d in ordered(decisions) {
        if let Err(e) = apply_to_threads(threads, d) {
            failures.push((d.clone(), e));
        }
    }
    failures
}

/// Recompute one comment's tags from its raw tags and every decision on it.
pub fn resolve_comment(raw: &[AttributeTag], decisions: &[&TaggingDecision]) -> Vec<AttributeTag> {
    let mut tags = raw.to_vec();
    let mut sorted = decisions.to_vec();
    sorted.sort_by_key(|d| d.timestamp);
    for d in sorted {
        if let Err(e) = apply_decision(&mut tags, d) {
            tracing::warn!("skipping decision on {}: {e}", d.key());
        }
    }
    tags
}

/// Group a log by comment, keeping log order inside each group.
pub fn by_comment(decisions: &[TaggingDecision]) -> BTreeMap<CommentKey, Vec<&TaggingDecision>> {
    let mut map: BTreeMap<CommentKey, Vec<&TaggingDecision>> = BTreeMap::new();
    for d in decisions {
        map.entry(d.key()).or_default().push(d);
    }
    map
}
