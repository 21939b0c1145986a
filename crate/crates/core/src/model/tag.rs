use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Attribute, CommentId};

/// The model-facing three-level hardness scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoarseHardness {
    Direct,
    Indirect,
    Complicated,
}

impl CoarseHardness {
    pub fn parse(s: &str) -> Option<CoarseHardness> {
        match s.trim().trim_matches(['\'', '"', '.', ',']).to_lowercase().as_str() {
            "direct" => Some(CoarseHardness::Direct),
            "indirect" => Some(CoarseHardness::Indirect),
            "complicated" => Some(CoarseHardness::Complicated),
            _ => None,
        }
    }

    pub const fn as_str(self) -> &'static str {
        match self {
            CoarseHardness::Direct => "direct",
            CoarseHardness::Indirect => "indirect",
            CoarseHardness::Complicated => "complicated",
        }
    }
}

impl fmt::Display for CoarseHardness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TagSource {
    Model,
    Human,
}

/// Review state of a tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TagVerdict {
    Pending,
    Accepted,
    Edited,
    Rejected,
}

/// One attribute guess attached to a comment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeTag {
    pub attribute: Attribute,
    /// First entry is the most confident guess.
    pub guesses: Vec<String>,
    pub certainty: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hardness_coarse: Option<CoarseHardness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hardness_fine: Option<u8>,
    pub source: TagSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<TagVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TagInvalid {
    #[error("{0}: expected 1 to 3 guesses, got {1}")]
    GuessCount(Attribute, usize),
    #[error("{0}: certainty {1} outside [1, 5]")]
    Certainty(Attribute, u8),
    #[error("{0}: hardness {1} outside [1, 5]")]
    Hardness(Attribute, u8),
    #[error("{0}: human tag without fine hardness")]
    MissingHumanHardness(Attribute),
}

pub(crate) fn in_scale(v: u8) -> bool {
    (1..=5).contains(&v)
}

impl AttributeTag {
    pub fn model(
        attribute: Attribute,
        guesses: Vec<String>,
        certainty: u8,
        hardness: CoarseHardness,
    ) -> Self {
        Self {
            attribute,
            guesses,
            certainty,
            hardness_coarse: Some(hardness),
            hardness_fine: None,
            source: TagSource::Model,
            verdict: Some(TagVerdict::Pending),
        }
    }

    pub fn human(attribute: Attribute, guesses: Vec<String>, certainty: u8, hardness: u8) -> Self {
        Self {
            attribute,
            guesses,
            certainty,
            hardness_coarse: None,
            hardness_fine: Some(hardness),
            source: TagSource::Human,
            verdict: None,
        }
    }

    pub fn validate(&self) -> Result<(), TagInvalid> {
        if self.guesses.is_empty() || self.guesses.len() > 3 {
            return Err(TagInvalid::GuessCount(self.attribute, self.guesses.len()));
        }
        if !in_scale(self.certainty) {
            return Err(TagInvalid::Certainty(self.attribute, self.certainty));
        }
        match (self.source, self.hardness_fine) {
            (_, Some(h)) if !in_scale(h) => return Err(TagInvalid::Hardness(self.attribute, h)),
            (TagSource::Human, None) => {
                return Err(TagInvalid::MissingHumanHardness(self.attribute))
            }
            _ => {}
        }
        Ok(())
    }

    /// Whether a human has vouched for this tag and it still stands.
    pub fn is_human_verified(&self) -> bool {
        match self.source {
            TagSource::Human => self.verdict != Some(TagVerdict::Rejected),
            TagSource::Model => matches!(
                self.verdict,
                Some(TagVerdict::Accepted) | Some(TagVerdict::Edited)
            ),
        }
    }

    pub fn is_rejected(&self) -> bool {
        self.verdict == Some(TagVerdict::Rejected)
    }

    pub fn top_guess(&self) -> &str {
        self.guesses.first().map(String::as_str).unwrap_or("")
    }
}

/// Globally unique address of a comment: its thread plus the per-thread ordinal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CommentKey {
    pub thread_id: String,
    pub comment_id: CommentId,
}

impl CommentKey {
    pub fn new(thread_id: impl Into<String>, comment_id: CommentId) -> Self {
        Self {
            thread_id: thread_id.into(),
            comment_id,
        }
    }
}

impl fmt::Display for CommentKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.thread_id, self.comment_id)
    }
}

/// One aggregated profile-level attribute label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileLabel {
    pub value: String,
    pub hardness: u8,
    pub certainty: u8,
    pub supporting_comments: Vec<CommentKey>,
}

/// Aggregated labels for one profile.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ProfileLabelSet {
    pub username: String,
    pub labels: BTreeMap<Attribute, ProfileLabel>,
}

impl ProfileLabelSet {
    pub fn new(username: impl Into<String>) -> Self {
        Self {
            username: username.into(),
            labels: BTreeMap::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let t = AttributeTag::model(Attribute::Sex, vec!["Male".into(); 3], 4, CoarseHardness::Indirect);
        assert!(t.validate().is_ok());
        let mut bad = t.clone();
        bad.guesses = vec!["a".into(); 4];
        assert!(bad.validate().is_err());
        bad = t.clone();
        bad.certainty = 6;
        assert!(bad.validate().is_err());
        let mut h = AttributeTag::human(Attribute::Age, vec!["25".into()], 2, 3);
        assert!(h.validate().is_ok());
        h.hardness_fine = None;
        assert_eq!(h.validate(), Err(TagInvalid::MissingHumanHardness(Attribute::Age)));
    }

    #[test]
    fn verification_state() {
        let mut t = AttributeTag::model(Attribute::Sex, vec!["Male".into()], 4, CoarseHardness::Direct);
        assert!(!t.is_human_verified());
        t.verdict = Some(TagVerdict::Accepted);
        assert!(t.is_human_verified());
        t.verdict = Some(TagVerdict::Rejected);
        assert!(!t.is_human_verified());
        assert!(AttributeTag::human(Attribute::Age, vec!["1".into()], 1, 1).is_human_verified());
    }
}
