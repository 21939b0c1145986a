use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::coarse_to_fine;
use crate::model::{Attribute, AttributeTag, CommentKey, Profile, ProfileLabel, ProfileLabelSet, TagSource, ThreadTree};

/// Which tags feed an aggregation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelSource {
    /// Human-added tags and model tags a human accepted or edited.
    #[default]
    Human,
    /// Every model tag that was not rejected, as the model proposed it.
    Model,
}

fn contributes(tag: &AttributeTag, source: LabelSource) -> bool {
    match source {
        LabelSource::Human => tag.is_human_verified() && tag.hardness_fine.is_some(),
        LabelSource::Model => tag.source == TagSource::Model && !tag.is_rejected(),
    }
}

fn hardness(tag: &AttributeTag, source: LabelSource) -> u8 {
    match source {
        LabelSource::Human => tag.hardness_fine.unwrap_or(5),
        LabelSource::Model => tag.hardness_coarse.map(coarse_to_fine).unwrap_or(5),
    }
}

#[derive(Default)]
struct Vote {
    display: String,
    count: usize,
    certainty: u8,
    first: Option<CommentKey>,
}

/// Combine the comment-level tags on `username`'s comments into
/// profile-level labels: hardness is the minimum, certainty the maximum and
/// the value the most frequent first guess (ties to higher certainty, then
/// the earlier comment).
pub fn aggregate_profile_labels(threads: &[ThreadTree], username: &str, source: LabelSource) -> ProfileLabelSet {
    let mut supports: BTreeMap<Attribute, Vec<(CommentKey, &AttributeTag)>> = BTreeMap::new();
    for thread in threads {
        for node in thread.comments().filter(|n| n.author == username) {
            for tag in node.tags.iter().filter(|t| contributes(t, source) && !t.top_guess().is_empty()) {
                supports
                    .entry(tag.attribute)
                    .or_default()
                    .push((CommentKey::new(thread.id.clone(), node.id), tag));
            }
        }
    }
    let mut set = ProfileLabelSet::new(username);
    for (attr, mut items) in supports {
        items.sort_by(|a, b| a.0.cmp(&b.0));
        let mut votes: BTreeMap<String, Vote> = BTreeMap::new();
        for (key, tag) in &items {
            let v = votes.entry(tag.top_guess().trim().to_lowercase()).or_default();
            if v.first.is_none() {
                v.display = tag.top_guess().trim().to_string();
                v.first = Some(key.clone());
            }
            v.count += 1;
            v.certainty = v.certainty.max(tag.certainty);
        }
        let winner = votes
            .into_values()
            .max_by(|a, b| {
                a.count
                    .cmp(&b.count)
                    .then(a.certainty.cmp(&b.certainty))
                    .then(b.first.cmp(&a.first))
            })
            .expect("at least one support");
        let mut supporting: Vec<CommentKey> = items.iter().map(|(k, _)| k.clone()).collect();
        supporting.dedup();
        set.labels.insert(
            attr,
            ProfileLabel {
                value: winner.display,
                hardness: items.iter().map(|(_, t)| hardness(t, source)).min().unwrap_or(5),
                certainty: items.iter().map(|(_, t)| t.certainty).max().unwrap_or(1),
                supporting_comments: supporting,
            },
        );
    }
    set
}

/// Aggregate every profile, in pool order.
pub fn aggregate_all(threads: &[ThreadTree], profiles: &[Profile], source: LabelSource) -> Vec<ProfileLabelSet> {
    profiles
        .iter()
        .map(|p| aggregate_profile_labels(threads, &p.username, source))
        .collect()
}

/// Drop labels whose value disagrees with the profile's ground truth; kept
/// labels carry the ground-truth value.
pub fn sanitize_against_ground_truth<F>(labels: &ProfileLabelSet, profile: &Profile, equivalent: F) -> ProfileLabelSet
where
    F: Fn(Attribute, &str, &str) -> bool,
{
    let mut out = ProfileLabelSet::new(labels.username.clone());
    for (&attr, label) in &labels.labels {
        let truth = profile.attribute_value(attr);
        if equivalent(attr, &truth, &label.value) {
            out.labels.insert(attr, ProfileLabel { value: truth, ..label.clone() });
        }
    }
    out
}
