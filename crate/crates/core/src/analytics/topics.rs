use std::collections::{BTreeMap, BTreeSet};
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::gateway::prompts::{self, SUBREDDIT_SYSTEM};
use crate::gateway::{derive_seed, slots, Gateway};
use crate::model::{Attribute, ThreadTree};

static SUB_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?:^|[\s,;])/?r/([A-Za-z0-9_]+)").unwrap());

/// Read "/r/a, /r/b, /r/c". Anything other than three names is malformed.
pub fn parse_subreddits(answer: &str) -> Option<[String; 3]> {
    let names: Vec<String> = SUB_RE.captures_iter(answer).map(|c| c[1].to_lowercase()).collect();
    <[String; 3]>::try_from(names).ok()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopicClassification {
    pub per_thread: BTreeMap<String, [String; 3]>,
    pub unique_subreddits: usize,
    /// Subreddit counts per thread target attribute.
    pub per_attribute: BTreeMap<Attribute, BTreeMap<String, usize>>,
    /// Threads whose answer could not be read or whose request failed.
    pub skipped: Vec<String>,
}

pub async fn classify_thread_topics(threads: &[ThreadTree], gateway: &Gateway, seed: u64) -> TopicClassification {
    let answers = futures::future::join_all(threads.iter().map(|t| async move {
        let user = prompts::template(prompts::SUBREDDIT_CLASSIFICATION)
            .render(&slots([("title", t.topic_question.as_str()), ("text", t.topic_description.as_str())]))
            .expect("subreddit template slots are fixed");
        let req = gateway.request(prompts::SUBREDDIT_CLASSIFICATION, SUBREDDIT_SYSTEM, user, derive_seed(seed, &t.id));
        gateway.complete(&req).await
    }))
    .await;
    let mut out = TopicClassification::default();
    let mut unique = BTreeSet::new();
    for (t, answer) in threads.iter().zip(answers) {
        let parsed = match answer {
            Ok(a) => parse_subreddits(&a).ok_or(a),
            Err(e) => Err(e.to_string()),
        };
        match parsed {
            Ok(subs) => {
                let counts = out.per_attribute.entry(t.target_attribute).or_default();
                for s in &subs {
                    unique.insert(s.clone());
                    *counts.entry(s.clone()).or_default() += 1;
                }
                out.per_thread.insert(t.id.clone(), subs);
            }
            Err(raw) => {
                tracing::warn!(thread = %t.id, "skipping thread, unreadable subreddit answer: {raw}");
                out.skipped.push(t.id.clone());
            }
        }
    }
    out.unique_subreddits = unique.len();
    out
}
