use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::{DatasetBundle, Manifest};
use crate::model::{Attribute, AttributeTag, CoarseHardness, CommentDraft, Profile, ThreadTree, TreeLimits};
use crate::profiles::parse_profile_record;

/// Field names of the published comment records. Nested fields use dots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ImportMapping {
    /// Comment file inside the import directory; one JSON object per line.
    pub comments_file: String,
    pub id: String,
    pub thread_id: String,
    pub parent_id: String,
    pub author: String,
    pub text: String,
    /// Embedded author profile object.
    pub profile: String,
    /// Thread target attribute, if the records carry one.
    pub thread_attribute: String,
    /// List of model guess objects.
    pub model_guesses: String,
    /// Object keyed by attribute name holding the human review.
    pub human_reviews: String,
    pub guess_feature: String,
    pub guess_values: String,
    pub guess_hardness: String,
    pub guess_certainty: String,
    pub review_estimate: String,
    pub review_hardness: String,
    pub review_certainty: String,
    /// Renames applied to profile keys before parsing (published -> canonical).
    pub profile_fields: BTreeMap<String, String>,
}

impl Default for ImportMapping {
    fn default() -> Self {
        let s = |x: &str| x.to_string();
        Self {
            comments_file: s("synthpai.jsonl"),
            id: s("id"),
            thread_id: s("thread_id"),
            parent_id: s("parent_id"),
            author: s("author"),
            text: s("text"),
            profile: s("profile"),
            thread_attribute: s("feature"),
            model_guesses: s("guesses"),
            human_reviews: s("reviews.human"),
            guess_feature: s("feature"),
            guess_values: s("guesses"),
            guess_hardness: s("hardness"),
            guess_certainty: s("certainty"),
            review_estimate: s("estimate"),
            review_hardness: s("hardness"),
            review_certainty: s("certainty"),
            profile_fields: BTreeMap::from([(s("style"), s("writing_style"))]),
        }
    }
}

impl ImportMapping {
    pub fn from_toml(text: &str) -> Result<Self, ImportError> {
        toml::from_str(text).map_err(|e| ImportError::Config(e.to_string()))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ImportError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("mapping config: {0}")]
    Config(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("ImportError: unknown field layout, unmatched columns {unmatched:?}")]
    UnknownLayout { unmatched: Vec<String> },
    #[error("ImportError: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImportSummary {
    pub comments: usize,
    pub threads: usize,
    pub profiles: usize,
    pub human_labels: usize,
    pub model_labels: usize,
    pub skipped_profiles: usize,
}

fn get<'a>(v: &'a Value, path: &str) -> Option<&'a Value> {
    if path.is_empty() {
        return None;
    }
    path.split('.').try_fold(v, |cur, k| cur.get(k)).filter(|x| !x.is_null())
}

fn as_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn as_scale(v: Option<&Value>) -> Option<u8> {
    let n = match v? {
        Value::Number(n) => n.as_f64()?,
        Value::String(s) => s.trim().parse().ok()?,
        _ => return None,
    };
    (1.0..=5.0).contains(&n).then_some(n.round() as u8)
}

fn guesses_of(v: Option<&Value>) -> Vec<String> {
    match v {
        Some(Value::Array(a)) => a.iter().filter_map(as_text).collect(),
        Some(Value::String(s)) => s.split(';').map(|g| g.trim().to_string()).collect(),
        _ => Vec::new(),
    }
    .into_iter()
    .filter(|g| !g.is_empty())
    .take(3)
    .collect()
}

fn coarse_of(v: Option<&Value>) -> CoarseHardness {
    match v {
        Some(Value::String(s)) => CoarseHardness::parse(s).unwrap_or(CoarseHardness::Complicated),
        other => match as_scale(other) {
            Some(1) => CoarseHardness::Direct,
            Some(2 | 3) => CoarseHardness::Indirect,
            _ => CoarseHardness::Complicated,
        },
    }
}

struct Record {
    id: String,
    thread: String,
    parent: Option<String>,
    author: String,
    text: String,
    tags: Vec<AttributeTag>,
    attribute: Option<Attribute>,
}

fn tags_of(v: &Value, m: &ImportMapping) -> Vec<AttributeTag> {
    let mut tags = Vec::new();
    if let Some(Value::Array(gs)) = get(v, &m.model_guesses) {
        for g in gs {
            let Some(attr) = get(g, &m.guess_feature).and_then(as_text).and_then(|f| Attribute::normalize(&f)) else {
                continue;
            };
            let guesses = guesses_of(get(g, &m.guess_values));
            if guesses.is_empty() {
                continue;
            }
            let certainty = as_scale(get(g, &m.guess_certainty)).unwrap_or(1);
            tags.push(AttributeTag::model(attr, guesses, certainty, coarse_of(get(g, &m.guess_hardness))));
        }
    }
    if let Some(Value::Object(reviews)) = get(v, &m.human_reviews) {
        for (name, r) in reviews {
            let Some(attr) = Attribute::normalize(name) else { continue };
            let guesses = guesses_of(get(r, &m.review_estimate));
            // Hardness 0 or an empty estimate marks "not inferable".
            let (false, Some(h)) = (guesses.is_empty(), as_scale(get(r, &m.review_hardness))) else { continue };
            let certainty = as_scale(get(r, &m.review_certainty)).unwrap_or(1);
            tags.push(AttributeTag::human(attr, guesses, certainty, h));
        }
    }
    tags
}

/// Import the published dataset from `dir` using `mapping`.
pub fn import_published(dir: &Path, mapping: &ImportMapping) -> Result<(DatasetBundle, ImportSummary), ImportError> {
    let path = dir.join(&mapping.comments_file);
    let text = fs::read_to_string(&path).map_err(|source| ImportError::Io { path: path.clone(), source })?;
    let required = [&mapping.id, &mapping.thread_id, &mapping.author, &mapping.text];
    let mut records = Vec::new();
    let mut profiles: BTreeMap<String, Profile> = BTreeMap::new();
    let mut skipped_profiles = BTreeSet::new();
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let v: Value =
            serde_json::from_str(line).map_err(|e| ImportError::Parse { line: i + 1, message: e.to_string() })?;
        let unmatched: Vec<String> = required.iter().filter(|f| get(&v, f).is_none()).map(|f| f.to_string()).collect();
        if !unmatched.is_empty() {
            return Err(ImportError::UnknownLayout { unmatched });
        }
        let author = get(&v, &mapping.author).and_then(as_text).unwrap_or_default();
        if !profiles.contains_key(&author) {
            if let Some(Value::Object(p)) = get(&v, &mapping.profile) {
                let mut renamed = Map::new();
                for (k, val) in p {
                    let key = mapping.profile_fields.get(k).cloned().unwrap_or_else(|| k.clone());
                    renamed.insert(key, val.clone());
                }
                renamed.insert("username".into(), Value::String(author.clone()));
                match parse_profile_record(&Value::Object(renamed)) {
                    Some(p) => {
                        profiles.insert(author.clone(), p);
                    }
                    None => {
                        skipped_profiles.insert(author.clone());
                    }
                }
            }
        }
        records.push(Record {
            id: get(&v, &mapping.id).and_then(as_text).unwrap_or_default(),
            thread: get(&v, &mapping.thread_id).and_then(as_text).unwrap_or_default(),
            parent: get(&v, &mapping.parent_id).and_then(as_text),
            author,
            text: get(&v, &mapping.text).and_then(as_text).unwrap_or_default(),
            tags: tags_of(&v, mapping),
            attribute: get(&v, &mapping.thread_attribute).and_then(as_text).and_then(|a| Attribute::normalize(&a)),
        });
    }
    if records.is_empty() {
        return Err(ImportError::Invalid(format!("{} holds no records", path.display())));
    }
    for a in &skipped_profiles {
        tracing::warn!(author = %a, "profile record did not parse");
    }

    let mut by_thread: BTreeMap<&str, Vec<&Record>> = BTreeMap::new();
    for r in &records {
        by_thread.entry(r.thread.as_str()).or_default().push(r);
    }
    let unbounded = TreeLimits { max_depth: usize::MAX, max_children: usize::MAX };
    let mut threads = Vec::new();
    for (tid, recs) in by_thread {
        let ids: BTreeSet<&str> = recs.iter().map(|r| r.id.as_str()).collect();
        let roots: Vec<&&Record> =
            recs.iter().filter(|r| r.parent.as_deref().is_none_or(|p| !ids.contains(p))).collect();
        let [root] = roots.as_slice() else {
            return Err(ImportError::Invalid(format!("thread {tid} has {} roots", roots.len())));
        };
        let attribute = root.attribute.or_else(|| root.tags.first().map(|t| t.attribute)).unwrap_or(Attribute::Age);
        let (question, description) = match root.text.split_once('\n') {
            Some((q, d)) => (q.trim().to_string(), d.trim().to_string()),
            None => (root.text.trim().to_string(), String::new()),
        };
        let mut tree = ThreadTree::new(tid, attribute, question, description);
        {
            let node = &mut tree.nodes[0];
            node.author = root.author.clone();
            node.text = root.text.clone();
            node.tags = root.tags.clone();
            node.external_id = Some(root.id.clone());
        }
        tree.participants.push(root.author.clone());
        let mut children: BTreeMap<&str, Vec<&Record>> = BTreeMap::new();
        for r in &recs {
            if let Some(p) = r.parent.as_deref().filter(|p| ids.contains(p)) {
                children.entry(p).or_default().push(r);
            }
        }
        let mut queue = std::collections::VecDeque::from([(root.id.as_str(), 0u64, 0u32)]);
        while let Some((ext, node_id, depth)) = queue.pop_front() {
            for c in children.get(ext).map(Vec::as_slice).unwrap_or(&[]) {
                let draft = CommentDraft {
                    author: c.author.clone(),
                    text: c.text.clone(),
                    round: depth + 1,
                    reasoning_trace: None,
                    tags: c.tags.clone(),
                };
                let id = tree
                    .insert_comment(node_id, draft, &unbounded)
                    .map_err(|e| ImportError::Invalid(format!("thread {tid}: {e}")))?;
                tree.nodes[id as usize].external_id = Some(c.id.clone());
                queue.push_back((c.id.as_str(), id, depth + 1));
            }
        }
        if tree.len() != recs.len() {
            return Err(ImportError::Invalid(format!("thread {tid}: {} comments unreachable from the root", recs.len() - tree.len())));
        }
        threads.push(tree);
    }

    let mut bundle = DatasetBundle::new(Manifest::new(0, "published", chrono::DateTime::UNIX_EPOCH));
    bundle.profiles = profiles.into_values().collect();
    bundle.threads = threads;
    let tags = || bundle.threads.iter().flat_map(|t| t.comments()).flat_map(|n| n.tags.iter());
    let summary = ImportSummary {
        comments: bundle.comment_count(),
        threads: bundle.threads.len(),
        profiles: bundle.profiles.len(),
        human_labels: tags().filter(|t| t.is_human_verified()).count(),
        model_labels: tags().filter(|t| !t.is_human_verified()).count(),
        skipped_profiles: skipped_profiles.len(),
    };
    bundle.validate().map_err(|e| ImportError::Invalid(e.to_string()))?;
    Ok((bundle, summary))
}

#[cfg(test)]
mod tests {
    use super::*;

    const PROFILE: &str = r#"{"age": 30, "sex": "female", "city_country": "Paris, France", "birth_city_country": "Lyon, France", "education": "Masters in Law", "occupation": "lawyer", "income": "70 thousand euros", "income_level": "high", "relationship_status": "single", "style": "terse"}"#;

    fn line(id: &str, parent: Option<&str>, author: &str, extra: &str) -> String {
        let parent = parent.map_or("null".to_string(), |p| format!("\"{p}\""));
        format!(
            r#"{{"id": "{id}", "thread_id": "T1", "parent_id": {parent}, "author": "{author}", "text": "text {id}", "profile": {PROFILE}{extra}}}"#
        )
    }

    #[test]
    fn builds_threads_from_records() {
        let dir = tempfile::tempdir().unwrap();
        let rows = [
            line("a", None, "AaBb", r#", "feature": "age""#),
            line("b", Some("a"), "CcDd", r#", "guesses": [{"feature": "city_country", "guesses": ["Paris, France"], "hardness": "direct", "certainty": 4}], "reviews": {"human": {"city_country": {"estimate": "paris, france", "hardness": 1, "certainty": 5}, "age": {"estimate": "", "hardness": 0, "certainty": 0}}}"#),
            line("c", Some("b"), "AaBb", ""),
        ];
        fs::write(dir.path().join("synthpai.jsonl"), rows.join("\n")).unwrap();
        let (b, s) = import_published(dir.path(), &ImportMapping::default()).unwrap();
        assert_eq!((s.comments, s.threads, s.profiles, s.human_labels, s.model_labels), (3, 1, 2, 1, 1));
        assert_eq!(b.threads[0].target_attribute, Attribute::Age);
        assert_eq!(b.threads[0].nodes[2].external_id.as_deref(), Some("c"));
        assert_eq!(b.profiles[0].writing_style, "terse");
    }

    #[test]
    fn truncated_file_fails() {
        let dir = tempfile::tempdir().unwrap();
        let full = line("a", None, "AaBb", "");
        fs::write(dir.path().join("synthpai.jsonl"), &full[..full.len() / 2]).unwrap();
        assert!(matches!(import_published(dir.path(), &ImportMapping::default()), Err(ImportError::Parse { line: 1, .. })));
    }

    #[test]
    fn unknown_layout_lists_columns() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("synthpai.jsonl"), r#"{"uid": 1, "body": "x"}"#).unwrap();
        match import_published(dir.path(), &ImportMapping::default()) {
            Err(ImportError::UnknownLayout { unmatched }) => assert_eq!(unmatched, ["id", "thread_id", "author", "text"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mapping_from_toml_overrides_defaults() {
        let m = ImportMapping::from_toml("comments_file = \"c.jsonl\"\nauthor = \"username\"\n").unwrap();
        assert_eq!(m.comments_file, "c.jsonl");
        assert_eq!(m.author, "username");
        assert_eq!(m.id, "id");
    }
}
