//! Descriptive statistics over threads and labels.

mod study;
mod topics;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use study::{human_study_metrics, Judgment, JudgmentRecord, StudyConfusion, StudyMetrics};
pub use topics::{classify_thread_topics, parse_subreddits, TopicClassification};

use crate::eval::equivalent;
use crate::model::{Attribute, CommentKey, Profile, ProfileLabelSet, TagSource, ThreadTree};

/// Mean, sample standard deviation (n - 1) and exact median.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub std: f64,
    pub median: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self::default();
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let median = if n % 2 == 1 { sorted[n / 2] } else { (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0 };
        Self { n, mean, std, median }
    }

    /// Population standard deviation, for comparison with sources that use it.
    pub fn population_std(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.std * (((self.n.max(1) - 1) as f64) / self.n as f64).sqrt()
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ThreadStats {
    pub threads: usize,
    pub comments: usize,
    /// Characters per comment.
    pub comment_length: Summary,
    pub comments_per_thread: Summary,
    pub profiles_per_thread: Summary,
    pub comments_per_profile: Summary,
}

/// Counts profile-authored nodes; a generated topic root (SYSTEM) is not a
/// comment, an imported root written by a profile is.
pub fn thread_stats(threads: &[ThreadTree]) -> ThreadStats {
    let mut lengths = Vec::new();
    let mut per_thread = Vec::new();
    let mut profiles_per_thread = Vec::new();
    let mut per_profile: BTreeMap<&str, usize> = BTreeMap::new();
    for t in threads {
        let mut authors = BTreeSet::new();
        let mut count = 0usize;
        for n in t.comments() {
            lengths.push(n.text.chars().count() as f64);
            authors.insert(n.author.as_str());
            *per_profile.entry(n.author.as_str()).or_default() += 1;
            count += 1;
        }
        per_thread.push(count as f64);
        profiles_per_thread.push(authors.len() as f64);
    }
    let per_profile: Vec<f64> = per_profile.values().map(|c| *c as f64).collect();
    ThreadStats {
        threads: threads.len(),
        comments: lengths.len(),
        comment_length: Summary::of(&lengths),
        comments_per_thread: Summary::of(&per_thread),
        profiles_per_thread: Summary::of(&profiles_per_thread),
        comments_per_profile: Summary::of(&per_profile),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HardnessLevel {
    Profile,
    Comment,
}

/// Attribute x hardness (1..=5) counts. Always holds all eight rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardnessTable {
    pub rows: BTreeMap<Attribute, [usize; 5]>,
}

impl Default for HardnessTable {
    fn default() -> Self {
        Self { rows: Attribute::ALL.iter().map(|a| (*a, [0; 5])).collect() }
    }
}

impl HardnessTable {
    fn add(&mut self, attr: Attribute, hardness: u8) {
        if (1..=5).contains(&hardness) {
            self.rows.entry(attr).or_default()[usize::from(hardness - 1)] += 1;
        }
    }

    pub fn total(&self) -> usize {
        self.rows.values().flatten().sum()
    }

    pub fn row(&self, attr: Attribute) -> [usize; 5] {
        self.rows.get(&attr).copied().unwrap_or_default()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let _ = w.write_record(["attribute", "1", "2", "3", "4", "5"]);
        for (a, r) in &self.rows {
            let mut rec = vec![a.display_name().to_string()];
            rec.extend(r.iter().map(usize::to_string));
            let _ = w.write_record(&rec);
        }
        String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{:<20}{:>7}{:>7}{:>7}{:>7}{:>7}\n", "attribute", 1, 2, 3, 4, 5);
        for (a, r) in &self.rows {
            let _ = write!(s, "{:<20}", a.display_name());
            for c in r {
                let _ = write!(s, "{c:>7}");
            }
            s.push('\n');
        }
        s
    }
}

/// Hardness counts of aggregated profile labels.
pub fn profile_hardness(labels: &[ProfileLabelSet]) -> HardnessTable {
    let mut t = HardnessTable::default();
    for set in labels {
        for (a, l) in &set.labels {
            t.add(*a, l.hardness);
        }
    }
    t
}

/// Hardness counts of human-verified comment tags.
pub fn comment_hardness(threads: &[ThreadTree]) -> HardnessTable {
    let mut t = HardnessTable::default();
    for tag in threads.iter().flat_map(|t| t.comments()).flat_map(|n| n.tags.iter()) {
        if let (true, Some(h)) = (tag.is_human_verified(), tag.hardness_fine) {
            t.add(tag.attribute, h);
        }
    }
    t
}

pub fn hardness_distribution(level: HardnessLevel, threads: &[ThreadTree], labels: &[ProfileLabelSet]) -> HardnessTable {
    match level {
        HardnessLevel::Profile => profile_hardness(labels),
        HardnessLevel::Comment => comment_hardness(threads),
    }
}

/// Model-vs-human presence of labels over (comment, attribute) pairs. Humans
/// are the reference: a positive is a pair a human labeled.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementMatrix {
    /// Neither labeled.
    pub true_negative: usize,
    /// Human labeled, model did not.
    pub false_negative: usize,
    /// Model labeled, human did not.
    pub false_positive: usize,
    pub true_positive: usize,
}

impl AgreementMatrix {
    pub fn from_sets(
        universe: usize,
        model: &BTreeSet<(CommentKey, Attribute)>,
        human: &BTreeSet<(CommentKey, Attribute)>,
    ) -> Self {
        let tp = model.intersection(human).count();
        let fp = model.len() - tp;
        let fn_ = human.len() - tp;
        Self {
            true_positive: tp,
            false_positive: fp,
            false_negative: fn_,
            true_negative: universe.saturating_sub(tp + fp + fn_),
        }
    }

    pub fn total(&self) -> usize {
        self.true_negative + self.false_negative + self.false_positive + self.true_positive
    }

    pub fn fnr(&self) -> f64 {
        ratio(self.false_negative, self.false_negative + self.true_positive)
    }

    pub fn fpr(&self) -> f64 {
        ratio(self.false_positive, self.false_positive + self.true_negative)
    }

    pub fn to_text(&self) -> String {
        format!(
            "{:<16}{:>12}{:>12}\n{:<16}{:>12}{:>12}\n{:<16}{:>12}{:>12}\nFNR {:.3}  FPR {:.3}\n",
            "", "human: no", "human: yes",
            "model: no", self.true_negative, self.false_negative,
            "model: yes", self.false_positive, self.true_positive,
            self.fnr(),
            self.fpr()
        )
    }
}

pub(crate) fn ratio(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}

/// Agreement over every profile-authored comment times the eight attributes.
/// The model side counts every tag the model proposed, reviewed or not; the
/// human side counts tags that are human-verified.
pub fn tag_agreement(threads: &[ThreadTree]) -> AgreementMatrix {
    let mut model = BTreeSet::new();
    let mut human = BTreeSet::new();
    let mut comments = 0;
    for t in threads {
        for n in t.comments() {
            comments += 1;
            let key = CommentKey::new(t.id.clone(), n.id);
            for tag in &n.tags {
                if tag.source == TagSource::Model {
                    model.insert((key.clone(), tag.attribute));
                }
                if tag.is_human_verified() {
                    human.insert((key.clone(), tag.attribute));
                }
            }
        }
    }
    AgreementMatrix::from_sets(comments * Attribute::ALL.len(), &model, &human)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Rate {
    pub agree: usize,
    pub total: usize,
}

impl Rate {
    pub fn value(&self) -> f64 {
        ratio(self.agree, self.total)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ProfileAgreement {
    /// Human aggregated labels equal to the profile's ground truth.
    pub human_vs_truth: Rate,
    /// Model aggregated labels equal to the human aggregated label.
    pub llm_vs_human: Rate,
}

/// Agreement of unsanitized aggregated labels, using the deterministic
/// matcher. Attributes the model did not label are not counted.
pub fn llm_profile_agreement(llm: &[ProfileLabelSet], human: &[ProfileLabelSet], profiles: &[Profile]) -> ProfileAgreement {
    let mut out = ProfileAgreement::default();
    let llm_by: BTreeMap<&str, &ProfileLabelSet> = llm.iter().map(|l| (l.username.as_str(), l)).collect();
    let truth_by: BTreeMap<&str, &Profile> = profiles.iter().map(|p| (p.username.as_str(), p)).collect();
    for h in human {
        for (attr, label) in &h.labels {
            if let Some(p) = truth_by.get(h.username.as_str()) {
                out.human_vs_truth.total += 1;
                out.human_vs_truth.agree += usize::from(equivalent(*attr, &p.attribute_value(*attr), &label.value));
            }
            if let Some(m) = llm_by.get(h.username.as_str()).and_then(|l| l.labels.get(attr)) {
                out.llm_vs_human.total += 1;
                out.llm_vs_human.agree += usize::from(equivalent(*attr, &label.value, &m.value));
            }
        }
    }
    out
}

impl ThreadStats {
    pub fn to_text(&self) -> String {
        let mut s = format!("threads {}  comments {}\n", self.threads, self.comments);
        let _ = writeln!(s, "{:<22}{:>10}{:>10}{:>10}", "", "mean", "std", "median");
        for (name, x) in self.rows() {
            let _ = writeln!(s, "{:<22}{:>10.2}{:>10.2}{:>10.1}", name, x.mean, x.std, x.median);
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let _ = w.write_record(["statistic", "n", "mean", "std", "median"]);
        for (name, x) in self.rows() {
            let _ = w.write_record([
                name.to_string(),
                x.n.to_string(),
                format!("{:.4}", x.mean),
                format!("{:.4}", x.std),
                format!("{}", x.median),
            ]);
        }
        String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
    }

    fn rows(&self) -> [(&'static str, Summary); 4] {
        [
            ("comment_length", self.comment_length),
            ("comments_per_thread", self.comments_per_thread),
            ("profiles_per_thread", self.profiles_per_thread),
            ("comments_per_profile", self.comments_per_profile),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AttributeTag, CoarseHardness, CommentDraft, ProfileLabel, TreeLimits};

    fn tree() -> ThreadTree {
        let mut t = ThreadTree::new("t0", Attribute::Age, "q", "d");
        let limits = TreeLimits::default();
        let draft = |a: &str, text: &str, tags| CommentDraft { author: a.into(), text: text.into(), round: 1, tags, ..Default::default() };
        t.insert_comment(0, draft("AaBb", "0123456789", vec![]), &limits).unwrap();
        t
    }

    #[test]
    fn single_comment_stats() {
        let s = thread_stats(&[tree()]);
        assert_eq!(s.comments, 1);
        assert_eq!((s.comment_length.mean, s.comment_length.std, s.comment_length.median), (10.0, 0.0, 10.0));
    }

    #[test]
    fn summary_uses_sample_std() {
        let s = Summary::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.median, 2.5);
        assert!((s.std - 1.2909944).abs() < 1e-6);
        assert!((s.population_std() - 1.1180339).abs() < 1e-6);
    }

    #[test]
    fn empty_hardness_is_zero() {
        let t = profile_hardness(&[]);
        assert_eq!(t.rows.len(), 8);
        assert_eq!(t.total(), 0);
        assert!(t.to_csv().starts_with("attribute,1,2,3,4,5\n"));
    }

    #[test]
    fn agreement_from_tags() {
        let mut t = tree();
        let limits = TreeLimits::default();
        let mut accepted = AttributeTag::model(Attribute::Sex, vec!["male".into()], 3, CoarseHardness::Direct);
        accepted.verdict = Some(crate::model::TagVerdict::Accepted);
        accepted.hardness_fine = Some(1);
        let pending = AttributeTag::model(Attribute::Age, vec!["30".into()], 2, CoarseHardness::Indirect);
        let human = AttributeTag::human(Attribute::Occupation, vec!["nurse".into()], 4, 3);
        t.insert_comment(
            1,
            CommentDraft { author: "CcDd".into(), text: "x".into(), round: 2, tags: vec![accepted, pending, human], ..Default::default() },
            &limits,
        )
        .unwrap();
        let m = tag_agreement(&[t.clone()]);
        assert_eq!(m, AgreementMatrix { true_negative: 13, false_negative: 1, false_positive: 1, true_positive: 1 });
        assert_eq!(m.total(), 16);
        assert_eq!(comment_hardness(&[t]).row(Attribute::Occupation), [0, 0, 1, 0, 0]);
    }

    #[test]
    fn published_matrix_rates() {
        let m = AgreementMatrix { true_negative: 57170, false_negative: 658, false_positive: 676, true_positive: 4072 };
        assert!((m.fnr() - 658.0 / 4730.0).abs() < 1e-12);
        assert!((m.fpr() - 676.0 / 57846.0).abs() < 1e-12);
    }

    #[test]
    fn identical_labels_agree() {
        let mut set = ProfileLabelSet::new("AaBb");
        set.labels.insert(
            Attribute::Sex,
            ProfileLabel { value: "male".into(), hardness: 1, certainty: 5, supporting_comments: vec![] },
        );
        let mut other = set.clone();
        let r = llm_profile_agreement(&[set.clone()], &[set.clone()], &[]);
        assert_eq!(r.llm_vs_human.value(), 1.0);
        other.labels.get_mut(&Attribute::Sex).unwrap().value = "female".into();
        let r = llm_profile_agreement(&[other], &[set], &[]);
        assert_eq!(r.llm_vs_human.value(), 0.0);
    }
}
