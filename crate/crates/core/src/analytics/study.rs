use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ratio;

/// Origin of a comment, or what a rater took it for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Judgment {
    Synthetic,
    Human,
}

/// One rater's call on one comment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JudgmentRecord {
    pub comment_id: String,
    pub source_truth: Judgment,
    pub judged_as: Judgment,
    pub rater_id: String,
}

/// Human-written is the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StudyConfusion {
    pub true_negative: usize,
    pub false_negative: usize,
    pub false_positive: usize,
    pub true_positive: usize,
}

impl StudyConfusion {
    fn add(&mut self, r: &JudgmentRecord) {
        match (r.source_truth, r.judged_as) {
            (Judgment::Synthetic, Judgment::Synthetic) => self.true_negative += 1,
            (Judgment::Synthetic, Judgment::Human) => self.false_positive += 1,
            (Judgment::Human, Judgment::Synthetic) => self.false_negative += 1,
            (Judgment::Human, Judgment::Human) => self.true_positive += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.true_negative + self.false_negative + self.false_positive + self.true_positive
    }

    pub fn accuracy(&self) -> f64 {
        ratio(self.true_positive + self.true_negative, self.total())
    }

    pub fn fpr(&self) -> f64 {
        ratio(self.false_positive, self.false_positive + self.true_negative)
    }

    pub fn fnr(&self) -> f64 {
        ratio(self.false_negative, self.false_negative + self.true_positive)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyMetrics {
    pub confusion: StudyConfusion,
    pub accuracy: f64,
    pub fpr: f64,
    pub fnr: f64,
    pub per_rater_accuracy: BTreeMap<String, f64>,
    /// Raters per accuracy decile; bin `i` covers `[i/10, (i+1)/10)`, the
    /// last bin also holds 1.0.
    pub rater_histogram: [usize; 10],
    /// Share of doubly-judged comments where both raters gave the same call.
    pub pairwise_agreement: f64,
    /// Comments not judged by exactly two raters.
    pub irregular_comments: usize,
}

pub fn human_study_metrics(judgments: &[JudgmentRecord]) -> StudyMetrics {
    let mut confusion = StudyConfusion::default();
    let mut raters: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    let mut by_comment: BTreeMap<&str, Vec<Judgment>> = BTreeMap::new();
    for r in judgments {
        confusion.add(r);
        let e = raters.entry(r.rater_id.as_str()).or_default();
        e.0 += usize::from(r.source_truth == r.judged_as);
        e.1 += 1;
        by_comment.entry(r.comment_id.as_str()).or_default().push(r.judged_as);
    }
    let per_rater_accuracy: BTreeMap<String, f64> =
        raters.iter().map(|(k, (c, n))| (k.to_string(), ratio(*c, *n))).collect();
    let mut rater_histogram = [0usize; 10];
    for acc in per_rater_accuracy.values() {
        rater_histogram[((acc * 10.0).floor() as usize).min(9)] += 1;
    }
    let irregular_comments = by_comment.values().filter(|v| v.len() != 2).count();
    if irregular_comments > 0 {
        tracing::warn!(irregular_comments, "comments not judged by exactly two raters");
    }
    let pairs: Vec<&Vec<Judgment>> = by_comment.values().filter(|v| v.len() == 2).collect();
    let agreeing = pairs.iter().filter(|v| v[0] == v[1]).count();
    StudyMetrics {
        accuracy: confusion.accuracy(),
        fpr: confusion.fpr(),
        fnr: confusion.fnr(),
        confusion,
        per_rater_accuracy,
        rater_histogram,
        pairwise_agreement: ratio(agreeing, pairs.len()),
        irregular_comments,
    }
}
