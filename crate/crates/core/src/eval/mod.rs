//! Profile-level attribute inference evaluation.

mod anonymize;
mod matching;
mod parse;
mod prompt;
mod report;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use anonymize::{
    anonymize_comments, mask, AnonymizedComment, Anonymizer, EntitySpan, HttpAnonymizer, HttpAnonymizerConfig,
    MaskStyle, RuleBasedAnonymizer, MASKED_CATEGORIES, MASKED_QUANTITIES, MIN_CONFIDENCE,
};
pub use matching::{
    equivalent, match_deterministic, match_values, parse_age, parse_equivalence, EquivalenceJudge, ModelJudge,
    Outcome, Verdict, AGE_TOLERANCE,
};
pub use parse::{parse_blocks, parse_inference, PredictionRecord, RawBlock};
pub use prompt::{
    build_inference_prompt, fit_budget, profile_comments, render_inference_prompt, ProfileComment,
    DEFAULT_COMMENT_BUDGET,
};
pub use report::{score_profile, AttributeScore, Cell, CellRow, InferenceReport, ProfileFailure};

use crate::gateway::{derive_seed, Gateway, GatewayError};
use crate::model::{ProfileLabelSet, ThreadTree};

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("profile {0} has no labels or no comments to evaluate")]
    EmptyProfile(String),
    #[error("dataset has no labeled profile")]
    EmptyDataset,
    #[error(transparent)]
    Gateway(#[from] GatewayError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalParams {
    /// Character budget for the comment section of each prompt.
    pub comment_budget: usize,
    pub age_tolerance: f64,
    /// Ask the model to judge free-text pairs the rules cannot decide.
    pub model_equivalence: bool,
    /// Re-extract malformed answers with a second model call.
    pub extraction_fallback: bool,
    pub seed: u64,
}

impl Default for EvalParams {
    fn default() -> Self {
        Self {
            comment_budget: DEFAULT_COMMENT_BUDGET,
            age_tolerance: AGE_TOLERANCE,
            model_equivalence: true,
            extraction_fallback: true,
            seed: 0,
        }
    }
}

/// What the harness needs: threads holding the comments and the aggregated
/// labels used as ground truth.
#[derive(Debug, Clone, Copy)]
pub struct EvalDataset<'a> {
    pub threads: &'a [ThreadTree],
    pub labels: &'a [ProfileLabelSet],
}

/// Everything one profile produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileEvaluation {
    pub username: String,
    pub raw_answer: String,
    pub predictions: Vec<PredictionRecord>,
    pub scores: Vec<AttributeScore>,
    /// Comments the anonymizer could not process and the rules handled.
    #[serde(default)]
    pub anonymizer_fallbacks: usize,
}

/// Evaluate one profile: build the prompt, query `model`, parse and score.
/// `judge` is the gateway used for extraction fallback and equivalence.
pub async fn evaluate_profile(
    threads: &[ThreadTree],
    labels: &ProfileLabelSet,
    model: &Gateway,
    judge: &Gateway,
    anonymizer: Option<&dyn Anonymizer>,
    params: &EvalParams,
) -> Result<ProfileEvaluation, EvalError> {
    let mut comments = profile_comments(threads, labels);
    let mut fallbacks = 0;
    if let Some(anon) = anonymizer {
        let texts: Vec<String> = comments.iter().map(|c| c.text.clone()).collect();
        for (c, a) in comments.iter_mut().zip(anonymize_comments(&texts, anon).await) {
            fallbacks += usize::from(a.fell_back);
            c.text = a.text;
        }
    }
    let seed = derive_seed(params.seed, &labels.username);
    let req = build_inference_prompt(labels, &comments, params.comment_budget, model, seed)?;
    let answer = model.complete(&req).await?;
    let attrs: Vec<_> = labels.labels.keys().copied().collect();
    let predictions = parse_inference(
        &answer,
        &attrs,
        &labels.username,
        model.model_id(),
        params.extraction_fallback.then_some(judge),
        seed,
    )
    .await;
    let model_judge = ModelJudge::new(judge.clone());
    let eq: Option<&dyn EquivalenceJudge> = params.model_equivalence.then_some(&model_judge as _);
    let scores = score_profile(&predictions, labels, eq, params.age_tolerance).await;
    Ok(ProfileEvaluation {
        username: labels.username.clone(),
        raw_answer: answer,
        predictions,
        scores,
        anonymizer_fallbacks: fallbacks,
    })
}

/// Run every labeled profile concurrently (bounded by the gateway cap) and
/// reduce into a report. Per-profile failures are recorded, never fatal.
pub async fn evaluate_dataset(
    dataset: EvalDataset<'_>,
    model: &Gateway,
    judge: &Gateway,
    anonymizer: Option<Arc<dyn Anonymizer>>,
    params: &EvalParams,
) -> Result<(InferenceReport, Vec<ProfileEvaluation>), EvalError> {
    let labeled: Vec<&ProfileLabelSet> = dataset.labels.iter().filter(|l| !l.is_empty()).collect();
    if labeled.is_empty() {
        return Err(EvalError::EmptyDataset);
    }
    let anon = anonymizer.as_deref();
    let results = futures::future::join_all(
        labeled.iter().map(|l| evaluate_profile(dataset.threads, l, model, judge, anon, params)),
    )
    .await;
    let model_id = if model.model_id().is_empty() { model.backend_name() } else { model.model_id() };
    let mut report = InferenceReport::new(model_id);
    report.anonymized = anonymizer.is_some();
    let mut evaluations = Vec::new();
    for (labels, result) in labeled.iter().zip(results) {
        match result {
            Ok(ev) => {
                report.add_scores(&ev.scores);
                evaluations.push(ev);
            }
            Err(e) => {
                tracing::warn!(username = %labels.username, "evaluation failed: {e}");
                report.failures.push(ProfileFailure { username: labels.username.clone(), error: e.to_string() });
            }
        }
    }
    Ok((report, evaluations))
}
