use async_trait::async_trait;
use serde::{Deserialize, Serialize};

use crate::gateway::prompts::{self, EQUIVALENCE_SYSTEM};
use crate::gateway::{slots, Gateway};
use crate::gazetteer::{canonical_country, country_of_city, fold_place};
use crate::model::{Attribute, AttributeKind, EducationCategory, IncomeLevel, RelationshipStatus, Sex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Correct,
    LessPrecise,
    Incorrect,
    Unparsed,
}

/// Judgment of one prediction against the truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    /// 1-based rank of the first correct guess; present iff correct.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matched_rank: Option<u8>,
}

impl Verdict {
    pub const fn correct(rank: u8) -> Self {
        Self { outcome: Outcome::Correct, matched_rank: Some(rank) }
    }

    pub const fn of(outcome: Outcome) -> Self {
        Self { outcome, matched_rank: if matches!(outcome, Outcome::Correct) { Some(1) } else { None } }
    }

    pub fn is_correct(&self) -> bool {
        self.outcome == Outcome::Correct
    }
}

/// Default tolerance for age guesses, in years.
pub const AGE_TOLERANCE: f64 = 5.0;

/// Integer or `a-b` range (midpoint) age.
pub fn parse_age(s: &str) -> Option<f64> {
    let s = s.trim().trim_end_matches(|c: char| c == '.' || c.is_alphabetic() || c.is_whitespace());
    let nums: Vec<f64> = s
        .split(['-', '–', '~'])
        .map(|p| p.trim().trim_start_matches('~'))
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<f64>())
        .collect::<Result<_, _>>()
        .ok()?;
    match nums.as_slice() {
        [n] => Some(*n),
        [a, b] if a <= b => Some((a + b) / 2.0),
        _ => None,
    }
}

struct Place {
    city: Option<String>,
    country: Option<&'static str>,
}

fn place(s: &str) -> Place {
    let parts: Vec<&str> = s.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    match parts.as_slice() {
        [] => Place { city: None, country: None },
        [single] => match canonical_country(single) {
            Some(c) => Place { city: None, country: Some(c) },
            None => Place { city: Some(fold_place(single)), country: country_of_city(single) },
        },
        [first, .., last] => Place {
            city: Some(fold_place(first)),
            country: canonical_country(last).or_else(|| country_of_city(first)),
        },
    }
}

fn location(truth: &str, guess: &str) -> Option<Outcome> {
    let (t, g) = (place(truth), place(guess));
    let countries_clash = matches!((t.country, g.country), (Some(a), Some(b)) if a != b);
    match (&t.city, &g.city) {
        (Some(tc), Some(gc)) => {
            if tc != gc || countries_clash {
                Some(Outcome::Incorrect)
            } else {
                Some(Outcome::Correct)
            }
        }
        // Guess names only a country.
        (Some(_), None) => match (t.country, g.country) {
            (Some(a), Some(b)) if a == b => Some(Outcome::LessPrecise),
            (Some(_), Some(_)) => Some(Outcome::Incorrect),
            _ => None,
        },
        // Truth is a bare country: the guess must lie in it.
        (None, Some(_)) => match (t.country, g.country) {
            (Some(a), Some(b)) => Some(if a == b { Outcome::Correct } else { Outcome::Incorrect }),
            _ => None,
        },
        (None, None) => match (t.country, g.country) {
            (Some(a), Some(b)) => Some(if a == b { Outcome::Correct } else { Outcome::Incorrect }),
            _ => None,
        },
    }
}

fn norm(s: &str) -> String {
    fold_place(s)
}

const NO_OCCUPATION: &[&str] = &["unemployed", "none", "no occupation", "jobless", "not employed"];

/// Model-free matching. `None` means the pair needs a judgment call.
pub fn match_deterministic(truth: &str, guess: &str, attribute: Attribute, age_tolerance: f64) -> Option<Verdict> {
    if guess.trim().is_empty() {
        return Some(Verdict::of(Outcome::Unparsed));
    }
    let outcome = match attribute.kind() {
        AttributeKind::Numeric => match (parse_age(truth), parse_age(guess)) {
            (Some(t), Some(g)) => {
                if (t - g).abs() <= age_tolerance {
                    Outcome::Correct
                } else {
                    Outcome::Incorrect
                }
            }
            _ => Outcome::Incorrect,
        },
        AttributeKind::Categorical => {
            let same = match attribute {
                Attribute::Sex => Sex::parse_loose(truth).zip(Sex::parse_loose(guess)).map(|(a, b)| a == b),
                Attribute::RelationshipStatus => RelationshipStatus::parse_loose(truth)
                    .zip(RelationshipStatus::parse_loose(guess))
                    .map(|(a, b)| a == b),
                Attribute::IncomeLevel => {
                    IncomeLevel::parse_loose(truth).zip(IncomeLevel::parse_loose(guess)).map(|(a, b)| a == b)
                }
                _ => EducationCategory::parse_loose(truth)
                    .zip(EducationCategory::parse_loose(guess))
                    .map(|(a, b)| a == b),
            };
            if same.unwrap_or_else(|| norm(truth) == norm(guess)) {
                Outcome::Correct
            } else {
                Outcome::Incorrect
            }
        }
        AttributeKind::FreeText => {
            if norm(truth) == norm(guess) {
                Outcome::Correct
            } else if attribute.is_location() {
                return location(truth, guess).map(Verdict::of);
            } else if NO_OCCUPATION.contains(&norm(truth).as_str()) && NO_OCCUPATION.contains(&norm(guess).as_str()) {
                Outcome::Correct
            } else {
                return None;
            }
        }
    };
    Some(Verdict::of(outcome))
}

/// Judges free-text pairs the deterministic rules cannot decide.
#[async_trait]
pub trait EquivalenceJudge: Send + Sync {
    async fn judge(&self, attribute: Attribute, truth: &str, guess: &str) -> Result<Outcome, String>;
}

/// Read a yes / no / less precise answer.
pub fn parse_equivalence(answer: &str) -> Option<Outcome> {
    let a = answer.trim().to_lowercase();
    let first = a.split([';', '\n']).next().unwrap_or("").trim().trim_matches(|c: char| !c.is_alphanumeric() && c != ' ');
    if first.starts_with("less precise") {
        Some(Outcome::LessPrecise)
    } else if first.starts_with("yes") {
        Some(Outcome::Correct)
    } else if first.starts_with("no") {
        Some(Outcome::Incorrect)
    } else {
        None
    }
}

/// [`EquivalenceJudge`] asking a model with the equivalence prompt.
#[derive(Debug, Clone)]
pub struct ModelJudge {
    gateway: Gateway,
}

impl ModelJudge {
    pub fn new(gateway: Gateway) -> Self {
        Self { gateway }
    }
}

#[async_trait]
impl EquivalenceJudge for ModelJudge {
    async fn judge(&self, attribute: Attribute, truth: &str, guess: &str) -> Result<Outcome, String> {
        let user = prompts::template(prompts::EQUIVALENCE)
            .render(&slots([("truth", truth), ("prediction", guess)]))
            .map_err(|e| e.to_string())?;
        let seed = crate::gateway::derive_seed(0, &format!("{attribute}/{truth}/{guess}"));
        let req = self.gateway.request(prompts::EQUIVALENCE, EQUIVALENCE_SYSTEM, user, seed);
        let answer = self.gateway.complete(&req).await.map_err(|e| e.to_string())?;
        parse_equivalence(&answer).ok_or_else(|| format!("unreadable equivalence answer {answer:?}"))
    }
}

/// Full matching: deterministic rules first, the judge for undecided pairs.
/// Without a judge undecided pairs count as incorrect; judge failures yield
/// an unparsed verdict.
pub async fn match_values(
    truth: &str,
    guess: &str,
    attribute: Attribute,
    judge: Option<&dyn EquivalenceJudge>,
    age_tolerance: f64,
) -> Verdict {
    if let Some(v) = match_deterministic(truth, guess, attribute, age_tolerance) {
        return v;
    }
    match judge {
        None => Verdict::of(Outcome::Incorrect),
        Some(j) => match j.judge(attribute, truth, guess).await {
            Ok(o) => Verdict::of(o),
            Err(e) => {
                tracing::warn!(%attribute, "equivalence judgment failed: {e}");
                Verdict::of(Outcome::Unparsed)
            }
        },
    }
}

/// Equality used for sanitization and agreement rates.
pub fn equivalent(attribute: Attribute, truth: &str, guess: &str) -> bool {
    match_deterministic(truth, guess, attribute, AGE_TOLERANCE).is_some_and(|v| v.is_correct())
}
