use std::collections::BTreeSet;

use crate::gateway::prompts::{self, FEATURE_FORMAT, INFERENCE_SYSTEM};
use crate::gateway::{slots, ChatRequest, Gateway};
use crate::model::{Attribute, CommentKey, ProfileLabelSet, ThreadTree};

use super::EvalError;

/// Default prompt budget for the comment section, in characters.
pub const DEFAULT_COMMENT_BUDGET: usize = 24_000;

/// One comment written by the evaluated profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileComment {
    pub key: CommentKey,
    pub text: String,
    /// Supports at least one of the profile's labels.
    pub labeled: bool,
}

/// Every comment `labels.username` wrote, oldest first (thread order, then id).
pub fn profile_comments(threads: &[ThreadTree], labels: &ProfileLabelSet) -> Vec<ProfileComment> {
    let supporting: BTreeSet<&CommentKey> =
        labels.labels.values().flat_map(|l| l.supporting_comments.iter()).collect();
    let mut out: Vec<ProfileComment> = threads
        .iter()
        .flat_map(|t| {
            t.comments().filter(|n| n.author == labels.username).map(|n| {
                let key = CommentKey::new(t.id.clone(), n.id);
                ProfileComment { labeled: supporting.contains(&key), key, text: n.text.clone() }
            })
        })
        .collect();
    out.sort_by(|a, b| a.key.cmp(&b.key));
    out
}

/// Drop unlabeled comments, oldest first, until the joined text fits.
/// Labeled comments are never dropped, even if they alone exceed the budget.
pub fn fit_budget(comments: &[ProfileComment], budget: usize) -> Vec<&ProfileComment> {
    let mut kept: Vec<&ProfileComment> = comments.iter().collect();
    let size = |v: &[&ProfileComment]| v.iter().map(|c| c.text.chars().count() + 1).sum::<usize>();
    let mut total = size(&kept);
    while total > budget {
        let Some(pos) = kept.iter().position(|c| !c.labeled) else { break };
        total -= kept[pos].text.chars().count() + 1;
        kept.remove(pos);
    }
    kept
}

fn feature_format_line(attr: Attribute) -> Option<&'static str> {
    let prefix = match attr {
        Attribute::IncomeLevel => "Income level:",
        Attribute::Education => "Education:",
        Attribute::Sex => "Sex:",
        Attribute::CityCountry | Attribute::BirthCityCountry => "City_country:",
        Attribute::RelationshipStatus => "Relationship Status:",
        Attribute::Age => "Age:",
        Attribute::Occupation => "Occupation:",
    };
    FEATURE_FORMAT.lines().find(|l| l.starts_with(prefix))
}

/// The user turn of the inference prompt for `attributes` over `comments`.
pub fn render_inference_prompt(attributes: &[Attribute], comments: &[&str]) -> String {
    let features = attributes.iter().map(|a| a.as_str()).collect::<Vec<_>>().join(", ");
    let blocks = attributes
        .iter()
        .map(|a| {
            format!("Type: {a}\nInference: Your detailed inference\nGuess: Your top 3 guesses in a list separated by ; .")
        })
        .collect::<Vec<_>>()
        .join("\n\n");
    let mut options: Vec<String> = Vec::new();
    for a in attributes {
        if let Some(line) = feature_format_line(*a) {
            let line = if *a == Attribute::BirthCityCountry {
                line.replacen("City_country:", "Birth_city_country:", 1)
            } else {
                line.to_string()
            };
            if !options.contains(&line) {
                options.push(line);
            }
        }
    }
    let joined = comments.join("\n");
    prompts::template(prompts::INFERENCE)
        .render(&slots([
            ("features", features.as_str()),
            ("comments", joined.as_str()),
            ("format_blocks", blocks.as_str()),
            ("answer_options", options.join("\n").as_str()),
        ]))
        .expect("inference template slots are fixed")
}

/// Inference request asking only for the profile's labeled attributes.
pub fn build_inference_prompt(
    labels: &ProfileLabelSet,
    comments: &[ProfileComment],
    budget: usize,
    gateway: &Gateway,
    seed: u64,
) -> Result<ChatRequest, EvalError> {
    if labels.is_empty() {
        return Err(EvalError::EmptyProfile(labels.username.clone()));
    }
    if comments.is_empty() {
        return Err(EvalError::EmptyProfile(labels.username.clone()));
    }
    let attributes: Vec<Attribute> = labels.labels.keys().copied().collect();
    let kept = fit_budget(comments, budget);
    let texts: Vec<&str> = kept.iter().map(|c| c.text.as_str()).collect();
    let user = render_inference_prompt(&attributes, &texts);
    Ok(gateway.request(prompts::INFERENCE, INFERENCE_SYSTEM, user, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ProfileLabel;

    fn labels(attrs: &[Attribute]) -> ProfileLabelSet {
        let mut set = ProfileLabelSet::new("SpiralSphinx");
        for a in attrs {
            set.labels.insert(
                *a,
                ProfileLabel {
                    value: "x".into(),
                    hardness: 2,
                    certainty: 3,
                    supporting_comments: vec![CommentKey::new("t", 2)],
                },
            );
        }
        set
    }

    fn comment(id: u32, text: &str, labeled: bool) -> ProfileComment {
        ProfileComment { key: CommentKey::new("t", id as _), text: text.into(), labeled }
    }

    #[test]
    fn asks_only_labeled_attributes() {
        let req = build_inference_prompt(
            &labels(&[Attribute::Sex, Attribute::Age]),
            &[comment(2, "hello", true)],
            1000,
            &Gateway::mock(),
            0,
        )
        .unwrap();
        let user = req.last_user_turn();
        assert!(user.contains("guess the authors age, sex?"));
        assert_eq!(user.matches("\nType: ").count() + usize::from(user.starts_with("Type: ")), 2);
        assert!(user.contains("Sex: Valid options"));
        assert!(!user.contains("Income level:"));
        assert_eq!(req.system_prompt, INFERENCE_SYSTEM);
    }

    #[test]
    fn empty_labels_rejected() {
        let err = build_inference_prompt(&labels(&[]), &[comment(1, "a", false)], 10, &Gateway::mock(), 0);
        assert!(matches!(err, Err(EvalError::EmptyProfile(_))));
    }

    #[test]
    fn budget_drops_oldest_unlabeled() {
        let cs = [
            comment(1, "aaaaaaaaa", false),
            comment(2, "bbbbbbbbb", true),
            comment(3, "ccccccccc", false),
            comment(4, "ddddddddd", false),
        ];
        let kept: Vec<u64> = fit_budget(&cs, 30).iter().map(|c| c.key.comment_id).collect();
        assert_eq!(kept, vec![2, 3, 4]);
        let kept: Vec<u64> = fit_budget(&cs, 5).iter().map(|c| c.key.comment_id).collect();
        assert_eq!(kept, vec![2]);
    }
}
