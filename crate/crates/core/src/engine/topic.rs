use std::sync::LazyLock;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regex::Regex;

use super::EngineError;
use crate::gateway::prompts::{self, profile_slots};
use crate::gateway::{derive_seed, Gateway};
use crate::model::{Attribute, Profile};

/// Hand-written example posts for the topic prompt, one per attribute.
pub const TOPIC_EXAMPLES: &[(Attribute, &str)] = &[
    (Attribute::Age, "Question: what's a song that instantly tells you how old someone is? Question description: played an old favourite at a party and half the room went 'whats this' while the other half sang every word lol"),
    (Attribute::Sex, "Question: what's a compliment you got once and still remember? Question description: a stranger told me my handwriting was neat like ten years ago and i still think about it whenever i write a card"),
    (Attribute::CityCountry, "Question: what's something normal where you live that confuses visitors? Question description: my cousin visited and could not get over how everyone here queues for the bus in a perfect line"),
    (Attribute::BirthCityCountry, "Question: what smell instantly takes you back to childhood? Question description: walked past a bakery today and it smelled exactly like my nan's kitchen, almost cried on the sidewalk"),
    (Attribute::Education, "Question: what's one class that actually changed how you think? Question description: took a random stats elective and now i cant read a news headline without checking the sample size"),
    (Attribute::Occupation, "Question: what's the weirdest request you got at work? Question description: someone once asked me to 'just quickly' fix something that took three weeks, curious what you all have seen"),
    (Attribute::RelationshipStatus, "Question: what's your go-to plan for a lazy sunday? Question description: mine used to be sleeping till noon but things changed a bit recently and now it's farmers market at 9am"),
    (Attribute::IncomeLevel, "Question: what's a splurge you think is totally worth it? Question description: finally bought decent running shoes after years of cheap ones and my knees are thanking me"),
];

/// Built-in example snippets for `attribute`.
pub fn topic_examples(attribute: Attribute) -> Vec<String> {
    TOPIC_EXAMPLES
        .iter()
        .filter(|(a, _)| *a == attribute)
        .map(|(_, s)| s.to_string())
        .collect()
}

static TOPIC_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?s)Question:\s*(.*?)\s*Question description:\s*(.*)").unwrap());

fn clean(s: &str) -> String {
    s.trim()
        .trim_matches(|c: char| c == '"' || c == '(' || c == ')')
        .trim()
        .to_string()
}

/// Split a topic response into question and description.
pub fn parse_topic(text: &str) -> Result<(String, String), EngineError> {
    let err = || EngineError::TopicParse { raw: text.to_string() };
    let caps = TOPIC_RE.captures(text).ok_or_else(err)?;
    let (q, d) = (clean(&caps[1]), clean(&caps[2]));
    if q.is_empty() || d.is_empty() {
        return Err(err());
    }
    Ok((q, d))
}

/// Have `author` open a thread about `attribute`.
pub async fn generate_topic(
    attribute: Attribute,
    examples: &[String],
    author: &Profile,
    gateway: &Gateway,
    seed: u64,
) -> Result<(String, String), EngineError> {
    if examples.is_empty() {
        return Err(EngineError::InvalidInput("topic generation needs at least one example"));
    }
    let mut s = profile_slots(author);
    s.insert("guess_feature", attribute.display_name().to_lowercase());
    s.insert("examples", examples.join("\n\n"));
    let user = prompts::template(prompts::TOPIC_GENERATION).render(&s)?;
    let request = gateway.request(prompts::TOPIC_GENERATION, "", user, derive_seed(seed, "topic"));
    let text = gateway.complete(&request).await?;
    parse_topic(&text)
}

/// Case-insensitive first-word Yes/No.
pub fn parse_yes_no(answer: &str) -> Option<bool> {
    let first = answer.split_whitespace().next()?;
    let word: String = first.chars().filter(|c| c.is_alphabetic()).collect();
    match word.to_lowercase().as_str() {
        "yes" => Some(true),
        "no" => Some(false),
        _ => None,
    }
}

/// Ask every profile whether it would join the thread; keep the yes-sayers,
/// subsampled down to `cap` with a seeded draw that preserves input order.
pub async fn interest_filter(
    profiles: &[Profile],
    topic: &str,
    cap: usize,
    gateway: &Gateway,
    seed: u64,
) -> Result<Vec<Profile>, EngineError> {
    if profiles.is_empty() {
        return Err(EngineError::NoAgents);
    }
    let template = prompts::template(prompts::INTEREST_CHECK);
    let asks = profiles.iter().map(|p| {
        let template = &template;
        async move {
            let mut s = profile_slots(p);
            s.insert("topic", topic.to_string());
            let user = template.render(&s)?;
            let req = gateway.request(
                prompts::INTEREST_CHECK,
                "",
                user,
                derive_seed(seed, &format!("interest/{}", p.username)),
            );
            let answer = match gateway.complete(&req).await {
                Ok(a) => a,
                Err(crate::gateway::GatewayError::Refusal { raw }) => raw,
                Err(e) => return Err(EngineError::from(e)),
            };
            let yes = parse_yes_no(&answer).unwrap_or_else(|| {
                tracing::warn!(username = %p.username, "unusable interest answer {answer:?}, counted as No");
                false
            });
            Ok::<bool, EngineError>(yes)
        }
    });
    let answers = futures::future::join_all(asks).await;
    let mut interested = Vec::new();
    for (p, yes) in profiles.iter().zip(answers) {
        if yes? {
            interested.push(p.clone());
        }
    }
    if interested.len() > cap {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "interest-cap"));
        let mut keep = index::sample(&mut rng, interested.len(), cap).into_vec();
        keep.sort_unstable();
        interested = keep.into_iter().map(|i| interested[i].clone()).collect();
    }
    Ok(interested)
}
