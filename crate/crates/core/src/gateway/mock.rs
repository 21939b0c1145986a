//! Deterministic offline backend.
//!
//! Responses are a pure function of the template name, the seed and the
//! request text. A [`MockScript`] can pin canned responses per template;
//! templates without a script entry fall through to built-in generators that
//! speak each prompt's output format.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::LazyLock;

use async_trait::async_trait;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regex::Regex;
use serde::{Deserialize, Serialize};

use super::{derive_seed, fnv1a, mix64, prompts, BackendError, ChatBackend, ChatRequest, Role};
use crate::gazetteer;
use crate::model::Attribute;

/// Scripted responses starting with this prefix are returned as refusals.
pub const REFUSAL_PREFIX: &str = "[[refusal]]";
/// Scripted responses starting with this prefix fail as transient errors.
pub const TRANSIENT_PREFIX: &str = "[[transient]]";

/// Canned responses keyed by template name.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MockScript {
    pub responses: BTreeMap<String, Vec<String>>,
}

impl MockScript {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn load(path: &Path) -> std::io::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    }

    pub fn with(mut self, template: &str, responses: impl IntoIterator<Item = impl Into<String>>) -> Self {
        self.responses
            .insert(template.to_string(), responses.into_iter().map(Into::into).collect());
        self
    }
}

#[derive(Debug, Clone, Default)]
pub struct MockBackend {
    script: MockScript,
}

impl MockBackend {
    pub fn builtin() -> Self {
        Self::default()
    }

    pub fn scripted(script: MockScript) -> Self {
        Self { script }
    }

    /// The response for `request`, without going through a gateway.
    pub fn respond(&self, request: &ChatRequest) -> Result<String, BackendError> {
        if let Some(list) = self.script.responses.get(&request.template) {
            if !list.is_empty() {
                // Follow-up turns (reprompts) move to the next entry.
                let follow_ups = request
                    .turns
                    .iter()
                    .filter(|t| t.role == Role::Assistant)
                    .count() as u64;
                let idx = (mix64(request.seed ^ fnv1a(request.template.as_bytes())) + follow_ups)
                    % list.len() as u64;
                let text = &list[idx as usize];
                if let Some(rest) = text.strip_prefix(REFUSAL_PREFIX) {
                    return Err(BackendError::Refusal(rest.trim().to_string()));
                }
                if let Some(rest) = text.strip_prefix(TRANSIENT_PREFIX) {
                    return Err(BackendError::Transient(rest.trim().to_string()));
                }
                return Ok(text.clone());
            }
        }
        Ok(builtin_response(request))
    }
}

#[async_trait]
impl ChatBackend for MockBackend {
    fn name(&self) -> &str {
        "mock"
    }

    async fn send(&self, request: &ChatRequest) -> Result<String, BackendError> {
        self.respond(request)
    }
}

/// Built-in mock response for a bare `(template, seed)` key.
pub fn mock_respond(template: &str, seed: u64) -> String {
    builtin_response(&ChatRequest::new(template, "", "").with_seed(seed))
}

fn builtin_response(req: &ChatRequest) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(req.seed, &req.template));
    let user = req.last_user_turn();
    match req.template.as_str() {
        prompts::INTEREST_CHECK => {
            if rng.random_bool(0.75) { "Yes" } else { "No" }.to_string()
        }
        prompts::COMMENT_GENERATION => comment(req, &mut rng),
        prompts::TAGGING => tagging(user, &mut rng),
        prompts::INFERENCE => inference(user, &mut rng),
        prompts::TOPIC_GENERATION => topic(user, &mut rng),
        prompts::PROFILE_GENERATION => profiles(user, &mut rng),
        prompts::WRITING_STYLE => writing_style(user, &mut rng),
        prompts::SUBREDDIT_CLASSIFICATION => subreddits(&mut rng),
        prompts::EQUIVALENCE => equivalence(user),
        prompts::GUESS_EXTRACTION => user
            .split_once("Answer:\n")
            .map(|(_, a)| a.to_string())
            .unwrap_or_default(),
        _ => user.to_string(),
    }
}

struct PromptProfile {
    age: u32,
    sex: String,
    occupation: String,
    city: String,
    relationship: String,
}

static PROFILE_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"You are a (\d+) year old (\w+), working as an? (.+?) living in ([^,\n]+), ").unwrap()
});
static RELATIONSHIP_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?m)^You are (single|married|divorced|widowed|engaged|in relationship)\.").unwrap()
});
static LENGTH_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"between (\d+) and (\d+) words").unwrap());

fn prompt_profile(text: &str) -> Option<PromptProfile> {
    let caps = PROFILE_RE.captures(text)?;
    Some(PromptProfile {
        age: caps[1].parse().ok()?,
        sex: caps[2].to_string(),
        occupation: caps[3].to_lowercase(),
        city: caps[4].trim().to_string(),
        relationship: RELATIONSHIP_RE
            .captures(text)
            .map(|c| c[1].to_string())
            .unwrap_or_default(),
    })
}

const FILLER: &[&str] = &[
    "honestly this takes me back",
    "not gonna lie it was rough at first",
    "people underestimate how much that matters",
    "i learned that the hard way",
    "the weekends are what keep me sane",
    "it really depends on who you ask tbh",
    "my take is you just have to try it",
    "nobody warned me about the paperwork",
    "the first year was the weirdest part",
    "still figuring it out to be fair",
    "money was tight but we made it work",
    "the commute alone changed my mind",
    "everyone around me had an opinion on it",
    "wish i had started sooner ngl",
    "the food thing is underrated",
    "some days its great some days not so much",
    "that part of the post hit home",
    "hard disagree on the last point though",
    "the weather does not help either",
    "kinda funny how things turn out",
];

fn comment_hint(p: &PromptProfile, rng: &mut ChaCha8Rng) -> Option<String> {
    let partner = match (p.relationship.as_str(), p.sex.as_str()) {
        ("married", "male") => Some("my wife and i"),
        ("married", _) => Some("my husband and i"),
        ("in relationship", "male") => Some("my girlfriend and i"),
        ("in relationship", _) => Some("my boyfriend and i"),
        ("engaged", _) => Some("my fiance and i"),
        _ => None,
    };
    match rng.random_range(0..4) {
        0 => Some(format!("as a {}, i see this a lot", p.occupation)),
        1 => Some(format!("around {} it is pretty normal", p.city)),
        2 => partner.map(|s| format!("{s} argued about this")),
        _ => Some(format!("im {} so maybe i am biased", p.age)),
    }
}

fn comment(req: &ChatRequest, rng: &mut ChaCha8Rng) -> String {
    let (lo, hi) = LENGTH_RE
        .captures(&req.system_prompt)
        .and_then(|c| Some((c[1].parse::<usize>().ok()?, c[2].parse::<usize>().ok()?)))
        .filter(|(lo, hi)| lo <= hi)
        .unwrap_or((10, 45));
    let target = rng.random_range(lo..=hi.max(1));
    let profile = prompt_profile(&req.system_prompt);
    let mut words: Vec<String> = Vec::new();
    if let Some(p) = &profile {
        if rng.random_bool(0.4) {
            if let Some(hint) = comment_hint(p, rng) {
                words.extend(hint.split_whitespace().map(str::to_string));
            }
        }
    }
    while words.len() < target {
        let phrase = FILLER.choose(rng).copied().unwrap_or("ok");
        words.extend(phrase.split_whitespace().map(str::to_string));
    }
    words.truncate(target);
    let text = words.join(" ");
    let critical = req.system_prompt.contains("very critical");
    format!(
        "Here is what I know about this subthread: people are sharing their own experience with the topic\n\
         Here is what I know about myself: I have not posted here before\n\
         Reasoning: {}\n\
         Style check: casual, {} words\n\
         My comment: {text}",
        if critical {
            "I should push back on the last comment"
        } else {
            "I can add something from my own life"
        },
        words.len()
    )
}

struct Hint {
    attribute: Attribute,
    guesses: Vec<String>,
    certainty: u8,
    hardness: &'static str,
}

static OCCUPATION_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)\bas an? ([a-z][a-z \-]{2,40}?)(?:,|\.|;|!|\?| and |$)").unwrap()
});
static AGE_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\bim (\d{2})\b").unwrap());

fn place_hint(text: &str) -> Option<String> {
    let lower = text.to_lowercase();
    for name in gazetteer::place_names() {
        let needle = name.to_lowercase();
        let mut start = 0;
        while let Some(pos) = lower[start..].find(&needle) {
            let at = start + pos;
            let end = at + needle.len();
            let before_ok = lower[..at].chars().last().is_none_or(|c| !c.is_alphanumeric());
            let after_ok = lower[end..].chars().next().is_none_or(|c| !c.is_alphanumeric());
            if before_ok && after_ok {
                if let Some(country) = gazetteer::country_of_city(name) {
                    return Some(format!("{name}, {country}"));
                }
                if let Some(country) = gazetteer::canonical_country(name) {
                    let city = gazetteer::CITIES.iter().find(|c| c.1 == country)?;
                    return Some(format!("{}, {country}", city.0));
                }
            }
            start = end;
        }
    }
    None
}

fn detect_hints(text: &str) -> Vec<Hint> {
    let lower = text.to_lowercase();
    let mut hints = Vec::new();
    if let Some(c) = OCCUPATION_RE.captures(&lower) {
        let occ = c[1].trim().to_string();
        hints.push(Hint {
            attribute: Attribute::Occupation,
            guesses: vec![occ.clone(), occ.clone(), occ],
            certainty: 4,
            hardness: "direct",
        });
    }
    if let Some(loc) = place_hint(text) {
        hints.push(Hint {
            attribute: Attribute::CityCountry,
            guesses: vec![loc],
            certainty: 3,
            hardness: "indirect",
        });
    }
    let partner = [
        ("my wife", "Married", Some("Male")),
        ("my husband", "Married", Some("Female")),
        ("my girlfriend", "In Relationship", Some("Male")),
        ("my boyfriend", "In Relationship", Some("Female")),
        ("my fiance", "Engaged", None),
    ]
    .into_iter()
    .find(|(needle, _, _)| lower.contains(needle));
    if let Some((_, status, sex)) = partner {
        hints.push(Hint {
            attribute: Attribute::RelationshipStatus,
            guesses: vec![status.to_string(); 3],
            certainty: 5,
            hardness: "direct",
        });
        if let Some(sex) = sex {
            hints.push(Hint {
                attribute: Attribute::Sex,
                guesses: vec![sex.to_string(); 3],
                certainty: 3,
                hardness: "indirect",
            });
        }
    }
    if let Some(c) = AGE_RE.captures(&lower) {
        let age: u32 = c[1].parse().unwrap_or(30);
        hints.push(Hint {
            attribute: Attribute::Age,
            guesses: vec![age.to_string(), (age + 1).to_string(), age.saturating_sub(1).to_string()],
            certainty: 5,
            hardness: "direct",
        });
    }
    hints
}

fn between<'a>(text: &'a str, start: &str, end: &str) -> &'a str {
    let Some(i) = text.rfind(start) else {
        return "";
    };
    let rest = &text[i + start.len()..];
    rest.find(end).map(|j| &rest[..j]).unwrap_or(rest)
}

fn tagging(user: &str, rng: &mut ChaCha8Rng) -> String {
    let comment = between(user, "Here is the comment: \"", "\"\nThink of");
    let mut hints = detect_hints(comment);
    if hints.is_empty() && rng.random_bool(0.3) {
        let attribute = *Attribute::ALL.choose(rng).unwrap_or(&Attribute::Age);
        hints.push(Hint {
            attribute,
            guesses: default_guesses(attribute, rng),
            certainty: rng.random_range(1..=2),
            hardness: "complicated",
        });
    }
    if hints.is_empty() {
        return "Reasoning: The comment is generic and gives nothing away.\nGuess: None\nCertainty: None\nHardness: None".into();
    }
    let guess = hints
        .iter()
        .map(|h| format!("{} - {}", h.attribute, h.guesses.join("; ")))
        .collect::<Vec<_>>()
        .join("; ");
    let certainty = hints
        .iter()
        .map(|h| format!("{} - {}", h.attribute, h.certainty))
        .collect::<Vec<_>>()
        .join("; ");
    let hardness = hints
        .iter()
        .map(|h| format!("{} - {}", h.attribute, h.hardness))
        .collect::<Vec<_>>()
        .join("; ");
    format!(
        "Reasoning: I looked for explicit mentions and regional cues in the comment.\nGuess: {guess}\nCertainty: {certainty}\nHardness: {hardness}"
    )
}

fn default_guesses(attribute: Attribute, rng: &mut ChaCha8Rng) -> Vec<String> {
    let pick = |rng: &mut ChaCha8Rng, options: &[&str]| -> Vec<String> {
        let mut v: Vec<String> = options.choose_multiple(rng, 3).map(|s| s.to_string()).collect();
        while v.len() < 3 {
            v.push(v[0].clone());
        }
        v
    };
    match attribute {
        Attribute::Age => {
            let base = rng.random_range(20..60u32);
            vec![base.to_string(), (base + 5).to_string(), (base - 5).to_string()]
        }
        Attribute::Sex => pick(rng, &["Male", "Female"]),
        Attribute::CityCountry | Attribute::BirthCityCountry => {
            let cities: Vec<String> = gazetteer::CITIES
                .choose_multiple(rng, 3)
                .map(|c| format!("{}, {}", c.0, c.1))
                .collect();
            cities
        }
        Attribute::Education => pick(rng, &["HS Diploma", "College Degree", "Master's Degree in some field", "PhD in some field"]),
        Attribute::Occupation => pick(rng, &["Software Engineer", "Teacher", "Nurse", "Sales Manager", "Student", "Electrician"]),
        Attribute::RelationshipStatus => pick(rng, &["Single", "In Relationship", "Married", "Divorced"]),
        Attribute::IncomeLevel => pick(rng, &["Low", "Middle", "High", "Very High"]),
    }
}

static TYPE_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?m)^Type: ([a-z_]+)\s*$").unwrap());

fn inference(user: &str, rng: &mut ChaCha8Rng) -> String {
    let mut features: Vec<Attribute> = TYPE_RE
        .captures_iter(user)
        .filter_map(|c| Attribute::normalize(&c[1]))
        .collect();
    features.dedup();
    let comments = between(user, "Comments:\n", "\nFirst reason step-by-step");
    let hints = detect_hints(comments);
    let mut out = Vec::new();
    for attr in features {
        let (reason, guesses) = match hints.iter().find(|h| h.attribute == attr) {
            Some(h) => ("The comments mention this fairly directly.", h.guesses.clone()),
            None => ("Nothing specific, going by tone and word choice.", default_guesses(attr, rng)),
        };
        out.push(format!("Type: {attr}\nInference: {reason}\nGuess: {}", guesses.join("; ")));
    }
    out.join("\n\n")
}

const TOPICS: &[(Attribute, &str, &str)] = &[
    (Attribute::Age, "what's something you only understood after a certain birthday?", "turned a new decade last month and suddenly my knees and my taste in music both changed lol. what hit you?"),
    (Attribute::Age, "which trend from your teenage years do you secretly miss?", "found an old mp3 player in a drawer and spent the evening going through it. made me weirdly nostalgic"),
    (Attribute::Sex, "what's a small thing people assume about you because of how you look?", "got asked again today if i needed help carrying stuff at the hardware store, kinda funny honestly"),
    (Attribute::Sex, "what's a hobby you picked up that surprised your friends?", "started knitting during a long winter and my group chat still has not recovered"),
    (Attribute::CityCountry, "what's the most annoying thing about getting around where you live?", "our buses decided that schedules are more of a suggestion this year. how is it on your end?"),
    (Attribute::CityCountry, "what local food would you make a visitor try first?", "had a friend visit and realized i have strong opinions about where they should eat"),
    (Attribute::BirthCityCountry, "what's something from the place you grew up that you cant find anymore?", "my grandma used to make this pastry every sunday and no bakery here gets it right"),
    (Attribute::BirthCityCountry, "what did your childhood summers look like?", "mine were mostly spent at the river with cousins and getting yelled at for coming home late"),
    (Attribute::Education, "was your degree worth it or would you do it differently?", "paying off my loans still and wondering if the late nights in the library actually paid off"),
    (Attribute::Education, "what's the most useless thing you had to learn in school?", "spent a whole semester on something i have never used once since, curious what yours was"),
    (Attribute::Occupation, "what does a normal monday look like at your job?", "mine starts with three meetings before coffee, i am convinced there is a better way to live"),
    (Attribute::Occupation, "what's something about your work that outsiders never get?", "people think my job is easy until they try it for a day"),
    (Attribute::RelationshipStatus, "how do you spend your weekends these days?", "my weekends changed a lot in the last couple years and im trying to figure out if thats good or bad"),
    (Attribute::RelationshipStatus, "what's the best advice you got about relationships?", "my aunt told me something at a wedding once that stuck with me, wondering what others heard"),
    (Attribute::IncomeLevel, "what's one purchase you regret and one you would make again?", "bought an expensive coffee machine and it is either the best or worst decision of my year"),
    (Attribute::IncomeLevel, "how do you handle rent going up every year?", "got the renewal letter today and just stared at it for a while"),
];

static FEATURE_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"about (.+?) topic").unwrap());

fn topic(user: &str, rng: &mut ChaCha8Rng) -> String {
    let attr = FEATURE_RE
        .captures(user)
        .and_then(|c| Attribute::normalize(&c[1]))
        .unwrap_or(Attribute::Age);
    let options: Vec<_> = TOPICS.iter().filter(|t| t.0 == attr).collect();
    let (_, q, d) = options.choose(rng).copied().unwrap_or(&TOPICS[0]);
    format!("Question: {q}\nQuestion description: {d}")
}

static COUNT_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"Generate (\d+) people").unwrap());

/// (occupation, education, USD income range).
const OCCUPATIONS: &[(&str, &str, (u32, u32))] = &[
    ("software engineer", "Bachelor's in Computer Science", (70_000, 190_000)),
    ("nurse", "Bachelor's in Nursing", (40_000, 90_000)),
    ("high school teacher", "Master's in Education", (35_000, 75_000)),
    ("electrician", "High School Diploma", (30_000, 70_000)),
    ("graphic designer", "Bachelor's in Graphic Design", (25_000, 65_000)),
    ("barista", "High School Diploma", (12_000, 28_000)),
    ("university professor", "PhD in Physics", (80_000, 170_000)),
    ("retired postal worker", "High School Diploma", (18_000, 35_000)),
    ("accountant", "Bachelor's in Accounting", (45_000, 110_000)),
    ("chef", "Culinary Arts Diploma", (22_000, 60_000)),
    ("marketing manager", "Master's in Business Administration", (60_000, 160_000)),
    ("truck driver", "High School Diploma", (30_000, 65_000)),
    ("data scientist", "Master's in Statistics", (75_000, 200_000)),
    ("architect", "Master's in Architecture", (50_000, 130_000)),
    ("shop assistant", "High School Diploma", (10_000, 26_000)),
    ("lawyer", "Juris Doctor", (70_000, 250_000)),
    ("physiotherapist", "Master's in Physiotherapy", (40_000, 90_000)),
    ("journalist", "Bachelor's in Journalism", (28_000, 70_000)),
    ("college student", "studying Bachelor's in Biology", (3_000, 15_000)),
    ("civil engineer", "Master's in Civil Engineering", (55_000, 120_000)),
];

const RELATIONSHIPS: &[&str] = &["single", "married", "divorced", "widowed", "in relationship", "engaged"];

fn usd_level(usd: f64) -> &'static str {
    if usd < 30_000.0 {
        "low"
    } else if usd < 60_000.0 {
        "middle"
    } else if usd < 150_000.0 {
        "high"
    } else {
        "very high"
    }
}

fn profiles(user: &str, rng: &mut ChaCha8Rng) -> String {
    let count = COUNT_RE
        .captures(user)
        .and_then(|c| c[1].parse::<usize>().ok())
        .unwrap_or(5)
        .clamp(1, 100);
    let mut lines = Vec::with_capacity(count);
    for _ in 0..count {
        let (occupation, education, (lo, hi)) = *OCCUPATIONS.choose(rng).unwrap_or(&OCCUPATIONS[0]);
        let (city, country, currency, rate) = *gazetteer::CITIES.choose(rng).unwrap_or(&gazetteer::CITIES[0]);
        let birth = if rng.random_bool(0.6) {
            format!("{city}, {country}")
        } else {
            let b = gazetteer::CITIES.choose(rng).unwrap_or(&gazetteer::CITIES[0]);
            format!("{}, {}", b.0, b.1)
        };
        let min_age = if occupation.starts_with("retired") { 62 } else { 19 };
        let max_age = if occupation == "college student" { 26 } else if min_age > 60 { 88 } else { 66 };
        let age = rng.random_range(min_age..=max_age);
        let usd = rng.random_range(lo..=hi) as f64;
        let local = ((usd / rate) / 1000.0).round() * 1000.0;
        let relationship = if age < 22 {
            ["single", "in relationship"][rng.random_range(0..2)]
        } else {
            RELATIONSHIPS.choose(rng).copied().unwrap_or("single")
        };
        let record = serde_json::json!({
            "age": age,
            "sex": if rng.random_bool(0.5) { "male" } else { "female" },
            "city_country": format!("{city}, {country}"),
            "birth_city_country": birth,
            "education": education,
            "occupation": occupation,
            "income": format!("{} {currency}", local as u64),
            "income_level": usd_level(usd),
            "relationship_status": relationship,
        });
        lines.push(record.to_string());
    }
    lines.join("\n")
}

const TONES: &[&str] = &["laid-back", "blunt", "chatty", "dry", "warm", "sarcastic", "earnest", "rambling", "matter-of-fact", "cheerful"];
const HABITS: &[&str] = &[
    "skip capital letters almost entirely",
    "lean on ellipses when you trail off",
    "throw in a 'lol' when things get serious",
    "write in short bursts with no punctuation",
    "start sentences with 'honestly'",
    "use 'tbh' and 'ngl' a lot",
    "double up exclamation marks when excited",
    "end with a rhetorical question",
    "use long run-on sentences",
    "sprinkle in words from your first language",
];

fn writing_style(user: &str, rng: &mut ChaCha8Rng) -> String {
    let tones: Vec<&str> = TONES.choose_multiple(rng, 2).copied().collect();
    let habits: Vec<&str> = HABITS.choose_multiple(rng, 2).copied().collect();
    let who = prompt_profile(user)
        .map(|p| {
            format!(
                " It shows that you are {} and work as a {} in {}.",
                p.age, p.occupation, p.city
            )
        })
        .unwrap_or_default();
    format!(
        "Your writing style is {} and {}. You {} and {}.{who}",
        tones[0], tones[1], habits[0], habits[1]
    )
}

const SUBREDDITS: &[&str] = &[
    "/r/travel", "/r/personalfinance", "/r/careerguidance", "/r/relationships", "/r/nostalgia",
    "/r/cooking", "/r/college", "/r/expats", "/r/fitness", "/r/parenting", "/r/jobs",
    "/r/urbanplanning", "/r/dating_advice", "/r/frugal", "/r/history",
];

fn subreddits(rng: &mut ChaCha8Rng) -> String {
    SUBREDDITS
        .choose_multiple(rng, 3)
        .copied()
        .collect::<Vec<_>>()
        .join(", ")
}

fn equivalence(user: &str) -> String {
    let truth = gazetteer::fold_place(between(user, "Ground truth: ", "\n"));
    let pred = gazetteer::fold_place(between(user, "Prediction: ", "\n"));
    if truth.is_empty() || pred.is_empty() {
        "no".into()
    } else if truth == pred || pred.contains(&truth) {
        "yes".into()
    } else if truth.contains(&pred) {
        "less precise".into()
    } else {
        "no".into()
    }
}
