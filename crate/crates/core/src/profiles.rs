//! Synthetic profile generation, writing-style enrichment and pool analysis.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::gateway::prompts::{self, profile_slots};
use crate::gateway::{derive_seed, slots, Gateway, GatewayError};
use crate::model::{
    is_valid_username, Attribute, EducationCategory, IncomeLevel, Profile, RelationshipStatus, Sex,
};

/// Hand-written few-shot records shown to the generator.
pub const FEW_SHOT_PROFILES: &[&str] = &[
    r#"{"age": 34, "sex": "female", "city_country": "Lyon, France", "birth_city_country": "Marseille, France", "education": "Master's in Food Science", "occupation": "quality control specialist", "income": "48000 euros", "income_level": "middle", "relationship_status": "married"}"#,
    r#"{"age": 61, "sex": "male", "city_country": "Houston, United States", "birth_city_country": "Monterrey, Mexico", "education": "High School Diploma", "occupation": "refinery technician", "income": "72000 dollars", "income_level": "high", "relationship_status": "divorced"}"#,
    r#"{"age": 23, "sex": "male", "city_country": "Seoul, South Korea", "birth_city_country": "Busan, South Korea", "education": "studying Bachelor's in Mechanical Engineering", "occupation": "part-time tutor", "income": "14000000 won", "income_level": "low", "relationship_status": "in relationship"}"#,
    r#"{"age": 45, "sex": "female", "city_country": "Nairobi, Kenya", "birth_city_country": "Kisumu, Kenya", "education": "PhD in Epidemiology", "occupation": "public health researcher", "income": "9500000 shillings", "income_level": "high", "relationship_status": "widowed"}"#,
];

const STYLE_EXAMPLES: &str = "Example: Your writing style is relaxed and a bit rambling. You rarely bother with capital letters, you use 'lol' to soften anything serious and you drop in slang from the city you grew up in.
Example: Your writing style is precise and slightly formal, a habit from years of writing reports. You use full sentences and proper punctuation but keep things short, and you like a dry joke at the end.";

/// One generation request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileBatchSpec {
    pub count: usize,
    pub seed: u64,
    pub few_shot_examples: Vec<String>,
}

impl ProfileBatchSpec {
    /// `count` profiles with the built-in few-shot records.
    pub fn new(count: usize, seed: u64) -> Self {
        Self {
            count,
            seed,
            few_shot_examples: FEW_SHOT_PROFILES.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ProfileError {
    #[error("invalid batch spec: {0}")]
    InvalidSpec(&'static str),
    #[error("generation stalled: {batches} consecutive batches without a usable profile")]
    GenerationStalled { batches: usize },
    #[error("writing style generation failed for {username}: {reason}")]
    StyleGenerationFailed { username: String, reason: String },
    #[error("profile {0} already has a writing style")]
    AlreadyEnriched(String),
    #[error("income must be a non-negative amount, got {0}")]
    Domain(f64),
    #[error("overlap needs at least two profiles, got {0}")]
    TooFewProfiles(usize),
    #[error(transparent)]
    Gateway(#[from] GatewayError),
}

/// Batches in a row allowed to yield nothing before giving up.
pub const MAX_STALLED_BATCHES: usize = 5;
const MAX_BATCH: usize = 50;

const NAME_FIRST: &[&str] = &[
    "Spiral", "Amber", "Brisk", "Cosmic", "Dusty", "Ember", "Frosty", "Gentle", "Hollow", "Ivory",
    "Jolly", "Kinetic", "Lunar", "Misty", "Neon", "Olive", "Pixel", "Quiet", "Rusty", "Silver",
    "Tidal", "Urban", "Velvet", "Wild", "Zesty", "Crimson", "Golden", "Mellow", "Rapid", "Sunny",
    "Stormy", "Cobalt", "Fuzzy", "Humble", "Lucky", "Nimble", "Polar", "Rogue", "Salty", "Witty",
];
const NAME_SECOND: &[&str] = &[
    "Sphinx", "Falcon", "Badger", "Comet", "Dolphin", "Ember", "Fox", "Gecko", "Harbor", "Iris",
    "Jaguar", "Kettle", "Lantern", "Maple", "Nomad", "Otter", "Pepper", "Quail", "Raven", "Sparrow",
    "Thistle", "Walrus", "Willow", "Yak", "Zebra", "Beacon", "Cactus", "Drifter", "Echo", "Ferret",
    "Glacier", "Heron", "Island", "Juniper", "Koala", "Lynx", "Meadow", "Nebula", "Orchid", "Pebble",
];

fn random_username(rng: &mut ChaCha8Rng, taken: &BTreeSet<String>) -> Option<String> {
    for _ in 0..64 {
        let a = NAME_FIRST.choose(rng)?;
        let b = NAME_SECOND.choose(rng)?;
        if a == b {
            continue;
        }
        let name = format!("{a}{b}");
        if !taken.contains(&name) {
            return Some(name);
        }
    }
    NAME_FIRST
        .iter()
        .flat_map(|a| NAME_SECOND.iter().map(move |b| format!("{a}{b}")))
        .find(|n| !taken.contains(n))
}

/// Top-level `{...}` spans in `text`, string-aware.
fn json_objects(text: &str) -> Vec<&str> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let (mut depth, mut start, mut in_str, mut escaped) = (0usize, 0usize, false, false);
    for (i, &b) in bytes.iter().enumerate() {
        if in_str {
            match b {
                _ if escaped => escaped = false,
                b'\\' => escaped = true,
                b'"' => in_str = false,
                _ => {}
            }
            continue;
        }
        match b {
            b'"' if depth > 0 => in_str = true,
            b'{' => {
                if depth == 0 {
                    start = i;
                }
                depth += 1;
            }
            b'}' if depth > 0 => {
                depth -= 1;
                if depth == 0 {
                    out.push(&text[start..=i]);
                }
            }
            _ => {}
        }
    }
    out
}

fn field<'a>(v: &'a Value, names: &[&str]) -> Option<&'a Value> {
    names.iter().find_map(|n| v.get(*n))
}

fn text_field(v: &Value, names: &[&str]) -> Option<String> {
    match field(v, names)? {
        Value::String(s) => Some(s.trim().to_string()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

/// Turn one generator record into a profile (without username checks).
pub fn parse_profile_record(v: &Value) -> Option<Profile> {
    let age = match field(v, &["age"])? {
        Value::Number(n) => n.as_u64()? as u32,
        Value::String(s) => s.trim().parse().ok()?,
        _ => return None,
    };
    let education = text_field(v, &["education"])?;
    Some(Profile {
        username: text_field(v, &["username"]).unwrap_or_default(),
        age,
        sex: Sex::parse_loose(&text_field(v, &["sex", "gender"])?)?,
        city_country: text_field(v, &["city_country", "location"])?,
        birth_city_country: text_field(v, &["birth_city_country", "place_of_birth", "birthplace"])?,
        education_category: EducationCategory::from_free_text(&education),
        education,
        occupation: text_field(v, &["occupation"])?,
        income: text_field(v, &["income"])?,
        income_level: IncomeLevel::parse_loose(&text_field(v, &["income_level"])?)?,
        relationship_status: RelationshipStatus::parse_loose(&text_field(
            v,
            &["relationship_status", "relationship"],
        )?)?,
        writing_style: text_field(v, &["writing_style", "style"]).unwrap_or_default(),
    })
}

/// Everything except the username and style, for duplicate detection.
fn attribute_key(p: &Profile) -> String {
    [
        p.age.to_string(),
        p.sex.to_string(),
        p.city_country.to_lowercase(),
        p.birth_city_country.to_lowercase(),
        p.education.to_lowercase(),
        p.occupation.to_lowercase(),
        p.income.to_lowercase(),
        p.income_level.to_string(),
        p.relationship_status.to_string(),
    ]
    .join("|")
}

/// Ask the generator for profiles until `spec.count` valid, unique ones are
/// collected.
pub async fn generate_profiles(spec: &ProfileBatchSpec, gateway: &Gateway) -> Result<Vec<Profile>, ProfileError> {
    if spec.count == 0 {
        return Err(ProfileError::InvalidSpec("count must be at least 1"));
    }
    if spec.few_shot_examples.is_empty() {
        return Err(ProfileError::InvalidSpec("at least one few-shot example is required"));
    }
    let template = prompts::template(prompts::PROFILE_GENERATION);
    let examples = spec.few_shot_examples.join("\n");
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, "usernames"));
    let mut out: Vec<Profile> = Vec::with_capacity(spec.count);
    let mut names = BTreeSet::new();
    let mut seen = BTreeSet::new();
    let mut stalled = 0;
    let mut batch = 0u64;
    while out.len() < spec.count {
        let want = (spec.count - out.len()).min(MAX_BATCH);
        let user = template
            .render(&slots([("count", want.to_string()), ("examples", examples.clone())]))
            .expect("profile template slots");
        let seed = derive_seed(spec.seed, &format!("profiles/{batch}"));
        batch += 1;
        let request = gateway.request(prompts::PROFILE_GENERATION, "", user, seed);
        let text = gateway.complete(&request).await?;
        let before = out.len();
        for raw in json_objects(&text) {
            if out.len() == spec.count {
                break;
            }
            let Some(mut profile) = serde_json::from_str::<Value>(raw).ok().as_ref().and_then(parse_profile_record)
            else {
                tracing::debug!("unparseable profile record: {raw}");
                continue;
            };
            if !is_valid_username(&profile.username) || names.contains(&profile.username) {
                match random_username(&mut rng, &names) {
                    Some(name) => profile.username = name,
                    None => continue,
                }
            }
            if let Err(e) = profile.validate() {
                tracing::debug!("rejected profile: {e}");
                continue;
            }
            if !seen.insert(attribute_key(&profile)) {
                tracing::debug!("duplicate profile dropped");
                continue;
            }
            names.insert(profile.username.clone());
            out.push(profile);
        }
        if out.len() == before {
            stalled += 1;
            if stalled > MAX_STALLED_BATCHES {
                return Err(ProfileError::GenerationStalled { batches: stalled });
            }
        } else {
            stalled = 0;
        }
    }
    Ok(out)
}

/// Attach a generated writing style to `profile`.
pub async fn enrich_writing_style(profile: &Profile, gateway: &Gateway, seed: u64) -> Result<Profile, ProfileError> {
    if !profile.writing_style.trim().is_empty() {
        return Err(ProfileError::AlreadyEnriched(profile.username.clone()));
    }
    let failed = |reason: String| ProfileError::StyleGenerationFailed {
        username: profile.username.clone(),
        reason,
    };
    let mut s = profile_slots(profile);
    s.insert("style_examples", STYLE_EXAMPLES.to_string());
    let user = prompts::template(prompts::WRITING_STYLE)
        .render(&s)
        .map_err(|e| failed(e.to_string()))?;
    let request = gateway.request(
        prompts::WRITING_STYLE,
        "",
        user,
        derive_seed(seed, &format!("style/{}", profile.username)),
    );
    let text = match gateway.complete(&request).await {
        Ok(t) => t,
        Err(GatewayError::Refusal { raw }) => return Err(failed(format!("refused: {raw}"))),
        Err(e) => return Err(e.into()),
    };
    let style = text.trim().trim_start_matches("user:").trim().to_string();
    if style.is_empty() {
        return Err(failed("empty response".into()));
    }
    Ok(Profile {
        writing_style: style,
        ..profile.clone()
    })
}

/// Enrich every profile lacking a style, concurrently up to the gateway cap.
/// Output order follows input order.
pub async fn enrich_all(profiles: &[Profile], gateway: &Gateway, seed: u64) -> Result<Vec<Profile>, ProfileError> {
    let jobs = profiles.iter().map(|p| async move {
        if p.writing_style.trim().is_empty() {
            enrich_writing_style(p, gateway, seed).await
        } else {
            Ok(p.clone())
        }
    });
    futures::future::join_all(jobs).await.into_iter().collect()
}

/// Income level for a yearly income in US dollars: <30k low, [30k, 60k)
/// middle, [60k, 150k) high, 150k and up very high.
pub fn income_level_for_usd(amount_usd: f64) -> Result<IncomeLevel, ProfileError> {
    if amount_usd.is_nan() || amount_usd < 0.0 {
        return Err(ProfileError::Domain(amount_usd));
    }
    Ok(if amount_usd < 30_000.0 {
        IncomeLevel::Low
    } else if amount_usd < 60_000.0 {
        IncomeLevel::Middle
    } else if amount_usd < 150_000.0 {
        IncomeLevel::High
    } else {
        IncomeLevel::VeryHigh
    })
}

/// Distribution of exact attribute overlap between profiles, for overlap
/// values 0 through 8.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapHistogram {
    /// Each profile's maximum overlap with any other profile, normalized.
    pub per_profile_max: BTreeMap<usize, f64>,
    /// Overlap of every unordered pair, normalized.
    pub pairwise: BTreeMap<usize, f64>,
}

/// Number of the 8 attributes on which two profiles agree exactly.
pub fn attribute_overlap(a: &Profile, b: &Profile) -> usize {
    Attribute::ALL
        .iter()
        .filter(|&&attr| a.attribute_value(attr) == b.attribute_value(attr))
        .count()
}

pub fn overlap_histogram(profiles: &[Profile]) -> Result<OverlapHistogram, ProfileError> {
    let n = profiles.len();
    if n < 2 {
        return Err(ProfileError::TooFewProfiles(n));
    }
    let mut best = vec![0usize; n];
    let mut pairwise = [0usize; 9];
    for i in 0..n {
        for j in i + 1..n {
            let k = attribute_overlap(&profiles[i], &profiles[j]);
            pairwise[k] += 1;
            best[i] = best[i].max(k);
            best[j] = best[j].max(k);
        }
    }
    let mut per_profile = [0usize; 9];
    for k in best {
        per_profile[k] += 1;
    }
    let pairs = (n * (n - 1) / 2) as f64;
    let normalize = |counts: [usize; 9], total: f64| -> BTreeMap<usize, f64> {
        counts.iter().enumerate().map(|(k, &c)| (k, c as f64 / total)).collect()
    };
    Ok(OverlapHistogram {
        per_profile_max: normalize(per_profile, n as f64),
        pairwise: normalize(pairwise, pairs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gateway::{MockBackend, MockScript};
    use crate::model::sample_profile;
    use std::sync::Arc;

    fn scripted(responses: &[&str]) -> Gateway {
        let script = MockScript::default().with(prompts::PROFILE_GENERATION, responses.iter().copied());
        Gateway::new(Arc::new(MockBackend::scripted(script)))
    }

    #[test]
    fn income_thresholds() {
        assert_eq!(income_level_for_usd(25_000.0).unwrap(), IncomeLevel::Low);
        assert_eq!(income_level_for_usd(30_000.0).unwrap(), IncomeLevel::Middle);
        assert_eq!(income_level_for_usd(60_000.0).unwrap(), IncomeLevel::High);
        assert_eq!(income_level_for_usd(150_000.0).unwrap(), IncomeLevel::VeryHigh);
        assert!(matches!(income_level_for_usd(-1.0), Err(ProfileError::Domain(_))));
    }

    #[tokio::test]
    async fn three_valid_records() {
        let gw = scripted(&[&FEW_SHOT_PROFILES[..3].join("\n")]);
        let out = generate_profiles(&ProfileBatchSpec::new(3, 1), &gw).await.unwrap();
        assert_eq!(out.len(), 3);
        let names: BTreeSet<_> = out.iter().map(|p| &p.username).collect();
        assert_eq!(names.len(), 3);
        assert!(out.iter().all(|p| p.validate().is_ok()));
    }

    #[tokio::test]
    async fn minors_rejected_and_duplicates_dropped() {
        let minor = FEW_SHOT_PROFILES[0].replace("\"age\": 34", "\"age\": 14");
        let batch = format!("{minor}\n{}\n{}", FEW_SHOT_PROFILES[1], FEW_SHOT_PROFILES[1]);
        let gw = scripted(&[&batch, FEW_SHOT_PROFILES[2]]);
        let out = generate_profiles(&ProfileBatchSpec::new(2, 5), &gw).await.unwrap();
        assert_eq!(out.len(), 2);
        assert!(out.iter().all(|p| p.age >= 18));
        assert_ne!(attribute_key(&out[0]), attribute_key(&out[1]));
    }

    #[tokio::test]
    async fn stalls_on_garbage() {
        let gw = scripted(&["sorry, no JSON here"]);
        let err = generate_profiles(&ProfileBatchSpec::new(2, 5), &gw).await.unwrap_err();
        assert!(matches!(err, ProfileError::GenerationStalled { batches: 6 }));
    }

    #[tokio::test]
    async fn builtin_mock_generates_valid_pool() {
        let out = generate_profiles(&ProfileBatchSpec::new(60, 42), &Gateway::mock()).await.unwrap();
        assert_eq!(out.len(), 60);
        assert!(out.iter().all(|p| p.validate().is_ok()));
    }

    #[tokio::test]
    async fn style_enrichment() {
        let mut p = sample_profile("SpiralSphinx");
        p.writing_style.clear();
        let gw = Gateway::mock();
        let enriched = enrich_writing_style(&p, &gw, 1).await.unwrap();
        assert!(enriched.writing_style.starts_with("Your writing style"));
        assert!(matches!(
            enrich_writing_style(&enriched, &gw, 1).await,
            Err(ProfileError::AlreadyEnriched(_))
        ));
    }

    #[test]
    fn overlap_extremes() {
        let a = sample_profile("SpiralSphinx");
        let h = overlap_histogram(&[a.clone(), a.clone()]).unwrap();
        assert_eq!(h.per_profile_max[&8], 1.0);
        let mut b = a.clone();
        b.age = 70;
        b.sex = Sex::Female;
        b.city_country = "Lima, Peru".into();
        b.birth_city_country = "Cusco, Peru".into();
        b.education_category = EducationCategory::HighSchool;
        b.occupation = "baker".into();
        b.relationship_status = RelationshipStatus::Widowed;
        b.income_level = IncomeLevel::Low;
        let h = overlap_histogram(&[a, b]).unwrap();
        assert_eq!(h.per_profile_max[&0], 1.0);
        assert_eq!(h.pairwise[&0], 1.0);
    }
}
