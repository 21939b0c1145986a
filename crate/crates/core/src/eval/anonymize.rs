use std::sync::LazyLock;
use std::time::Duration;

use async_trait::async_trait;
use regex::Regex;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::gazetteer::place_names;

/// Spans below this confidence are left in place.
pub const MIN_CONFIDENCE: f64 = 0.4;

/// Entity categories that get masked. `Quantity` only for the subcategories
/// in [`MASKED_QUANTITIES`].
pub const MASKED_CATEGORIES: &[&str] = &[
    "Person",
    "PersonType",
    "Location",
    "Organization",
    "Event",
    "Address",
    "PhoneNumber",
    "Email",
    "URL",
    "IP",
    "DateTime",
    "Quantity",
];
pub const MASKED_QUANTITIES: &[&str] = &["Age", "Currency", "Number"];

/// A detected entity. Offsets and lengths count Unicode scalar values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntitySpan {
    pub offset: usize,
    pub length: usize,
    pub category: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subcategory: Option<String>,
    pub confidence: f64,
}

impl EntitySpan {
    pub fn is_masked(&self) -> bool {
        self.confidence >= MIN_CONFIDENCE
            && MASKED_CATEGORIES.contains(&self.category.as_str())
            && (self.category != "Quantity"
                || self.subcategory.as_deref().is_some_and(|s| MASKED_QUANTITIES.contains(&s)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaskStyle {
    /// Every masked character becomes `*`.
    #[default]
    PerCharacter,
    /// Each masked entity collapses to a single `*`.
    PerEntity,
}

/// Replace the masked spans of `text`. Overlapping spans are merged.
pub fn mask(text: &str, spans: &[EntitySpan], style: MaskStyle) -> String {
    let chars: Vec<char> = text.chars().collect();
    let mut hidden = vec![false; chars.len()];
    let mut starts = vec![false; chars.len()];
    for s in spans.iter().filter(|s| s.is_masked()) {
        let end = (s.offset + s.length).min(chars.len());
        if s.offset >= end {
            continue;
        }
        starts[s.offset] = true;
        hidden[s.offset..end].iter_mut().for_each(|h| *h = true);
    }
    let mut out = String::with_capacity(text.len());
    for (i, c) in chars.iter().enumerate() {
        if !hidden[i] {
            out.push(*c);
        } else if style == MaskStyle::PerCharacter || i == 0 || !hidden[i - 1] {
            out.push('*');
        }
    }
    out
}

#[async_trait]
pub trait Anonymizer: Send + Sync {
    fn name(&self) -> &str;

    fn style(&self) -> MaskStyle {
        MaskStyle::PerCharacter
    }

    async fn detect(&self, text: &str) -> Result<Vec<EntitySpan>, String>;

    async fn anonymize(&self, text: &str) -> Result<String, String> {
        Ok(mask(text, &self.detect(text).await?, self.style()))
    }
}

static EMAIL_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"[\w.+-]+@[\w-]+(?:\.[\w-]+)+").unwrap());
static URL_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\b(?:https?://|www\.)[^\s]+|\b/?r/\w+").unwrap());
static IP_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\b\d{1,3}(?:\.\d{1,3}){3}\b").unwrap());
static PHONE_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\+?\(?\d{2,4}\)?(?:[ -]\d{2,4}){2,4}\b").unwrap());
static DATE_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"(?i)\b(?:\d{1,4}[/.-]\d{1,2}[/.-]\d{1,4}|(?:jan|feb|mar|apr|may|jun|jul|aug|sep|sept|oct|nov|dec)[a-z]*\.? \d{1,2}(?:st|nd|rd|th)?(?:,? \d{4})?|(?:19|20)\d{2}s?)\b",
    )
    .unwrap()
});
static NUMBER_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"[$€£¥]?\d+(?:[.,]\d+)*(?:k\b|%)?").unwrap());
static PLACE_RE: LazyLock<Regex> = LazyLock::new(|| {
    let alts = place_names().iter().map(|n| regex::escape(n)).collect::<Vec<_>>().join("|");
    Regex::new(&format!(r"(?i)\b(?:{alts})\b")).unwrap()
});

/// Offline anonymizer: gazetteer places plus email, URL, IP, phone, date and
/// number patterns. Each entity collapses to one `*`, which no rule matches,
/// so applying it twice changes nothing.
#[derive(Debug, Clone, Copy, Default)]
pub struct RuleBasedAnonymizer;

impl RuleBasedAnonymizer {
    pub fn spans(text: &str) -> Vec<EntitySpan> {
        let rules: [(&Regex, &str, Option<&str>); 7] = [
            (&EMAIL_RE, "Email", None),
            (&URL_RE, "URL", None),
            (&IP_RE, "IP", None),
            (&PHONE_RE, "PhoneNumber", None),
            (&DATE_RE, "DateTime", None),
            (&PLACE_RE, "Location", None),
            (&NUMBER_RE, "Quantity", Some("Number")),
        ];
        let mut out = Vec::new();
        for (re, category, sub) in rules {
            for m in re.find_iter(text) {
                out.push(EntitySpan {
                    offset: text[..m.start()].chars().count(),
                    length: m.as_str().chars().count(),
                    category: category.into(),
                    subcategory: sub.map(str::to_string),
                    confidence: 1.0,
                });
            }
        }
        out.sort_by_key(|s| (s.offset, std::cmp::Reverse(s.length)));
        out
    }

    /// Masks until nothing matches. A single pass can expose new word
    /// boundaries (`0Zurich` becomes `*Zurich`), so it repeats; every
    /// changing pass shortens the text or turns a character into `*`.
    pub fn anonymize(text: &str) -> String {
        let mut cur = text.to_string();
        loop {
            let next = mask(&cur, &Self::spans(&cur), MaskStyle::PerEntity);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }
}

#[async_trait]
impl Anonymizer for RuleBasedAnonymizer {
    fn name(&self) -> &str {
        "rule_based"
    }

    fn style(&self) -> MaskStyle {
        MaskStyle::PerEntity
    }

    async fn detect(&self, text: &str) -> Result<Vec<EntitySpan>, String> {
        Ok(Self::spans(text))
    }

    async fn anonymize(&self, text: &str) -> Result<String, String> {
        Ok(Self::anonymize(text))
    }
}

/// Settings for an Azure-style PII recognition endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HttpAnonymizerConfig {
    /// Resource endpoint, e.g. `https://<name>.cognitiveservices.azure.com`.
    pub endpoint: String,
    pub api_key_env: String,
    pub api_version: String,
    pub language: String,
    pub timeout_secs: u64,
}

impl Default for HttpAnonymizerConfig {
    fn default() -> Self {
        Self {
            endpoint: String::new(),
            api_key_env: "AZURE_LANGUAGE_KEY".into(),
            api_version: "2023-04-01".into(),
            language: "en".into(),
            timeout_secs: 30,
        }
    }
}

/// Client for the Azure Language PII entity recognition API.
pub struct HttpAnonymizer {
    client: reqwest::Client,
    url: String,
    key: Option<String>,
    language: String,
}

impl std::fmt::Debug for HttpAnonymizer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HttpAnonymizer").field("url", &self.url).finish_non_exhaustive()
    }
}

impl HttpAnonymizer {
    pub fn new(cfg: &HttpAnonymizerConfig) -> Result<Self, String> {
        if cfg.endpoint.is_empty() {
            return Err("anonymizer endpoint is not configured".into());
        }
        let client = reqwest::Client::builder()
            .timeout(Duration::from_secs(cfg.timeout_secs.max(1)))
            .build()
            .map_err(|e| e.to_string())?;
        Ok(Self {
            client,
            url: format!(
                "{}/language/:analyze-text?api-version={}",
                cfg.endpoint.trim_end_matches('/'),
                cfg.api_version
            ),
            key: std::env::var(&cfg.api_key_env).ok().filter(|k| !k.is_empty()),
            language: cfg.language.clone(),
        })
    }
}

fn parse_entities(body: &Value) -> Result<Vec<EntitySpan>, String> {
    let doc = &body["results"]["documents"][0];
    if let Some(err) = body["results"]["errors"].as_array().and_then(|e| e.first()) {
        return Err(format!("service error: {err}"));
    }
    let entities = doc["entities"].as_array().ok_or_else(|| format!("no entities in response: {body}"))?;
    entities
        .iter()
        .map(|e| {
            Ok(EntitySpan {
                offset: e["offset"].as_u64().ok_or("entity without offset")? as usize,
                length: e["length"].as_u64().ok_or("entity without length")? as usize,
                category: e["category"].as_str().unwrap_or_default().to_string(),
                subcategory: e["subcategory"].as_str().map(str::to_string),
                confidence: e["confidenceScore"].as_f64().unwrap_or(0.0),
            })
        })
        .collect::<Result<_, &str>>()
        .map_err(str::to_string)
}

#[async_trait]
impl Anonymizer for HttpAnonymizer {
    fn name(&self) -> &str {
        "http"
    }

    async fn detect(&self, text: &str) -> Result<Vec<EntitySpan>, String> {
        let body = json!({
            "kind": "PiiEntityRecognition",
            "parameters": {"modelVersion": "latest", "stringIndexType": "UnicodeCodePoint"},
            "analysisInput": {"documents": [{"id": "1", "language": self.language, "text": text}]},
        });
        let mut req = self.client.post(&self.url).json(&body);
        if let Some(k) = &self.key {
            req = req.header("Ocp-Apim-Subscription-Key", k);
        }
        let resp = req.send().await.map_err(|e| e.to_string())?;
        let status = resp.status();
        let text = resp.text().await.map_err(|e| e.to_string())?;
        if !status.is_success() {
            return Err(format!("{status}: {text}"));
        }
        let v: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        parse_entities(&v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnonymizedComment {
    pub text: String,
    /// The configured anonymizer failed and the rule-based one was used.
    pub fell_back: bool,
}

/// Anonymize each comment; a failure falls back to the rule-based
/// anonymizer for that comment alone.
pub async fn anonymize_comments(comments: &[String], anonymizer: &dyn Anonymizer) -> Vec<AnonymizedComment> {
    let futs = comments.iter().map(|c| async move {
        match anonymizer.anonymize(c).await {
            Ok(text) => AnonymizedComment { text, fell_back: false },
            Err(e) => {
                tracing::warn!(anonymizer = anonymizer.name(), "anonymization failed, using rules: {e}");
                AnonymizedComment { text: RuleBasedAnonymizer::anonymize(c), fell_back: true }
            }
        }
    });
    futures::future::join_all(futs).await
}
