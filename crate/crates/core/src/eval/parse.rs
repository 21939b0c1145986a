use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::gateway::prompts::{self, GUESS_EXTRACTION_SYSTEM};
use crate::gateway::{slots, Gateway};
use crate::model::Attribute;

/// One attribute prediction read from an inference answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub username: String,
    pub attribute: Attribute,
    /// At most three, most confident first. Empty iff `unparsed`.
    pub guesses: Vec<String>,
    pub inference_text: String,
    pub model_id: String,
    #[serde(default)]
    pub unparsed: bool,
}

static BLOCK_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?im)^[\s*#]*Type\s*:\s*\**\s*([A-Za-z _\-]+?)\s*\**\s*$").unwrap()
});
static FIELD_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?im)^[\s*#]*(Inference|Guess)\s*:\s*\**\s*(.*)$").unwrap());

/// A block as read by the pattern pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawBlock {
    pub attribute: Attribute,
    pub inference: String,
    /// `None` when the block has no usable guess line.
    pub guesses: Option<Vec<String>>,
}

fn split_guesses(line: &str) -> Vec<String> {
    line.split(';')
        .map(|g| g.trim().trim_end_matches('.').trim().trim_matches('"').trim().to_string())
        .filter(|g| !g.is_empty() && !g.eq_ignore_ascii_case("none"))
        .take(3)
        .collect()
}

/// Pattern pass over Type/Inference/Guess blocks. Blocks naming unknown
/// attributes are skipped; a repeated attribute keeps its first block.
pub fn parse_blocks(text: &str) -> Vec<RawBlock> {
    let heads: Vec<(usize, usize, &str)> = BLOCK_RE
        .captures_iter(text)
        .map(|c| {
            let m = c.get(0).unwrap();
            (m.start(), m.end(), c.get(1).unwrap().as_str())
        })
        .collect();
    let mut out: Vec<RawBlock> = Vec::new();
    for (i, (_, end, name)) in heads.iter().enumerate() {
        let Some(attribute) = Attribute::normalize(name) else { continue };
        if out.iter().any(|b| b.attribute == attribute) {
            continue;
        }
        let stop = heads.get(i + 1).map_or(text.len(), |h| h.0);
        let body = &text[*end..stop];
        let mut inference = String::new();
        let mut guesses = None;
        for c in FIELD_RE.captures_iter(body) {
            let value = c[2].trim();
            if c[1].eq_ignore_ascii_case("inference") {
                inference = value.to_string();
            } else if guesses.is_none() {
                let g = split_guesses(value);
                if !g.is_empty() {
                    guesses = Some(g);
                }
            }
        }
        out.push(RawBlock { attribute, inference, guesses });
    }
    out
}

/// Parse an inference answer for the `expected` attributes. Attributes whose
/// block is missing or malformed go through one model-aided extraction call
/// when a gateway is given; anything still missing is marked unparsed.
pub async fn parse_inference(
    text: &str,
    expected: &[Attribute],
    username: &str,
    model_id: &str,
    fallback: Option<&Gateway>,
    seed: u64,
) -> Vec<PredictionRecord> {
    if text.trim().is_empty() {
        return Vec::new();
    }
    let mut blocks = parse_blocks(text);
    let missing = |blocks: &[RawBlock]| -> Vec<Attribute> {
        expected
            .iter()
            .copied()
            .filter(|a| !blocks.iter().any(|b| b.attribute == *a && b.guesses.is_some()))
            .collect()
    };
    let still = missing(&blocks);
    if let (false, Some(gw)) = (still.is_empty(), fallback) {
        let features = still.iter().map(|a| a.as_str()).collect::<Vec<_>>().join(", ");
        let user = prompts::template(prompts::GUESS_EXTRACTION)
            .render(&slots([("features", features.as_str()), ("answer", text)]))
            .expect("guess extraction slots are fixed");
        let req = gw.request(prompts::GUESS_EXTRACTION, GUESS_EXTRACTION_SYSTEM, user, seed);
        match gw.complete(&req).await {
            Ok(answer) => {
                for b in parse_blocks(&answer) {
                    if !still.contains(&b.attribute) || b.guesses.is_none() {
                        continue;
                    }
                    blocks.retain(|x| x.attribute != b.attribute);
                    blocks.push(b);
                }
            }
            Err(e) => tracing::warn!(%username, "guess extraction failed: {e}"),
        }
    }
    expected
        .iter()
        .map(|a| {
            let block = blocks.iter().find(|b| b.attribute == *a);
            let guesses = block.and_then(|b| b.guesses.clone()).unwrap_or_default();
            PredictionRecord {
                username: username.to_string(),
                attribute: *a,
                unparsed: guesses.is_empty(),
                guesses,
                inference_text: block.map(|b| b.inference.clone()).unwrap_or_default(),
                model_id: model_id.to_string(),
            }
        })
        .collect()
}
