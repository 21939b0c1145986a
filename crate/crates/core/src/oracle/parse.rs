use std::collections::BTreeMap;

use crate::model::{Attribute, AttributeTag, CoarseHardness, TagSource, TagVerdict};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("tagging response has no Guess section")]
pub struct TagParseError {
    pub raw: String,
}

/// Tags read from one response, plus the feature names that were dropped
/// because they are not among the eight attributes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParsedTags {
    pub tags: Vec<AttributeTag>,
    pub dropped: Vec<String>,
}

const LABELS: [&str; 4] = ["Reasoning:", "Guess:", "Certainty:", "Hardness:"];

/// Body of the last `label` section, up to the next section label.
fn section<'a>(text: &'a str, label: &str) -> Option<&'a str> {
    let start = text.rfind(label)? + label.len();
    let rest = &text[start..];
    let end = LABELS
        .iter()
        .filter_map(|l| rest.find(l))
        .min()
        .unwrap_or(rest.len());
    Some(rest[..end].trim())
}

fn clean(s: &str) -> &str {
    s.trim()
        .trim_matches(|c: char| c == '[' || c == ']' || c == '"' || c == '\'' || c == '.' || c == '*')
        .trim()
}

enum Head<'a> {
    Known(Attribute, &'a str),
    Unknown(&'a str),
    Value,
}

/// Whether `item` opens a new `feature - value` entry.
fn head(item: &str) -> Head<'_> {
    let Some((left, right)) = item.split_once('-') else {
        return Head::Value;
    };
    let name = clean(left);
    if let Some(attr) = Attribute::normalize(name) {
        return Head::Known(attr, right);
    }
    let identifier = !name.is_empty()
        && name.chars().all(|c| c.is_ascii_lowercase() || c == '_')
        && left.ends_with(' ');
    if identifier {
        Head::Unknown(name)
    } else {
        Head::Value
    }
}

fn is_none(s: &str) -> bool {
    clean(s).eq_ignore_ascii_case("none")
}

/// `feature - value` pairs of a Certainty or Hardness section.
fn scored(section: Option<&str>) -> BTreeMap<Attribute, String> {
    let mut out = BTreeMap::new();
    for item in section.unwrap_or("").split([';', '\n', ',']) {
        if let Head::Known(attr, value) = head(item) {
            out.entry(attr).or_insert_with(|| clean(value).to_lowercase());
        }
    }
    out
}

/// Parse a tagging response into model-source tags.
pub fn parse_tagging(text: &str) -> Result<ParsedTags, TagParseError> {
    let guess = section(text, "Guess:").ok_or_else(|| TagParseError { raw: text.to_string() })?;
    let mut parsed = ParsedTags::default();
    if is_none(guess) {
        return Ok(parsed);
    }
    // Feature order as it appears, with accumulated values.
    let mut order: Vec<Attribute> = Vec::new();
    let mut values: BTreeMap<Attribute, Vec<String>> = BTreeMap::new();
    let mut current: Option<Attribute> = None;
    for item in guess.split([';', '\n']) {
        let value = match head(item) {
            Head::Known(attr, rest) => {
                if values.contains_key(&attr) {
                    current = None;
                    continue;
                }
                order.push(attr);
                values.insert(attr, Vec::new());
                current = Some(attr);
                rest
            }
            Head::Unknown(name) => {
                tracing::warn!("dropping guess for unknown feature `{name}`");
                parsed.dropped.push(name.to_string());
                current = None;
                continue;
            }
            Head::Value => item,
        };
        let value = clean(value);
        if let Some(attr) = current {
            if !value.is_empty() && !is_none(value) {
                values.get_mut(&attr).expect("inserted above").push(value.to_string());
            }
        }
    }
    let certainty = scored(section(text, "Certainty:"));
    let hardness = scored(section(text, "Hardness:"));
    for attr in order {
        let mut guesses = values.remove(&attr).unwrap_or_default();
        if guesses.is_empty() {
            continue;
        }
        guesses.truncate(3);
        let certainty = certainty
            .get(&attr)
            .and_then(|c| c.chars().find(|ch| ch.is_ascii_digit()))
            .and_then(|d| d.to_digit(10))
            .map(|d| d.clamp(1, 5) as u8)
            .unwrap_or(1);
        parsed.tags.push(AttributeTag {
            attribute: attr,
            guesses,
            certainty,
            hardness_coarse: hardness.get(&attr).and_then(|h| CoarseHardness::parse(h)),
            hardness_fine: None,
            source: TagSource::Model,
            verdict: Some(TagVerdict::Pending),
        });
    }
    Ok(parsed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn none_is_empty() {
        assert!(parse_tagging("Reasoning: nothing\nGuess: None").unwrap().tags.is_empty());
        assert!(parse_tagging("Guess: None.\nCertainty: None\nHardness: None").unwrap().tags.is_empty());
    }

    #[test]
    fn single_line_format() {
        let p = parse_tagging("Guess: sex - Male; Male; Male Certainty: sex - 4 Hardness: sex - indirect").unwrap();
        assert_eq!(p.tags.len(), 1);
        let t = &p.tags[0];
        assert_eq!(t.attribute, Attribute::Sex);
        assert_eq!(t.guesses, vec!["Male", "Male", "Male"]);
        assert_eq!(t.certainty, 4);
        assert_eq!(t.hardness_coarse, Some(CoarseHardness::Indirect));
    }

    #[test]
    fn several_features() {
        let text = "Reasoning: trams and lakes.\nGuess: city_country - Zurich, Switzerland; Geneva, Switzerland; Bern, Switzerland; occupation - research scientist; lab technician; PhD student\nCertainty: city_country - 3; occupation - 2\nHardness: city_country - indirect; occupation - complicated";
        let p = parse_tagging(text).unwrap();
        assert_eq!(p.tags.len(), 2);
        assert_eq!(p.tags[0].guesses[0], "Zurich, Switzerland");
        assert_eq!(p.tags[1].attribute, Attribute::Occupation);
        assert_eq!(p.tags[1].guesses.len(), 3);
        assert_eq!(p.tags[1].hardness_coarse, Some(CoarseHardness::Complicated));
    }

    #[test]
    fn unknown_feature_dropped() {
        let p = parse_tagging("Guess: hobby - chess\nCertainty: hobby - 3\nHardness: hobby - direct").unwrap();
        assert!(p.tags.is_empty());
        assert_eq!(p.dropped, vec!["hobby"]);
    }

    #[test]
    fn ranges_and_last_guess_label() {
        let text = "Reasoning: The Guess: label appears in the example.\nGuess: age - 25-30; 30; 35\nCertainty: age - 2\nHardness: age - complicated";
        let p = parse_tagging(text).unwrap();
        assert_eq!(p.tags[0].guesses, vec!["25-30", "30", "35"]);
    }

    #[test]
    fn missing_guess_is_error() {
        assert!(parse_tagging("Reasoning: I can't tell").is_err());
    }
}
