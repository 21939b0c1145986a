use std::collections::BTreeMap;

/// A prompt body with `{slot}` placeholders.
///
/// Slot names are `[a-z0-9_]+`; any other brace usage is kept literally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptTemplate {
    pub name: String,
    pub body: String,
    pub required_slots: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TemplateError {
    #[error("template `{template}` is missing slot `{slot}`")]
    MissingSlot { template: String, slot: String },
}

impl TemplateError {
    pub fn slot(&self) -> &str {
        match self {
            TemplateError::MissingSlot { slot, .. } => slot,
        }
    }
}

enum Piece<'a> {
    Text(&'a str),
    Slot(&'a str),
}

fn is_slot_char(c: u8) -> bool {
    c.is_ascii_lowercase() || c.is_ascii_digit() || c == b'_'
}

fn pieces(body: &str) -> Vec<Piece<'_>> {
    let bytes = body.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'{' {
            let mut j = i + 1;
            while j < bytes.len() && is_slot_char(bytes[j]) {
                j += 1;
            }
            if j > i + 1 && j < bytes.len() && bytes[j] == b'}' {
                if start < i {
                    out.push(Piece::Text(&body[start..i]));
                }
                out.push(Piece::Slot(&body[i + 1..j]));
                i = j + 1;
                start = i;
                continue;
            }
        }
        i += 1;
    }
    if start < body.len() {
        out.push(Piece::Text(&body[start..]));
    }
    out
}

impl PromptTemplate {
    pub fn new(name: impl Into<String>, body: impl Into<String>) -> Self {
        let body = body.into();
        let mut required_slots: Vec<String> = Vec::new();
        for piece in pieces(&body) {
            if let Piece::Slot(s) = piece {
                if !required_slots.iter().any(|r| r == s) {
                    required_slots.push(s.to_string());
                }
            }
        }
        Self {
            name: name.into(),
            body,
            required_slots,
        }
    }

    /// Substitute every slot in a single pass. Slot values are inserted
    /// verbatim and never re-scanned; extra entries in `slots` are ignored.
    pub fn render<V: AsRef<str>>(&self, slots: &BTreeMap<&str, V>) -> Result<String, TemplateError> {
        let mut out = String::with_capacity(self.body.len());
        for piece in pieces(&self.body) {
            match piece {
                Piece::Text(t) => out.push_str(t),
                Piece::Slot(s) => match slots.get(s) {
                    Some(v) => out.push_str(v.as_ref()),
                    None => {
                        return Err(TemplateError::MissingSlot {
                            template: self.name.clone(),
                            slot: s.to_string(),
                        })
                    }
                },
            }
        }
        Ok(out)
    }
}

/// Build a slot map from `(name, value)` pairs.
pub fn slots<'a, I, V>(pairs: I) -> BTreeMap<&'a str, String>
where
    I: IntoIterator<Item = (&'a str, V)>,
    V: ToString,
{
    pairs.into_iter().map(|(k, v)| (k, v.to_string())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_seeded_agent_line() {
        let t = PromptTemplate::new("t", "You are a {age} year old {sex}");
        let out = t.render(&slots([("age", "35"), ("sex", "male")])).unwrap();
        assert_eq!(out, "You are a 35 year old male");
    }

    #[test]
    fn no_slots_unchanged() {
        let t = PromptTemplate::new("t", "plain {Not A Slot} and {} text");
        assert!(t.required_slots.is_empty());
        let out = t.render(&BTreeMap::<&str, String>::new()).unwrap();
        assert_eq!(out, t.body);
    }

    #[test]
    fn missing_slot_named() {
        let t = PromptTemplate::new("t", "in {city}, {country}");
        let err = t.render(&slots([("country", "France")])).unwrap_err();
        assert_eq!(err.slot(), "city");
    }

    #[test]
    fn values_not_rescanned_and_extras_ignored() {
        let t = PromptTemplate::new("t", "[{a}]");
        let out = t.render(&slots([("a", "{b}"), ("b", "x"), ("zzz", "y")])).unwrap();
        assert_eq!(out, "[{b}]");
    }
}
