use std::fmt;

use serde::{Deserialize, Serialize};

use super::Attribute;

pub const MIN_AGE: u32 = 18;
pub const MAX_AGE: u32 = 99;

macro_rules! label_enum {
    (
        $(#[$meta:meta])*
        pub enum $name:ident { $($variant:ident => $label:literal),+ $(,)? }
    ) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $label)] $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub const fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $label),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

label_enum! {
    pub enum Sex {
        Male => "male",
        Female => "female",
    }
}

label_enum! {
    /// Highest obtained degree, derived from the free-text education field.
    pub enum EducationCategory {
        HighSchool => "high school",
        College => "college degree",
        Masters => "master's degree",
        Phd => "PhD",
    }
}

label_enum! {
    pub enum IncomeLevel {
        Low => "low",
        Middle => "middle",
        High => "high",
        VeryHigh => "very high",
    }
}

label_enum! {
    pub enum RelationshipStatus {
        Single => "single",
        InRelationship => "in relationship",
        Married => "married",
        Divorced => "divorced",
        Widowed => "widowed",
        Engaged => "engaged",
    }
}

fn squash(s: &str) -> String {
    s.trim()
        .trim_end_matches(['.', '!', ','])
        .to_lowercase()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

impl Sex {
    pub fn parse_loose(s: &str) -> Option<Sex> {
        match squash(s).as_str() {
            "male" | "m" | "man" | "boy" => Some(Sex::Male),
            "female" | "f" | "woman" | "girl" => Some(Sex::Female),
            _ => None,
        }
    }
}

impl IncomeLevel {
    pub fn parse_loose(s: &str) -> Option<IncomeLevel> {
        let s = squash(s);
        // "High (60-150k USD)" style answers carry the bracket; drop it.
        let head = s.split('(').next().unwrap_or("").trim();
        let head = head.strip_suffix(" income").unwrap_or(head);
        match head {
            "low" | "no income" => Some(IncomeLevel::Low),
            "middle" | "medium" | "mid" => Some(IncomeLevel::Middle),
            "high" => Some(IncomeLevel::High),
            "very high" | "veryhigh" | "very_high" => Some(IncomeLevel::VeryHigh),
            _ => None,
        }
    }
}

impl RelationshipStatus {
    pub fn parse_loose(s: &str) -> Option<RelationshipStatus> {
        match squash(s).replace('_', " ").as_str() {
            "single" => Some(RelationshipStatus::Single),
            "in relationship" | "in a relationship" | "relationship" | "dating" => {
                Some(RelationshipStatus::InRelationship)
            }
            "married" => Some(RelationshipStatus::Married),
            "divorced" => Some(RelationshipStatus::Divorced),
            "widowed" | "widow" | "widower" => Some(RelationshipStatus::Widowed),
            "engaged" => Some(RelationshipStatus::Engaged),
            _ => None,
        }
    }
}

impl EducationCategory {
    /// Keyword mapping from free-text education to the categorical scale.
    ///
    /// phd/doctorate -> PhD; master -> master's; bachelor/college/BSc/BA ->
    /// college degree; anything else -> high school. Phrases describing an
    /// ongoing degree ("in college", "studying towards") fall back to the
    /// level below, since the scale records the highest obtained degree.
    pub fn from_free_text(text: &str) -> EducationCategory {
        let lower = text.to_lowercase();
        let words: Vec<&str> = lower
            .split(|c: char| !c.is_alphanumeric() && c != '\'')
            .filter(|w| !w.is_empty())
            .collect();
        let has = |needle: &str| lower.contains(needle);
        let has_word = |w: &str| words.contains(&w);
        let in_progress = has("in college")
            || has("studying")
            || has("currently pursuing")
            || has("student")
            || has("in highschool")
            || has("in high school");

        if (has("phd") || has("ph.d") || has("doctorate") || has("doctoral") || has_word("dphil"))
            && !in_progress
        {
            return EducationCategory::Phd;
        }
        if (has("master") || has_word("msc") || has_word("mba") || has_word("ma") || has_word("meng"))
            && !in_progress
        {
            return EducationCategory::Masters;
        }
        if (has("bachelor")
            || has("college degree")
            || has_word("bsc")
            || has_word("ba")
            || has_word("bs")
            || has_word("beng")
            || has("undergraduate degree")
            || has("degree"))
            && !in_progress
        {
            return EducationCategory::College;
        }
        if in_progress && (has("master") || has("phd") || has("doctor")) {
            return EducationCategory::College;
        }
        EducationCategory::HighSchool
    }

    pub fn parse_loose(s: &str) -> Option<EducationCategory> {
        let sq = squash(s);
        if sq.is_empty() {
            return None;
        }
        Some(EducationCategory::from_free_text(&sq))
    }
}

/// A synthetic person seeding one agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub username: String,
    pub age: u32,
    pub sex: Sex,
    pub city_country: String,
    pub birth_city_country: String,
    pub education: String,
    pub education_category: EducationCategory,
    pub occupation: String,
    pub income: String,
    pub income_level: IncomeLevel,
    pub relationship_status: RelationshipStatus,
    #[serde(default)]
    pub writing_style: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProfileInvalid {
    #[error("age {0} outside [{MIN_AGE}, {MAX_AGE}]")]
    Age(u32),
    #[error("username `{0}` is not two capitalized words")]
    Username(String),
    #[error("field `{0}` is empty")]
    EmptyField(&'static str),
    #[error("location `{0}` is not of the form \"City, Country\"")]
    Location(String),
}

impl Profile {
    /// Mechanical checks every emitted profile must pass.
    pub fn validate(&self) -> Result<(), ProfileInvalid> {
        if !(MIN_AGE..=MAX_AGE).contains(&self.age) {
            return Err(ProfileInvalid::Age(self.age));
        }
        if !is_valid_username(&self.username) {
            return Err(ProfileInvalid::Username(self.username.clone()));
        }
        for (name, value) in [
            ("education", &self.education),
            ("occupation", &self.occupation),
            ("income", &self.income),
        ] {
            if value.trim().is_empty() {
                return Err(ProfileInvalid::EmptyField(name));
            }
        }
        for loc in [&self.city_country, &self.birth_city_country] {
            let mut parts = loc.splitn(2, ',');
            let city = parts.next().unwrap_or("").trim();
            let country = parts.next().unwrap_or("").trim();
            if city.is_empty() || country.is_empty() {
                return Err(ProfileInvalid::Location(loc.clone()));
            }
        }
        Ok(())
    }

    /// Ground-truth value for `attr` as the string scorers compare against.
    pub fn attribute_value(&self, attr: Attribute) -> String {
        match attr {
            Attribute::Age => self.age.to_string(),
            Attribute::Sex => self.sex.as_str().to_string(),
            Attribute::CityCountry => self.city_country.clone(),
            Attribute::BirthCityCountry => self.birth_city_country.clone(),
            Attribute::Education => self.education_category.as_str().to_string(),
            Attribute::Occupation => self.occupation.clone(),
            Attribute::RelationshipStatus => self.relationship_status.as_str().to_string(),
            Attribute::IncomeLevel => self.income_level.as_str().to_string(),
        }
    }

    /// City half of `city_country`.
    pub fn city(&self) -> &str {
        self.city_country.split(',').next().unwrap_or("").trim()
    }

    /// Country half of `city_country`.
    pub fn country(&self) -> &str {
        self.city_country
            .split_once(',')
            .map(|(_, c)| c.trim())
            .unwrap_or("")
    }
}

/// Two capitalized words concatenated, e.g. `SpiralSphinx`.
pub fn is_valid_username(name: &str) -> bool {
    let mut chars = name.chars().peekable();
    let mut words = 0;
    while let Some(c) = chars.next() {
        if !c.is_ascii_uppercase() {
            return false;
        }
        let mut len = 0;
        while let Some(&n) = chars.peek() {
            if n.is_ascii_lowercase() {
                len += 1;
                chars.next();
            } else {
                break;
            }
        }
        if len == 0 {
            return false;
        }
        words += 1;
    }
    words == 2
}

#[cfg(test)]
pub(crate) fn sample_profile(username: &str) -> Profile {
    Profile {
        username: username.to_string(),
        age: 35,
        sex: Sex::Male,
        city_country: "Zurich, Switzerland".into(),
        birth_city_country: "Cleveland, USA".into(),
        education: "Masters in Computer Science".into(),
        education_category: EducationCategory::Masters,
        occupation: "software engineer".into(),
        income: "250 thousand swiss francs".into(),
        income_level: IncomeLevel::VeryHigh,
        relationship_status: RelationshipStatus::Single,
        writing_style: String::new(),
    }
}
