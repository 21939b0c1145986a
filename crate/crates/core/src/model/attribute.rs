use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The eight personal attributes carried by every profile.
///
/// Declaration order matches the order the tagging prompt lists them in and is
/// the iteration order used by every table this crate emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Attribute {
    Age,
    Sex,
    CityCountry,
    BirthCityCountry,
    Education,
    Occupation,
    RelationshipStatus,
    IncomeLevel,
}

/// How guesses for an attribute are compared against the ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttributeKind {
    /// Closed enum, 0-1 equality on canonical forms.
    Categorical,
    /// Integer years with a tolerance band.
    Numeric,
    /// Free text; deterministic normalization first, then model judgment.
    FreeText,
}

impl Attribute {
    pub const ALL: [Attribute; 8] = [
        Attribute::Age,
        Attribute::Sex,
        Attribute::CityCountry,
        Attribute::BirthCityCountry,
        Attribute::Education,
        Attribute::Occupation,
        Attribute::RelationshipStatus,
        Attribute::IncomeLevel,
    ];

    pub const fn as_str(self) -> &'static str {
        match self {
            Attribute::Age => "age",
            Attribute::Sex => "sex",
            Attribute::CityCountry => "city_country",
            Attribute::BirthCityCountry => "birth_city_country",
            Attribute::Education => "education",
            Attribute::Occupation => "occupation",
            Attribute::RelationshipStatus => "relationship_status",
            Attribute::IncomeLevel => "income_level",
        }
    }

    /// Human-readable row label used in the hardness tables.
    pub const fn display_name(self) -> &'static str {
        match self {
            Attribute::Age => "Age",
            Attribute::Sex => "Sex",
            Attribute::CityCountry => "Location",
            Attribute::BirthCityCountry => "Place of Birth",
            Attribute::Education => "Education",
            Attribute::Occupation => "Occupation",
            Attribute::RelationshipStatus => "Relationship Status",
            Attribute::IncomeLevel => "Income Level",
        }
    }

    pub const fn kind(self) -> AttributeKind {
        match self {
            Attribute::Age => AttributeKind::Numeric,
            Attribute::Sex
            | Attribute::Education
            | Attribute::RelationshipStatus
            | Attribute::IncomeLevel => AttributeKind::Categorical,
            Attribute::CityCountry | Attribute::BirthCityCountry | Attribute::Occupation => {
                AttributeKind::FreeText
            }
        }
    }

    pub const fn is_location(self) -> bool {
        matches!(self, Attribute::CityCountry | Attribute::BirthCityCountry)
    }

    /// Resolve any of the namings in circulation to the canonical attribute.
    ///
    /// This is the single normalization table for attribute names: callers
    /// parsing model output, importer columns and HTTP payloads all go
    /// through here.
    pub fn normalize(name: &str) -> Option<Attribute> {
        let key: String = name
            .trim()
            .trim_matches(|c: char| c == '\'' || c == '"' || c == '`' || c == '*')
            .to_ascii_lowercase()
            .chars()
            .map(|c| if c == ' ' || c == '-' { '_' } else { c })
            .collect();
        let attr = match key.as_str() {
            "age" => Attribute::Age,
            "sex" | "gender" => Attribute::Sex,
            "city_country" | "location" | "city" | "current_location" | "loc" | "residence" => {
                Attribute::CityCountry
            }
            "birth_city_country" | "place_of_birth" | "birthplace" | "birth_place" | "pob"
            | "birth_city" | "born" => Attribute::BirthCityCountry,
            "education" | "education_level" | "education_category" | "edu" => Attribute::Education,
            "occupation" | "job" | "profession" | "occ" => Attribute::Occupation,
            "relationship_status" | "relationship" | "married" | "rel" => {
                Attribute::RelationshipStatus
            }
            "income_level" | "income" | "inc" => Attribute::IncomeLevel,
            _ => return None,
        };
        Some(attr)
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown attribute name `{0}`")]
pub struct UnknownAttribute(pub String);

impl FromStr for Attribute {
    type Err = UnknownAttribute;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Attribute::normalize(s).ok_or_else(|| UnknownAttribute(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_names_round_trip() {
        for attr in Attribute::ALL {
            assert_eq!(Attribute::normalize(attr.as_str()), Some(attr));
            let json = serde_json::to_string(&attr).unwrap();
            assert_eq!(json, format!("\"{}\"", attr.as_str()));
        }
    }

    #[test]
    fn aliases_resolve() {
        assert_eq!(Attribute::normalize("location"), Some(Attribute::CityCountry));
        assert_eq!(Attribute::normalize("Place of Birth"), Some(Attribute::BirthCityCountry));
        assert_eq!(Attribute::normalize("Relationship Status"), Some(Attribute::RelationshipStatus));
        assert_eq!(Attribute::normalize(" Income level "), Some(Attribute::IncomeLevel));
        assert_eq!(Attribute::normalize("hobby"), None);
    }
}
