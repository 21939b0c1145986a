//! Small built-in place gazetteer: canonical countries with their common
//! aliases, and cities with the country they belong to.

/// (canonical country, aliases). Aliases are matched case-insensitively.
pub const COUNTRIES: &[(&str, &[&str])] = &[
    ("United States", &["usa", "us", "u.s.", "u.s.a.", "united states of america", "america", "the united states", "the us", "the usa"]),
    ("United Kingdom", &["uk", "u.k.", "great britain", "britain", "england", "scotland", "wales", "the uk"]),
    ("Canada", &[]),
    ("Australia", &[]),
    ("New Zealand", &["nz"]),
    ("Ireland", &["republic of ireland"]),
    ("Germany", &["deutschland"]),
    ("France", &[]),
    ("Switzerland", &["swiss confederation"]),
    ("Austria", &[]),
    ("Italy", &[]),
    ("Spain", &[]),
    ("Portugal", &[]),
    ("Netherlands", &["the netherlands", "holland"]),
    ("Belgium", &[]),
    ("Denmark", &[]),
    ("Sweden", &[]),
    ("Norway", &[]),
    ("Finland", &[]),
    ("Iceland", &[]),
    ("Poland", &[]),
    ("Czech Republic", &["czechia"]),
    ("Hungary", &[]),
    ("Greece", &[]),
    ("Turkey", &["turkiye"]),
    ("Russia", &["russian federation"]),
    ("Ukraine", &[]),
    ("Romania", &[]),
    ("Croatia", &[]),
    ("Serbia", &[]),
    ("Bulgaria", &[]),
    ("Israel", &[]),
    ("Egypt", &[]),
    ("Morocco", &[]),
    ("Nigeria", &[]),
    ("Kenya", &[]),
    ("South Africa", &["rsa"]),
    ("Ethiopia", &[]),
    ("Ghana", &[]),
    ("India", &[]),
    ("Pakistan", &[]),
    ("Bangladesh", &[]),
    ("Sri Lanka", &[]),
    ("China", &["prc", "people's republic of china"]),
    ("Japan", &[]),
    ("South Korea", &["korea", "republic of korea"]),
    ("Taiwan", &[]),
    ("Hong Kong", &[]),
    ("Singapore", &[]),
    ("Malaysia", &[]),
    ("Indonesia", &[]),
    ("Thailand", &[]),
    ("Vietnam", &["viet nam"]),
    ("Philippines", &["the philippines"]),
    ("United Arab Emirates", &["uae", "u.a.e."]),
    ("Saudi Arabia", &[]),
    ("Iran", &[]),
    ("Mexico", &[]),
    ("Brazil", &["brasil"]),
    ("Argentina", &[]),
    ("Chile", &[]),
    ("Colombia", &[]),
    ("Peru", &[]),
    ("Venezuela", &[]),
    ("Cuba", &[]),
];

/// (city, canonical country, local currency, USD per unit of local currency).
pub const CITIES: &[(&str, &str, &str, f64)] = &[
    ("New York", "United States", "dollars", 1.0),
    ("Los Angeles", "United States", "dollars", 1.0),
    ("Chicago", "United States", "dollars", 1.0),
    ("Houston", "United States", "dollars", 1.0),
    ("Seattle", "United States", "dollars", 1.0),
    ("Boston", "United States", "dollars", 1.0),
    ("Miami", "United States", "dollars", 1.0),
    ("San Francisco", "United States", "dollars", 1.0),
    ("Cleveland", "United States", "dollars", 1.0),
    ("Denver", "United States", "dollars", 1.0),
    ("Austin", "United States", "dollars", 1.0),
    ("Toronto", "Canada", "canadian dollars", 0.73),
    ("Vancouver", "Canada", "canadian dollars", 0.73),
    ("Montreal", "Canada", "canadian dollars", 0.73),
    ("London", "United Kingdom", "pounds", 1.27),
    ("Manchester", "United Kingdom", "pounds", 1.27),
    ("Edinburgh", "United Kingdom", "pounds", 1.27),
    ("Glasgow", "United Kingdom", "pounds", 1.27),
    ("Dublin", "Ireland", "euros", 1.08),
    ("Sydney", "Australia", "australian dollars", 0.66),
    ("Melbourne", "Australia", "australian dollars", 0.66),
    ("Auckland", "New Zealand", "new zealand dollars", 0.61),
    ("Berlin", "Germany", "euros", 1.08),
    ("Munich", "Germany", "euros", 1.08),
    ("Hamburg", "Germany", "euros", 1.08),
    ("Paris", "France", "euros", 1.08),
    ("Lyon", "France", "euros", 1.08),
    ("Marseille", "France", "euros", 1.08),
    ("Zurich", "Switzerland", "swiss francs", 1.12),
    ("Geneva", "Switzerland", "swiss francs", 1.12),
    ("Bern", "Switzerland", "swiss francs", 1.12),
    ("Vienna", "Austria", "euros", 1.08),
    ("Rome", "Italy", "euros", 1.08),
    ("Milan", "Italy", "euros", 1.08),
    ("Madrid", "Spain", "euros", 1.08),
    ("Barcelona", "Spain", "euros", 1.08),
    ("Lisbon", "Portugal", "euros", 1.08),
    ("Amsterdam", "Netherlands", "euros", 1.08),
    ("Rotterdam", "Netherlands", "euros", 1.08),
    ("Brussels", "Belgium", "euros", 1.08),
    ("Copenhagen", "Denmark", "danish kroner", 0.145),
    ("Stockholm", "Sweden", "swedish kronor", 0.095),
    ("Oslo", "Norway", "norwegian kroner", 0.094),
    ("Helsinki", "Finland", "euros", 1.08),
    ("Reykjavik", "Iceland", "icelandic kronur", 0.0072),
    ("Warsaw", "Poland", "zloty", 0.25),
    ("Krakow", "Poland", "zloty", 0.25),
    ("Prague", "Czech Republic", "czech koruna", 0.044),
    ("Budapest", "Hungary", "forint", 0.0028),
    ("Athens", "Greece", "euros", 1.08),
    ("Istanbul", "Turkey", "lira", 0.031),
    ("Moscow", "Russia", "rubles", 0.011),
    ("Kyiv", "Ukraine", "hryvnia", 0.025),
    ("Bucharest", "Romania", "lei", 0.22),
    ("Zagreb", "Croatia", "euros", 1.08),
    ("Belgrade", "Serbia", "dinars", 0.0092),
    ("Sofia", "Bulgaria", "leva", 0.55),
    ("Tel Aviv", "Israel", "shekels", 0.27),
    ("Cairo", "Egypt", "egyptian pounds", 0.021),
    ("Casablanca", "Morocco", "dirhams", 0.1),
    ("Lagos", "Nigeria", "naira", 0.00065),
    ("Nairobi", "Kenya", "shillings", 0.0077),
    ("Cape Town", "South Africa", "rand", 0.054),
    ("Johannesburg", "South Africa", "rand", 0.054),
    ("Addis Ababa", "Ethiopia", "birr", 0.0175),
    ("Accra", "Ghana", "cedis", 0.067),
    ("Mumbai", "India", "rupees", 0.012),
    ("Delhi", "India", "rupees", 0.012),
    ("Bangalore", "India", "rupees", 0.012),
    ("Karachi", "Pakistan", "rupees", 0.0036),
    ("Dhaka", "Bangladesh", "taka", 0.0085),
    ("Colombo", "Sri Lanka", "rupees", 0.0033),
    ("Beijing", "China", "yuan", 0.14),
    ("Shanghai", "China", "yuan", 0.14),
    ("Tokyo", "Japan", "yen", 0.0067),
    ("Osaka", "Japan", "yen", 0.0067),
    ("Kyoto", "Japan", "yen", 0.0067),
    ("Seoul", "South Korea", "won", 0.00075),
    ("Taipei", "Taiwan", "taiwan dollars", 0.031),
    ("Hong Kong", "Hong Kong", "hong kong dollars", 0.128),
    ("Singapore", "Singapore", "singapore dollars", 0.74),
    ("Kuala Lumpur", "Malaysia", "ringgit", 0.21),
    ("Jakarta", "Indonesia", "rupiah", 0.000063),
    ("Bangkok", "Thailand", "baht", 0.028),
    ("Hanoi", "Vietnam", "dong", 0.00004),
    ("Manila", "Philippines", "pesos", 0.018),
    ("Dubai", "United Arab Emirates", "dirhams", 0.27),
    ("Riyadh", "Saudi Arabia", "riyals", 0.27),
    ("Tehran", "Iran", "rials", 0.000024),
    ("Mexico City", "Mexico", "pesos", 0.058),
    ("Guadalajara", "Mexico", "pesos", 0.058),
    ("Rio de Janeiro", "Brazil", "reais", 0.2),
    ("Sao Paulo", "Brazil", "reais", 0.2),
    ("Buenos Aires", "Argentina", "pesos", 0.0011),
    ("Santiago", "Chile", "pesos", 0.0011),
    ("Bogota", "Colombia", "pesos", 0.00025),
    ("Lima", "Peru", "soles", 0.27),
    ("Caracas", "Venezuela", "bolivares", 0.027),
    ("Havana", "Cuba", "pesos", 0.042),
];

fn fold(s: &str) -> String {
    s.trim()
        .trim_matches(|c: char| c == '.' || c == '\'' || c == '"')
        .to_lowercase()
        .chars()
        .map(|c| match c {
            'á' | 'à' | 'â' | 'ã' | 'ä' => 'a',
            'é' | 'è' | 'ê' | 'ë' => 'e',
            'í' | 'ì' | 'î' | 'ï' => 'i',
            'ó' | 'ò' | 'ô' | 'õ' | 'ö' => 'o',
            'ú' | 'ù' | 'û' | 'ü' => 'u',
            'ç' => 'c',
            'ñ' => 'n',
            c => c,
        })
        .collect::<String>()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

/// Case- and accent-insensitive normal form used for place comparisons.
pub fn fold_place(s: &str) -> String {
    fold(s)
}

/// Canonical country name for `name`, if it names a known country.
pub fn canonical_country(name: &str) -> Option<&'static str> {
    let key = fold(name);
    COUNTRIES.iter().find_map(|(canon, aliases)| {
        (fold(canon) == key || aliases.iter().any(|a| fold(a) == key)).then_some(*canon)
    })
}

/// Country of a known city.
pub fn country_of_city(city: &str) -> Option<&'static str> {
    let key = fold(city);
    CITIES
        .iter()
        .find_map(|(c, country, _, _)| (fold(c) == key).then_some(*country))
}

/// Every place name (cities, countries and aliases longer than three
/// characters) for text scanning, longest first.
pub fn place_names() -> Vec<&'static str> {
    let mut names: Vec<&'static str> = CITIES.iter().map(|c| c.0).collect();
    for (canon, aliases) in COUNTRIES {
        names.push(canon);
        names.extend(aliases.iter().copied().filter(|a| a.len() > 3 && !a.contains('.')));
    }
    names.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    names.dedup();
    names
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aliases() {
        assert_eq!(canonical_country("usa"), Some("United States"));
        assert_eq!(canonical_country("United States"), Some("United States"));
        assert_eq!(canonical_country("UK"), Some("United Kingdom"));
        assert_eq!(canonical_country("Brasil"), Some("Brazil"));
        assert_eq!(canonical_country("Atlantis"), None);
        assert_eq!(country_of_city("são paulo"), Some("Brazil"));
        assert_eq!(country_of_city("Vancouver"), Some("Canada"));
    }

    #[test]
    fn every_city_country_is_known() {
        for (city, country, _, _) in CITIES {
            assert_eq!(canonical_country(country), Some(*country), "{city}");
        }
    }
}
