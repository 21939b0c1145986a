#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use chrono::{DateTime, TimeZone, Utc};
use paiforge::model::{Attribute, AttributeTag, CoarseHardness, CommentDraft, Profile, ThreadTree, TreeLimits};
use rand::seq::IndexedRandom;
use rand::Rng;
use serde_json::json;

/// A valid profile; `variant` picks between a few distinct people.
pub fn profile(username: &str, variant: usize) -> Profile {
    let people = [
        json!({"age": 35, "sex": "male", "city_country": "Zurich, Switzerland", "birth_city_country": "Cleveland, USA",
               "education": "Masters in Computer Science", "education_category": "master's degree", "occupation": "software engineer",
               "income": "250 thousand swiss francs", "income_level": "very high", "relationship_status": "single"}),
        json!({"age": 25, "sex": "male", "city_country": "Rio de Janeiro, Brazil", "birth_city_country": "Sao Paulo, Brazil",
               "education": "High school diploma", "education_category": "high school", "occupation": "gym trainer",
               "income": "30 thousand reais", "income_level": "low", "relationship_status": "in relationship"}),
        json!({"age": 52, "sex": "female", "city_country": "Tokyo, Japan", "birth_city_country": "Osaka, Japan",
               "education": "PhD in Chemistry", "education_category": "PhD", "occupation": "research scientist",
               "income": "9 million yen", "income_level": "high", "relationship_status": "married"}),
        json!({"age": 41, "sex": "female", "city_country": "Toronto, Canada", "birth_city_country": "Dublin, Ireland",
               "education": "Bachelors in Nursing", "education_category": "college degree", "occupation": "nurse",
               "income": "85 thousand canadian dollars", "income_level": "middle", "relationship_status": "divorced"}),
    ];
    let mut v = people[variant % people.len()].clone();
    v["username"] = json!(username);
    v["writing_style"] = json!("");
    serde_json::from_value(v).expect("fixture profile")
}

pub fn usernames(n: usize) -> Vec<String> {
    const FIRST: [&str; 8] = ["Spiral", "Moon", "Quiet", "Amber", "Silver", "Rapid", "Golden", "Misty"];
    const SECOND: [&str; 8] = ["Sphinx", "Beam", "Otter", "Falcon", "River", "Comet", "Maple", "Harbor"];
    (0..n).map(|i| format!("{}{}", FIRST[i % 8], SECOND[(i / 8) % 8])).collect()
}

pub fn profiles(n: usize) -> Vec<Profile> {
    usernames(n).iter().enumerate().map(|(i, u)| profile(u, i)).collect()
}

pub fn at_minute(m: u32) -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2024, 3, 1, 10, m, 0).unwrap()
}

pub fn model_tag(attr: Attribute, guess: &str) -> AttributeTag {
    AttributeTag::model(attr, vec![guess.to_string()], 4, CoarseHardness::Indirect)
}

/// A random tree within `limits`, written by authors drawn from `authors`.
pub fn random_tree<R: Rng>(rng: &mut R, size: usize, authors: &[&str], limits: &TreeLimits) -> ThreadTree {
    let mut tree = ThreadTree::new("rand", Attribute::Age, "q", "d");
    for i in 0..size {
        let open: Vec<u64> = tree.nodes.iter().map(|n| n.id).filter(|&id| tree.check_insert(id, limits).is_ok()).collect();
        let Some(&parent) = open.choose(rng) else { break };
        let author = authors.choose(rng).unwrap().to_string();
        tree.insert_comment(parent, CommentDraft { author, text: format!("c{i}"), round: 1, ..Default::default() }, limits)
            .unwrap();
    }
    tree
}

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_paiforge"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("PAIFORGE_REVIEW_TOKEN").output().expect("spawn paiforge")
}

pub fn path_arg(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/pipeline-seed42")
}

/// Files of a bundle directory, sorted by name.
pub fn bundle_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap())
        .filter(|e| e.path().is_file())
        .map(|e| (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap()))
        .collect();
    out.sort();
    out
}
