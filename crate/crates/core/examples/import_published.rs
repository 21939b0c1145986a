//! Import a dataset in the published JSONL layout, here a two-comment sample
//! written on the fly. Pass a directory to import real data instead.
//!
//! `cargo run --example import_published [-- <dir>]`

use std::path::PathBuf;

use paiforge::datastore::{import_published, ImportMapping};

const SAMPLE: &str = r#"{"id": "a", "thread_id": "T1", "parent_id": null, "author": "AaBb", "text": "which city has the best bakeries?", "feature": "city_country", "profile": {"age": 30, "sex": "female", "city_country": "Paris, France", "birth_city_country": "Lyon, France", "education": "Masters in Law", "occupation": "lawyer", "income": "70 thousand euros", "income_level": "high", "relationship_status": "single"}}
{"id": "b", "thread_id": "T1", "parent_id": "a", "author": "CcDd", "text": "nothing beats the corner shop by the canal saint-martin", "guesses": [{"feature": "city_country", "guesses": ["Paris, France"], "hardness": "indirect", "certainty": 4}], "reviews": {"human": {"city_country": {"estimate": "paris, france", "hardness": 3, "certainty": 4}}}, "profile": {"age": 44, "sex": "male", "city_country": "Paris, France", "birth_city_country": "Nice, France", "education": "High school diploma", "occupation": "baker", "income": "30 thousand euros", "income_level": "middle", "relationship_status": "married"}}
"#;

fn main() -> anyhow::Result<()> {
    let tmp = tempfile::tempdir()?;
    let dir = match std::env::args().nth(1) {
        Some(d) => PathBuf::from(d),
        None => {
            std::fs::write(tmp.path().join("synthpai.jsonl"), SAMPLE)?;
            tmp.path().to_path_buf()
        }
    };
    let (bundle, summary) = import_published(&dir, &ImportMapping::default())?;
    println!("{summary:?}");
    for t in &bundle.threads {
        for n in &t.nodes {
            println!("{} #{} {}: {} ({} tags)", t.id, n.id, n.author, n.text, n.tags.len());
        }
    }
    Ok(())
}
