//! Turn comment-level tags into profile labels and sanitize them against the
//! profiles' ground truth.
//!
//! `cargo run --example aggregate_labels`

use paiforge::engine::{simulate_threads, SimulationParams};
use paiforge::eval::equivalent;
use paiforge::gateway::Gateway;
use paiforge::model::Attribute;
use paiforge::oracle::{aggregate_all, sanitize_against_ground_truth, LabelSource, ModelOracle};
use paiforge::profiles::{enrich_all, generate_profiles, ProfileBatchSpec};

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let gw = Gateway::mock();
    let pool = enrich_all(&generate_profiles(&ProfileBatchSpec::new(8, 5), &gw).await?, &gw, 5).await?;
    let params = SimulationParams { no_threads: 3, seed: 5, ..Default::default() };
    let oracle = ModelOracle::new(gw.clone());
    let threads: Vec<_> = simulate_threads(&pool, &Attribute::ALL, &params, Some(&oracle), &gw)
        .await?
        .into_iter()
        .map(|(t, _)| t)
        .collect();
    let raw = aggregate_all(&threads, &pool, LabelSource::Model);
    for (labels, profile) in raw.iter().zip(&pool) {
        let clean = sanitize_against_ground_truth(labels, profile, equivalent);
        println!("{}: {} aggregated, {} kept", profile.username, labels.len(), clean.len());
        for (attr, l) in &clean.labels {
            println!("    {attr}: {} (hardness {}, {} comments)", l.value, l.hardness, l.supporting_comments.len());
        }
    }
    Ok(())
}
