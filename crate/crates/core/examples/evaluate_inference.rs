//! Run attribute inference over a mock dataset and print the accuracy report,
//! once on raw and once on anonymized comments.
//!
//! `cargo run --example evaluate_inference`

use std::sync::Arc;

use paiforge::datastore::{load_bundle, save_bundle, DatasetBundle, Manifest};
use paiforge::engine::{simulate_threads, SimulationParams};
use paiforge::eval::{evaluate_dataset, EvalDataset, EvalParams, RuleBasedAnonymizer};
use paiforge::gateway::Gateway;
use paiforge::model::Attribute;
use paiforge::oracle::{aggregate_all, sanitize_against_ground_truth, LabelSource, ModelOracle};
use paiforge::profiles::{enrich_all, generate_profiles, ProfileBatchSpec};

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let gw = Gateway::mock().with_model("mock");
    let pool = enrich_all(&generate_profiles(&ProfileBatchSpec::new(10, 9), &gw).await?, &gw, 9).await?;
    let params = SimulationParams { no_threads: 4, seed: 9, ..Default::default() };
    let oracle = ModelOracle::new(gw.clone());
    let threads: Vec<_> = simulate_threads(&pool, &Attribute::ALL, &params, Some(&oracle), &gw)
        .await?
        .into_iter()
        .map(|(t, _)| t)
        .collect();
    let labels: Vec<_> = aggregate_all(&threads, &pool, LabelSource::Model)
        .iter()
        .zip(&pool)
        .map(|(l, p)| sanitize_against_ground_truth(l, p, paiforge::eval::equivalent))
        .collect();

    // Round-trip through the on-disk format on the way.
    let dir = tempfile::tempdir()?;
    let mut bundle = DatasetBundle::new(Manifest::new(9, "mock", chrono::DateTime::UNIX_EPOCH));
    (bundle.profiles, bundle.threads, bundle.labels) = (pool, threads, labels);
    save_bundle(&bundle, dir.path())?;
    let bundle = load_bundle(dir.path())?;

    let data = EvalDataset { threads: &bundle.threads, labels: &bundle.labels };
    let eval = EvalParams { seed: 9, ..Default::default() };
    let (plain, _) = evaluate_dataset(data, &gw, &gw, None, &eval).await?;
    print!("{}", plain.to_text());
    let (masked, _) = evaluate_dataset(data, &gw, &gw, Some(Arc::new(RuleBasedAnonymizer)), &eval).await?;
    print!("{}", masked.to_text());
    Ok(())
}
