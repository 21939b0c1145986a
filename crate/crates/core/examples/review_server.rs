//! Build a small mock dataset and serve the review API on it until ctrl-c.
//!
//! `cargo run --example review_server`, then for instance
//! `curl 'localhost:8080/queue?limit=2'` and `curl localhost:8080/progress`.

use paiforge::datastore::{save_bundle, DatasetBundle, Manifest};
use paiforge::engine::{simulate_threads, SimulationParams};
use paiforge::gateway::Gateway;
use paiforge::model::Attribute;
use paiforge::oracle::ModelOracle;
use paiforge::profiles::{enrich_all, generate_profiles, ProfileBatchSpec};
use paiforge::review::{serve, ReviewConfig, ReviewState};

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let gw = Gateway::mock();
    let mut bundle = DatasetBundle::new(Manifest::new(2, "mock", chrono::Utc::now()));
    bundle.profiles = enrich_all(&generate_profiles(&ProfileBatchSpec::new(6, 2), &gw).await?, &gw, 2).await?;
    let params = SimulationParams { no_threads: 2, seed: 2, ..Default::default() };
    let oracle = ModelOracle::new(gw.clone());
    bundle.threads = simulate_threads(&bundle.profiles, &[Attribute::Age, Attribute::Occupation], &params, Some(&oracle), &gw)
        .await?
        .into_iter()
        .map(|(t, _)| t)
        .collect();
    let dir = tempfile::tempdir()?;
    save_bundle(&bundle, dir.path())?;
    println!("dataset in {}; decisions go to decisions.jsonl there", dir.path().display());
    let state = ReviewState::load(dir.path())?;
    serve(Some(state), ReviewConfig { show_reasoning: true, ..Default::default() }, "127.0.0.1:8080".parse()?).await?;
    Ok(())
}
