//! Descriptive statistics over a simulated dataset plus human-study metrics
//! from a judgment log.
//!
//! `cargo run --example dataset_stats`

use paiforge::analytics::{
    hardness_distribution, human_study_metrics, tag_agreement, thread_stats, HardnessLevel, Judgment, JudgmentRecord,
};
use paiforge::engine::{simulate_threads, SimulationParams};
use paiforge::gateway::Gateway;
use paiforge::model::Attribute;
use paiforge::oracle::{aggregate_all, LabelSource, ModelOracle};
use paiforge::profiles::{enrich_all, generate_profiles, ProfileBatchSpec};

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let gw = Gateway::mock();
    let pool = enrich_all(&generate_profiles(&ProfileBatchSpec::new(12, 4), &gw).await?, &gw, 4).await?;
    let params = SimulationParams { no_threads: 4, no_rounds: 3, seed: 4, ..Default::default() };
    let oracle = ModelOracle::new(gw.clone());
    let threads: Vec<_> = simulate_threads(&pool, &Attribute::ALL, &params, Some(&oracle), &gw)
        .await?
        .into_iter()
        .map(|(t, _)| t)
        .collect();
    print!("{}", thread_stats(&threads).to_text());
    let labels = aggregate_all(&threads, &pool, LabelSource::Model);
    print!("{}", hardness_distribution(HardnessLevel::Profile, &threads, &labels).to_text());
    print!("{}", tag_agreement(&threads).to_text());

    use Judgment::{Human, Synthetic};
    let judgments: Vec<JudgmentRecord> = [
        ("c1", Synthetic, Human, "r1"),
        ("c1", Synthetic, Synthetic, "r2"),
        ("c2", Human, Human, "r1"),
        ("c2", Human, Synthetic, "r2"),
    ]
    .into_iter()
    .map(|(c, t, j, r)| JudgmentRecord { comment_id: c.into(), source_truth: t, judged_as: j, rater_id: r.into() })
    .collect();
    let m = human_study_metrics(&judgments);
    println!("human study: accuracy {:.3} fpr {:.3} fnr {:.3} agreement {:.3}", m.accuracy, m.fpr, m.fnr, m.pairwise_agreement);
    Ok(())
}
