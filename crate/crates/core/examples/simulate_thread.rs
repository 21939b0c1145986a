//! Simulate one comment thread and print it as an indented tree.
//!
//! `cargo run --example simulate_thread`

use paiforge::engine::{run_thread, SimulationParams, ThreadJob};
use paiforge::gateway::Gateway;
use paiforge::model::{Attribute, ThreadTree};
use paiforge::oracle::ModelOracle;
use paiforge::profiles::{enrich_all, generate_profiles, ProfileBatchSpec};

fn print(tree: &ThreadTree, id: u64, indent: usize) {
    let n = tree.node(id).expect("node");
    let tags: Vec<String> = n.tags.iter().map(|t| format!("{}={}", t.attribute, t.top_guess())).collect();
    println!("{:indent$}[{}] {}: {} {:?}", "", n.id, n.author, n.text.replace('\n', " "), tags, indent = indent * 2);
    for c in &n.children {
        print(tree, *c, indent + 1);
    }
}

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let gw = Gateway::mock();
    let pool = enrich_all(&generate_profiles(&ProfileBatchSpec::new(10, 3), &gw).await?, &gw, 3).await?;
    let params = SimulationParams { no_rounds: 3, seed: 3, ..Default::default() };
    let oracle = ModelOracle::new(gw.clone());
    let job = ThreadJob { id: "demo".into(), attribute: Attribute::CityCountry, pool: &pool, params: &params, oracle: Some(&oracle) };
    let (tree, stats) = run_thread(job, &gw).await?;
    print(&tree, 0, 0);
    println!("{stats:?}");
    Ok(())
}
