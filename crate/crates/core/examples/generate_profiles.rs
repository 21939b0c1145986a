//! Generate a small pool of synthetic profiles with writing styles.
//!
//! `cargo run --example generate_profiles`

use paiforge::gateway::Gateway;
use paiforge::profiles::{enrich_all, generate_profiles, overlap_histogram, ProfileBatchSpec};

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let gw = Gateway::mock();
    let profiles = generate_profiles(&ProfileBatchSpec::new(8, 1), &gw).await?;
    let profiles = enrich_all(&profiles, &gw, 1).await?;
    for p in &profiles {
        println!("{:<18} {:>2} {:<6} {:<28} {}", p.username, p.age, p.sex, p.city_country, p.occupation);
        println!("    style: {}", p.writing_style);
    }
    println!("{:?}", overlap_histogram(&profiles)?);
    Ok(())
}
