//! Render a prompt template and send it through the deterministic mock backend.
//!
//! `cargo run --example gateway_mock`

use paiforge::gateway::{prompts, slots, Gateway};

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let gw = Gateway::mock().with_model("mock");
    let user = prompts::template(prompts::EQUIVALENCE).render(&slots([("truth", "gym trainer"), ("prediction", "personal trainer")]))?;
    let request = gw.request(prompts::EQUIVALENCE, prompts::EQUIVALENCE_SYSTEM, user, 7);
    println!("--- prompt ---\n{}", request.last_user_turn());
    // Same template and seed always give the same answer.
    let a = gw.complete(&request).await?;
    let b = gw.complete(&request).await?;
    assert_eq!(a, b);
    println!("--- answer ---\n{a}");
    Ok(())
}
