//! Mask personal entities with the offline rule-based anonymizer.
//!
//! `cargo run --example anonymize`

use paiforge::eval::{anonymize_comments, RuleBasedAnonymizer};

#[tokio::main]
async fn main() {
    let comments = [
        "moved from Zurich to Toronto last year, still miss the lake",
        "mail me at jo@example.com or call +41 44 123 45 67",
        "turned 34 on 2023-05-02, spent 200 bucks on cake",
    ]
    .map(String::from);
    for (raw, out) in comments.iter().zip(anonymize_comments(&comments, &RuleBasedAnonymizer).await) {
        println!("{raw}\n -> {}", out.text);
    }
}
