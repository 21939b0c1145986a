//! Tag comments with the model, then accept, edit and reject proposals the
//! way a reviewer would, and replay the decision log.
//!
//! `cargo run --example review_decisions`

use chrono::{TimeZone, Utc};
use paiforge::gateway::Gateway;
use paiforge::model::{Attribute, CommentDraft, ThreadTree, TreeLimits};
use paiforge::oracle::{replay_decisions, tag_threads, DecisionAction, TaggingDecision};

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let limits = TreeLimits::default();
    let mut tree = ThreadTree::new("t1", Attribute::Occupation, "What do you do all day?", "Jobs thread.");
    for (author, text) in [
        ("SpiralSphinx", "as a nurse, night shifts wreck my sleep"),
        ("MoonBeam", "back in zurich we just hike it off"),
    ] {
        tree.insert_comment(0, CommentDraft { author: author.into(), text: text.into(), round: 1, ..Default::default() }, &limits)?;
    }
    let mut threads = vec![tree];
    let stats = tag_threads(&mut threads, &Gateway::mock(), 1).await;
    println!("tagged {} comments, {} failures", stats.tagged, stats.failed);
    let raw = threads.clone();

    let at = |m| Utc.with_ymd_and_hms(2024, 5, 1, 9, m, 0).unwrap();
    let mut log = Vec::new();
    let actions = [DecisionAction::Accept, DecisionAction::Edit, DecisionAction::Reject];
    for node in threads[0].comments() {
        for (i, tag) in node.tags.iter().enumerate() {
            let action = actions[log.len() % actions.len()];
            log.push(TaggingDecision {
                thread_id: "t1".into(),
                comment_id: node.id,
                attribute: tag.attribute,
                action,
                edited_guesses: (action == DecisionAction::Edit).then(|| vec![format!("{} (edited)", tag.top_guess())]),
                hardness_fine: (action != DecisionAction::Reject).then_some(2),
                certainty: None,
                labeler: "reviewer-1".into(),
                timestamp: at(node.id as u32 * 10 + i as u32),
            });
        }
    }
    for d in &log {
        println!("{}", serde_json::to_string(d)?);
    }
    let mut replayed = raw;
    let failures = replay_decisions(&mut replayed, &log);
    assert!(failures.is_empty());
    for node in replayed[0].comments() {
        for t in &node.tags {
            println!("#{} {} {:?} verdict={:?} hardness={:?}", node.id, t.attribute, t.guesses, t.verdict, t.hardness_fine);
        }
    }
    Ok(())
}
