//! Thread simulation: topic creation, interest filtering and round-based
//! agent turns with score-weighted reply targeting.

mod comment;
mod params;
mod scoring;
mod topic;

use std::collections::BTreeSet;

use async_trait::async_trait;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use comment::{extract_comment, generate_comment, render_context, GeneratedComment};
pub use params::{InvalidParams, SimulationParams};
pub use scoring::{score_candidates, select_reply_target, ZERO_SCORE_WEIGHT};
pub use topic::{generate_topic, interest_filter, parse_topic, parse_yes_no, topic_examples, TOPIC_EXAMPLES};

use crate::gateway::{derive_seed, Gateway, GatewayError, TemplateError};
use crate::model::{Attribute, AttributeTag, CommentDraft, CommentId, Profile, ThreadTree, TreeError};

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error("could not parse topic from response: {raw:?}")]
    TopicParse { raw: String },
    #[error("response has no comment marker even after a reprompt: {raw:?}")]
    CommentParse { raw: String },
    #[error("turn of {username} skipped: {reason}")]
    TurnSkipped { username: String, reason: String },
    #[error("no agents to simulate")]
    NoAgents,
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
    #[error(transparent)]
    Params(#[from] InvalidParams),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Gateway(#[from] GatewayError),
}

/// Labels a single comment with inferable attributes.
#[async_trait]
pub trait CommentOracle: Send + Sync {
    async fn tag(&self, text: &str, seed: u64) -> Result<Vec<AttributeTag>, String>;
}

/// When comments get tagged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMode {
    /// Right after generation, inside the simulation loop.
    #[default]
    Inline,
    /// In a separate batch pass once the thread is finished.
    PostHoc,
    Off,
}

/// Bookkeeping from one simulated thread.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationStats {
    pub comments: usize,
    pub skipped_turns: usize,
    pub out_of_bounds: usize,
    pub tagging_failures: usize,
}

/// Run the comment rounds on `tree` with `agents`.
///
/// Each round visits the agents in a seeded shuffle. An agent gets up to
/// `no_actions` attempts, each passing with the round's commenting
/// probability; the first passing attempt scores the tree, samples a reply
/// target, writes the comment, tags it through `oracle` when given and
/// inserts it. An agent comments at most once per round.
pub async fn simulate_thread(
    mut tree: ThreadTree,
    agents: &[Profile],
    params: &SimulationParams,
    oracle: Option<&dyn CommentOracle>,
    gateway: &Gateway,
    seed: u64,
) -> Result<(ThreadTree, SimulationStats), EngineError> {
    params.validate()?;
    if agents.is_empty() {
        return Err(EngineError::NoAgents);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "rounds"));
    let mut stats = SimulationStats::default();
    for round in 1..=params.no_rounds {
        let alpha = params.comment_prob(round);
        let mut order: Vec<usize> = (0..agents.len()).collect();
        order.shuffle(&mut rng);
        for idx in order {
            let agent = &agents[idx];
            let wants = (0..params.no_actions).any(|_| rng.random_bool(alpha));
            if !wants {
                continue;
            }
            let turn_seed = derive_seed(seed, &format!("{round}/{}", agent.username));
            match take_turn(&mut tree, agent, round, params, oracle, gateway, &mut rng, turn_seed, &mut stats).await {
                Ok(()) => {}
                Err(e @ (EngineError::TurnSkipped { .. } | EngineError::CommentParse { .. })) => {
                    tracing::warn!(thread = %tree.id, "{e}");
                    stats.skipped_turns += 1;
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok((tree, stats))
}

#[allow(clippy::too_many_arguments)]
async fn take_turn(
    tree: &mut ThreadTree,
    agent: &Profile,
    round: u32,
    params: &SimulationParams,
    oracle: Option<&dyn CommentOracle>,
    gateway: &Gateway,
    rng: &mut ChaCha8Rng,
    seed: u64,
    stats: &mut SimulationStats,
) -> Result<(), EngineError> {
    let limits = params.limits();
    let mut scores = score_candidates(tree, &agent.username, &limits);
    let mut excluded: BTreeSet<CommentId> = BTreeSet::new();
    let mut target = None;
    for _ in 0..=params.max_reselect {
        scores.retain(|id, _| !excluded.contains(id));
        let Some(candidate) = select_reply_target(&scores, params.no_sampled_comments, rng) else {
            break;
        };
        match tree.check_insert(candidate, &limits) {
            Ok(()) => {
                target = Some(candidate);
                break;
            }
            Err(TreeError::DepthExceeded { .. } | TreeError::FanoutExceeded { .. }) => {
                excluded.insert(candidate);
            }
            Err(e) => return Err(e.into()),
        }
    }
    let Some(parent) = target else {
        return Err(EngineError::TurnSkipped {
            username: agent.username.clone(),
            reason: "no reply target left".into(),
        });
    };
    let context = tree.path_to_root(parent)?;
    let generated = generate_comment(agent, &context, params, rng, gateway, derive_seed(seed, "comment")).await?;
    if generated.out_of_bounds() {
        stats.out_of_bounds += 1;
    }
    let tags = match oracle {
        Some(o) => match o.tag(&generated.text, derive_seed(seed, "tag")).await {
            Ok(tags) => tags,
            Err(e) => {
                tracing::warn!(username = %agent.username, "tagging failed, comment left untagged: {e}");
                stats.tagging_failures += 1;
                Vec::new()
            }
        },
        None => Vec::new(),
    };
    tree.insert_comment(
        parent,
        CommentDraft {
            author: agent.username.clone(),
            text: generated.text,
            round,
            reasoning_trace: Some(generated.reasoning_trace),
            tags,
        },
        &limits,
    )?;
    stats.comments += 1;
    Ok(())
}

/// Everything needed to create one thread from a profile pool.
pub struct ThreadJob<'a> {
    pub id: String,
    pub attribute: Attribute,
    pub pool: &'a [Profile],
    pub params: &'a SimulationParams,
    pub oracle: Option<&'a dyn CommentOracle>,
}

/// Pick a thread author, generate the topic, filter interested agents and
/// run the rounds.
pub async fn run_thread(job: ThreadJob<'_>, gateway: &Gateway) -> Result<(ThreadTree, SimulationStats), EngineError> {
    let seed = derive_seed(job.params.seed, &job.id);
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "author"));
    let author = job.pool.choose(&mut rng).ok_or(EngineError::NoAgents)?;
    let (question, description) =
        generate_topic(job.attribute, &topic_examples(job.attribute), author, gateway, seed).await?;
    let tree = ThreadTree::new(job.id.clone(), job.attribute, question, description);
    let others: Vec<Profile> = job.pool.iter().filter(|p| p.username != author.username).cloned().collect();
    let agents = if others.is_empty() {
        Vec::new()
    } else {
        interest_filter(&others, &tree.root().text, job.params.no_profiles, gateway, seed).await?
    };
    if agents.is_empty() {
        tracing::warn!(thread = %job.id, "nobody was interested, thread stays empty");
        return Ok((tree, SimulationStats::default()));
    }
    simulate_thread(tree, &agents, job.params, job.oracle, gateway, seed).await
}

/// Simulate `params.no_threads` threads concurrently, cycling through
/// `attributes` for their targets. Output order is thread order.
pub async fn simulate_threads(
    pool: &[Profile],
    attributes: &[Attribute],
    params: &SimulationParams,
    oracle: Option<&dyn CommentOracle>,
    gateway: &Gateway,
) -> Result<Vec<(ThreadTree, SimulationStats)>, EngineError> {
    params.validate()?;
    if attributes.is_empty() {
        return Err(EngineError::InvalidInput("at least one target attribute is required"));
    }
    let jobs = (0..params.no_threads).map(|i| {
        run_thread(
            ThreadJob {
                id: format!("thread-{i:03}"),
                attribute: attributes[i % attributes.len()],
                pool,
                params,
                oracle,
            },
            gateway,
        )
    });
    futures::future::join_all(jobs).await.into_iter().collect()
}
