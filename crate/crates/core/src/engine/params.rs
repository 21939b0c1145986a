use serde::{Deserialize, Serialize};

use crate::model::TreeLimits;

/// Knobs of the thread simulation. Every field has a default so partial
/// config files work.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimulationParams {
    pub no_threads: usize,
    pub no_rounds: u32,
    pub no_actions: u32,
    /// Reply cap under a non-root comment.
    pub no_max_comments: usize,
    pub max_depth: usize,
    /// Cap on interested profiles sampled into a thread.
    pub no_profiles: usize,
    pub p_critic: f64,
    pub p_short: f64,
    pub min_comment_len: usize,
    pub max_comment_len: usize,
    /// k of the top-k reply-target sampling.
    pub no_sampled_comments: usize,
    /// Base per-attempt commenting probability of round 1.
    pub default_comment_prob: f64,
    /// Geometric per-round decay of the commenting probability.
    pub comment_prob_decay: f64,
    pub comment_prob_floor: f64,
    /// Reselects allowed after a reply target turns out to be full.
    pub max_reselect: u32,
    pub seed: u64,
}

impl Default for SimulationParams {
    fn default() -> Self {
        Self {
            no_threads: 1,
            no_rounds: 2,
            no_actions: 3,
            no_max_comments: 3,
            max_depth: 5,
            no_profiles: 40,
            p_critic: 0.7,
            p_short: 0.7,
            min_comment_len: 5,
            max_comment_len: 20,
            no_sampled_comments: 10,
            default_comment_prob: 0.7,
            comment_prob_decay: 0.7,
            comment_prob_floor: 0.05,
            max_reselect: 5,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid simulation parameter `{field}`: {reason}")]
pub struct InvalidParams {
    pub field: &'static str,
    pub reason: &'static str,
}

impl SimulationParams {
    pub fn validate(&self) -> Result<(), InvalidParams> {
        let bad = |field, reason| Err(InvalidParams { field, reason });
        for (field, p) in [
            ("p_critic", self.p_critic),
            ("p_short", self.p_short),
            ("default_comment_prob", self.default_comment_prob),
            ("comment_prob_decay", self.comment_prob_decay),
            ("comment_prob_floor", self.comment_prob_floor),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(field, "must lie in [0, 1]");
            }
        }
        for (field, n) in [
            ("no_threads", self.no_threads),
            ("no_rounds", self.no_rounds as usize),
            ("no_actions", self.no_actions as usize),
            ("no_max_comments", self.no_max_comments),
            ("max_depth", self.max_depth),
            ("no_profiles", self.no_profiles),
            ("min_comment_len", self.min_comment_len),
            ("no_sampled_comments", self.no_sampled_comments),
        ] {
            if n == 0 {
                return bad(field, "must be at least 1");
            }
        }
        if self.min_comment_len > self.max_comment_len {
            return bad("min_comment_len", "must not exceed max_comment_len");
        }
        Ok(())
    }

    /// Commenting probability for round `round` (1-based):
    /// `min(base, max(base * decay^(round-1), floor))`.
    pub fn comment_prob(&self, round: u32) -> f64 {
        let base = self.default_comment_prob;
        let decayed = base * self.comment_prob_decay.powi(round.saturating_sub(1) as i32);
        decayed.max(self.comment_prob_floor).min(base)
    }

    pub fn limits(&self) -> TreeLimits {
        TreeLimits {
            max_depth: self.max_depth,
            max_children: self.no_max_comments,
        }
    }
}
