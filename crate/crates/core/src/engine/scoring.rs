use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::model::{CommentId, ThreadTree, TreeLimits};

/// Weight given to zero-score candidates so they stay reachable.
pub const ZERO_SCORE_WEIGHT: f64 = 1e-6;

/// Reply-interest score of every eligible node for `author`:
/// `(5m + 2[root] + k) / depth`, where `m` and `k` count the author's own and
/// everyone else's comments in the node's subtree.
///
/// A node is eligible when its depth is below `max_depth` and, unless it is
/// the root, it has fewer than `max_children` replies.
pub fn score_candidates(tree: &ThreadTree, author: &str, limits: &TreeLimits) -> BTreeMap<CommentId, f64> {
    let mut scores = BTreeMap::new();
    for node in &tree.nodes {
        if tree.check_insert(node.id, limits).is_err() {
            continue;
        }
        let depth = tree.depth(node.id).expect("node from tree");
        let (m, k) = tree.subtree_counts(node.id, author).expect("node from tree");
        let bonus = if node.is_root() { 2.0 } else { 0.0 };
        scores.insert(node.id, (5.0 * m as f64 + bonus + k as f64) / depth as f64);
    }
    scores
}

/// Keep the `k` best candidates (ties to the smaller id) and draw one with
/// probability proportional to its score.
pub fn select_reply_target<R: Rng + ?Sized>(
    scores: &BTreeMap<CommentId, f64>,
    k: usize,
    rng: &mut R,
) -> Option<CommentId> {
    let mut ranked: Vec<(CommentId, f64)> = scores.iter().map(|(&id, &s)| (id, s)).collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    ranked.truncate(k.max(1));
    match ranked.len() {
        0 => None,
        1 => Some(ranked[0].0),
        _ => {
            let weights = ranked.iter().map(|(_, s)| if *s > 0.0 { *s } else { ZERO_SCORE_WEIGHT });
            let dist = WeightedIndex::new(weights).ok()?;
            Some(ranked[dist.sample(rng)].0)
        }
    }
}
