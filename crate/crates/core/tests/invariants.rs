mod common;

use chrono::DateTime;
use paiforge::datastore::{load_bundle, save_bundle, DatasetBundle, Manifest};
use paiforge::engine::{score_candidates, select_reply_target};
use paiforge::model::{Attribute, CommentDraft, ThreadTree, TreeError, TreeLimits};
use paiforge::oracle::{replay_decisions, DecisionAction, TaggingDecision};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn attribute() -> impl Strategy<Value = Attribute> {
    proptest::sample::select(Attribute::ALL.to_vec())
}

/// A tree grown from `(parent pick, author)` steps; inserts that would break
/// the limits are expected to be refused.
fn grow(steps: &[(usize, usize)], limits: &TreeLimits) -> ThreadTree {
    let authors = common::usernames(4);
    let mut tree = ThreadTree::new("t", Attribute::Sex, "q", "d");
    for (i, (pick, author)) in steps.iter().enumerate() {
        let parent = (*pick % tree.len()) as u64;
        let draft = CommentDraft {
            author: authors[*author % 4].clone(),
            text: format!("comment {i}"),
            round: 1,
            tags: vec![common::model_tag(Attribute::Age, "30")],
            ..Default::default()
        };
        match tree.insert_comment(parent, draft, limits) {
            Ok(_) => {}
            Err(TreeError::DepthExceeded { .. } | TreeError::FanoutExceeded { .. }) => {}
            Err(e) => panic!("{e}"),
        }
    }
    tree
}

fn decision_strategy() -> impl Strategy<Value = (u64, u8, u32, u8)> {
    (0u64..12, 0u8..3, 0u32..60, 1u8..=5)
}

fn to_decision((comment, action, minute, hardness): (u64, u8, u32, u8)) -> TaggingDecision {
    let action = [DecisionAction::Accept, DecisionAction::Reject, DecisionAction::Edit][action as usize];
    TaggingDecision {
        thread_id: "t".into(),
        comment_id: comment,
        attribute: Attribute::Age,
        action,
        edited_guesses: (action == DecisionAction::Edit).then(|| vec![format!("{}", 20 + hardness)]),
        hardness_fine: (action != DecisionAction::Reject).then_some(hardness),
        certainty: None,
        labeler: "L".into(),
        timestamp: common::at_minute(minute),
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn grown_trees_respect_limits(steps in proptest::collection::vec((0usize..64, 0usize..4), 0..80),
                                  max_depth in 2usize..7, max_children in 1usize..5) {
        let limits = TreeLimits { max_depth, max_children };
        let tree = grow(&steps, &limits);
        prop_assert!(tree.validate().is_ok());
        for n in &tree.nodes {
            prop_assert!(tree.depth(n.id).unwrap() <= max_depth);
            if !n.is_root() {
                prop_assert!(n.children.len() <= max_children);
            }
        }
    }

    #[test]
    fn sampled_target_is_always_insertable(steps in proptest::collection::vec((0usize..64, 0usize..4), 0..60),
                                           k in 1usize..12, seed: u64) {
        let limits = TreeLimits::default();
        let tree = grow(&steps, &limits);
        let scores = score_candidates(&tree, "SpiralSphinx", &limits);
        prop_assert!(scores.values().all(|s| *s >= 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let target = select_reply_target(&scores, k, &mut rng).expect("the root always has room");
        prop_assert!(tree.check_insert(target, &limits).is_ok());
    }

    #[test]
    fn bundle_round_trips_byte_for_byte(steps in proptest::collection::vec((0usize..64, 0usize..4), 0..40), seed: u64) {
        let mut b = DatasetBundle::new(Manifest::new(seed, "prop", DateTime::UNIX_EPOCH));
        b.profiles = common::usernames(4).iter().enumerate().map(|(i, u)| common::profile(u, i)).collect();
        b.threads = vec![grow(&steps, &TreeLimits::default())];
        let dir = tempfile::tempdir().unwrap();
        save_bundle(&b, dir.path()).unwrap();
        let loaded = load_bundle(dir.path()).unwrap();
        prop_assert_eq!(&loaded, &b);
        let again = tempfile::tempdir().unwrap();
        save_bundle(&loaded, again.path()).unwrap();
        prop_assert_eq!(common::bundle_files(dir.path()), common::bundle_files(again.path()));
    }

    #[test]
    fn replay_ignores_log_order(raw in proptest::collection::vec(decision_strategy(), 0..30), seed: u64) {
        let base = grow(&(0..12).map(|i| (0, i)).collect::<Vec<_>>(), &TreeLimits { max_depth: 5, max_children: 3 });
        // Distinct timestamps make the order total.
        let mut seen = std::collections::BTreeSet::new();
        let decisions: Vec<TaggingDecision> =
            raw.into_iter().filter(|d| seen.insert(d.2)).map(to_decision).collect();
        let mut shuffled = decisions.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rand::seq::SliceRandom::shuffle(shuffled.as_mut_slice(), &mut rng);
        let (mut a, mut b) = (vec![base.clone()], vec![base]);
        let fa = replay_decisions(&mut a, &decisions);
        let fb = replay_decisions(&mut b, &shuffled);
        prop_assert_eq!(a, b);
        prop_assert_eq!(fa.len(), fb.len());
    }

    #[test]
    fn attribute_names_round_trip(attr in attribute()) {
        prop_assert_eq!(Attribute::normalize(attr.as_str()), Some(attr));
        let json = serde_json::to_string(&attr).unwrap();
        prop_assert_eq!(serde_json::from_str::<Attribute>(&json).unwrap(), attr);
    }
}
