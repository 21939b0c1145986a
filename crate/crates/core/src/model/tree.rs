use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Attribute, AttributeTag};

/// Pseudo-author of simulated root nodes; the root is a generated topic, not
/// an agent comment.
pub const SYSTEM_AUTHOR: &str = "SYSTEM";

/// Per-thread comment ordinal. The root is always 0 and ids grow with
/// insertion order.
pub type CommentId = u64;

pub const ROOT_ID: CommentId = 0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommentNode {
    pub id: CommentId,
    pub author: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<CommentId>,
    #[serde(default)]
    pub children: Vec<CommentId>,
    pub round: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reasoning_trace: Option<String>,
    #[serde(default)]
    pub tags: Vec<AttributeTag>,
    /// Identifier the comment had in an imported source, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub external_id: Option<String>,
}

impl CommentNode {
    pub fn is_root(&self) -> bool {
        self.parent.is_none()
    }

    pub fn is_system(&self) -> bool {
        self.author == SYSTEM_AUTHOR
    }
}

/// What a caller supplies to [`ThreadTree::insert_comment`]; the tree assigns
/// the id and wires parent/children.
#[derive(Debug, Clone, Default)]
pub struct CommentDraft {
    pub author: String,
    pub text: String,
    pub round: u32,
    pub reasoning_trace: Option<String>,
    pub tags: Vec<AttributeTag>,
}

/// Structural limits enforced on insertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeLimits {
    /// Maximum node depth, root depth being 1.
    pub max_depth: usize,
    /// Maximum replies under one non-root comment. The root is exempt.
    pub max_children: usize,
}

impl Default for TreeLimits {
    fn default() -> Self {
        Self {
            max_depth: 5,
            max_children: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("unknown comment id {0}")]
    UnknownNode(CommentId),
    #[error("inserting under {parent} would exceed max depth {max_depth}")]
    DepthExceeded { parent: CommentId, max_depth: usize },
    #[error("comment {parent} already has {max_children} replies")]
    FanoutExceeded { parent: CommentId, max_children: usize },
    #[error("malformed tree: {0}")]
    Malformed(String),
}

/// A comment thread: rooted tree of comments under a generated topic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreadTree {
    pub id: String,
    pub target_attribute: Attribute,
    pub topic_question: String,
    pub topic_description: String,
    /// Indexed by id: `nodes[i].id == i`.
    pub nodes: Vec<CommentNode>,
    pub participants: Vec<String>,
}

impl ThreadTree {
    /// A fresh thread holding only the topic root.
    pub fn new(
        id: impl Into<String>,
        target_attribute: Attribute,
        question: impl Into<String>,
        description: impl Into<String>,
    ) -> Self {
        let question = question.into();
        let description = description.into();
        let root = CommentNode {
            id: ROOT_ID,
            author: SYSTEM_AUTHOR.to_string(),
            text: format!("Question: {question}\n\nQuestion description: {description}"),
            parent: None,
            children: Vec::new(),
            round: 0,
            reasoning_trace: None,
            tags: Vec::new(),
            external_id: None,
        };
        Self {
            id: id.into(),
            target_attribute,
            topic_question: question,
            topic_description: description,
            nodes: vec![root],
            participants: Vec::new(),
        }
    }

    pub fn root(&self) -> &CommentNode {
        &self.nodes[ROOT_ID as usize]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: CommentId) -> Result<&CommentNode, TreeError> {
        self.nodes
            .get(usize::try_from(id).map_err(|_| TreeError::UnknownNode(id))?)
            .ok_or(TreeError::UnknownNode(id))
    }

    pub fn node_mut(&mut self, id: CommentId) -> Result<&mut CommentNode, TreeError> {
        self.nodes
            .get_mut(usize::try_from(id).map_err(|_| TreeError::UnknownNode(id))?)
            .ok_or(TreeError::UnknownNode(id))
    }

    /// Comments authored by profiles, i.e. everything except a SYSTEM root.
    pub fn comments(&self) -> impl Iterator<Item = &CommentNode> {
        self.nodes.iter().filter(|n| !n.is_system())
    }

    /// Ordered chain from the root to `id`, both ends included.
    pub fn path_to_root(&self, id: CommentId) -> Result<Vec<&CommentNode>, TreeError> {
        let mut chain = Vec::new();
        let mut cursor = Some(id);
        while let Some(cur) = cursor {
            let node = self.node(cur)?;
            chain.push(node);
            if chain.len() > self.nodes.len() {
                return Err(TreeError::Malformed(format!("cycle through {cur}")));
            }
            cursor = node.parent;
        }
        chain.reverse();
        Ok(chain)
    }

    /// Depth of `id`, the root being depth 1.
    pub fn depth(&self, id: CommentId) -> Result<usize, TreeError> {
        let mut depth = 0;
        let mut cursor = Some(id);
        while let Some(cur) = cursor {
            depth += 1;
            if depth > self.nodes.len() {
                return Err(TreeError::Malformed(format!("cycle through {cur}")));
            }
            cursor = self.node(cur)?.parent;
        }
        Ok(depth)
    }

    /// Counts over the subtree rooted at `id` (node included): `(m, k)` where
    /// `m` is comments by `author` and `k` comments by everyone else.
    /// SYSTEM-authored nodes count towards neither.
    pub fn subtree_counts(&self, id: CommentId, author: &str) -> Result<(usize, usize), TreeError> {
        self.node(id)?;
        let (mut own, mut other) = (0, 0);
        let mut stack = vec![id];
        while let Some(cur) = stack.pop() {
            let node = self.node(cur)?;
            if !node.is_system() {
                if node.author == author {
                    own += 1;
                } else {
                    other += 1;
                }
            }
            stack.extend(node.children.iter().copied());
        }
        Ok((own, other))
    }

    /// Whether `parent` can take another reply under `limits`.
    pub fn check_insert(&self, parent: CommentId, limits: &TreeLimits) -> Result<(), TreeError> {
        let depth = self.depth(parent)?;
        if depth >= limits.max_depth {
            return Err(TreeError::DepthExceeded {
                parent,
                max_depth: limits.max_depth,
            });
        }
        let node = self.node(parent)?;
        if !node.is_root() && node.children.len() >= limits.max_children {
            return Err(TreeError::FanoutExceeded {
                parent,
                max_children: limits.max_children,
            });
        }
        Ok(())
    }

    /// Append a reply under `parent`, returning the new comment's id.
    pub fn insert_comment(
        &mut self,
        parent: CommentId,
        draft: CommentDraft,
        limits: &TreeLimits,
    ) -> Result<CommentId, TreeError> {
        self.check_insert(parent, limits)?;
        let id = self.nodes.len() as CommentId;
        if draft.author != SYSTEM_AUTHOR && !self.participants.contains(&draft.author) {
            self.participants.push(draft.author.clone());
        }
        self.nodes.push(CommentNode {
            id,
            author: draft.author,
            text: draft.text,
            parent: Some(parent),
            children: Vec::new(),
            round: draft.round,
            reasoning_trace: draft.reasoning_trace,
            tags: draft.tags,
            external_id: None,
        });
        self.node_mut(parent)?.children.push(id);
        Ok(id)
    }

    /// Structural check: one root at id 0, consistent parent/child links,
    /// acyclic, every non-SYSTEM author listed as a participant.
    pub fn validate(&self) -> Result<(), TreeError> {
        let malformed = |msg: String| Err(TreeError::Malformed(msg));
        if self.nodes.is_empty() {
            return malformed("no root".into());
        }
        let mut child_links = 0usize;
        for (idx, node) in self.nodes.iter().enumerate() {
            if node.id != idx as CommentId {
                return malformed(format!("node at index {idx} has id {}", node.id));
            }
            match node.parent {
                None if idx != 0 => return malformed(format!("second root {}", node.id)),
                Some(_) if idx == 0 => return malformed("root has a parent".into()),
                Some(p) => {
                    let parent = self.node(p)?;
                    if parent.children.iter().filter(|&&c| c == node.id).count() != 1 {
                        return malformed(format!("{p} does not list child {}", node.id));
                    }
                }
                None => {}
            }
            for &c in &node.children {
                if self.node(c)?.parent != Some(node.id) {
                    return malformed(format!("child {c} does not point back to {}", node.id));
                }
            }
            child_links += node.children.len();
            if !node.is_system() && idx != 0 && !self.participants.contains(&node.author) {
                return malformed(format!("author {} not a participant", node.author));
            }
        }
        if child_links != self.nodes.len() - 1 {
            return malformed("child links do not match node count".into());
        }
        // Every node must reach the root; depth() reports cycles.
        for node in &self.nodes {
            self.depth(node.id)?;
        }
        Ok(())
    }

    /// Distinct non-SYSTEM authors in order of first appearance.
    pub fn authors(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        self.comments()
            .filter_map(|n| seen.insert(n.author.as_str()).then_some(n.author.as_str()))
            .collect()
    }
}
