//! Domain types shared across the crate: profiles, comment trees, tags and
//! aggregated labels.

mod attribute;
mod profile;
mod tag;
mod tree;

pub use attribute::{Attribute, AttributeKind, UnknownAttribute};
pub use profile::{
    is_valid_username, EducationCategory, IncomeLevel, Profile, ProfileInvalid,
    RelationshipStatus, Sex, MAX_AGE, MIN_AGE,
};
pub use tag::{
    AttributeTag, CoarseHardness, CommentKey, ProfileLabel, ProfileLabelSet, TagInvalid,
    TagSource, TagVerdict,
};
pub use tree::{
    CommentDraft, CommentId, CommentNode, ThreadTree, TreeError, TreeLimits, ROOT_ID,
    SYSTEM_AUTHOR,
};

pub(crate) use tag::in_scale;

#[cfg(test)]
pub(crate) use profile::sample_profile;
