//! Profile-seeded comment-thread simulation, attribute tagging, human review
//! and attribute-inference evaluation.

pub mod analytics;
pub mod cli;
pub mod datastore;
pub mod engine;
pub mod eval;
pub mod gateway;
pub mod gazetteer;
pub mod model;
pub mod oracle;
pub mod profiles;
pub mod review;
