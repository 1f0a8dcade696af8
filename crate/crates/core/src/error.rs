use std::io;

use crate::ca_model::TestSuite;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid arguments: {0}")]
    InvalidArguments(String),

    #[error("invalid combination: {0}")]
    InvalidCombination(String),

    #[error("invalid test case: {0}")]
    InvalidTestCase(String),

    #[error("cannot parse spec {input:?}: {reason}")]
    SpecParse { input: String, reason: String },

    /// The n-bit enumerator cannot represent masks this wide.
    #[error("unsupported size: k = {k} exceeds the {limit}-parameter limit of the n-bit enumerator")]
    UnsupportedSize { k: usize, limit: usize },

    #[error("arithmetic overflow computing {0}")]
    Overflow(String),

    #[error("capacity exceeded: {requested} interaction elements requested, budget is {budget}")]
    Capacity { requested: u128, budget: u64 },

    #[error("incomplete coverage: {remaining} interaction elements still uncovered after {} rows", .suite.len())]
    IncompleteCoverage {
        remaining: u64,
        suite: Box<TestSuite>,
    },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
