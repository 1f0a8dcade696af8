//! Fast t-way combination generation and interaction coverage queries for
//! combinatorial interaction testing.
//!
//! The crate is organised bottom-up:
//!
//! * [`ca_model`]: covering-array specifications, rows, suites and the
//!   coverage verification oracle.
//! * [`combgen`]: t-combinations of k parameter indices, generated by an
//!   explicit-stack iterative search, plus the n-bit enumerator baseline.
//! * [`store`]: the set of still-uncovered interaction elements, backed by a
//!   hash table keyed by combination, a sorted array with a per-combination
//!   offset index, or a flat array searched exhaustively.
//! * [`greedy`]: a one-test-at-a-time generator that uses a store as its
//!   fitness function.
//! * [`bench`]: generation and search-time benchmark harness.
//! * [`cli`]: the `tway` command-line driver.

pub mod bench;
pub mod ca_model;
pub mod cli;
pub mod combgen;
mod error;
pub mod greedy;
pub mod store;

pub use ca_model::{
    extract_element, verify_coverage, Combination, CoveringArraySpec, InteractionElement,
    TestCase, TestSuite, VerificationReport,
};
pub use combgen::{count_combinations, generate_nbit, generate_stack, CombinationList};
pub use error::{Error, Result};
pub use greedy::{generate_ca, GreedyConfig};
pub use store::{build_store, CoverageStore, InteractionStore, StoreMechanism};
