//! Statistical toolkit for lexical rank-frequency distributions.
//!
//! The crate is organized around a small pipeline:
//!
//! 1. [`corpus`] ingests `token,count[,group,period]` tables (CSV/TSV) and
//!    slices them by category word list, group, or period.
//! 2. [`dist`] turns tables into ranked distributions and probability
//!    vectors, and computes entropy / perplexity / cumulative views.
//! 3. [`fitting`] fits the two competing models — geometric (log-linear in
//!    rank) and power law (log-linear in log rank) — by ordinary least
//!    squares, compares fits across groups with a paired t-test, and
//!    compares distributions rank-by-rank.
//! 4. [`generators`] builds synthetic distributions: the idealized
//!    geometric solver, seeded samplers, mixtures, memorylessness
//!    diagnostics, and an agent-level name-evolution simulator.
//! 5. [`trends`] assembles per-period measure series and correlates them
//!    against covariates.
//!
//! Everything is deterministic: sampling goes through the seedable
//! [`rng::SplitMix64`] generator, and ties in rankings break by token so
//! identical inputs always serialize identically.

pub mod corpus;
pub mod dist;
pub mod fitting;
pub mod generators;
pub mod rng;
pub mod trends;

pub use dist::{FrequencyTable, ProbabilityVector, RankedDistribution};
pub use fitting::FitResult;
