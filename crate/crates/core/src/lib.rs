//! Consistent random vertex orderings on graphs and hereditary properties.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: finite graphs, induced embeddings and structural predicates.
//! - [`template`]: full/empty-marked templates, blow-ups and the exact
//!   uniform/non-uniform classification of templates.
//! - [`bernoulli`]: exact Bernoulli polynomials and the closed-form ordering
//!   probabilities of mod-1 conditioned uniforms.
//! - [`sampler`]: seeded samplers for every consistent ordering construction.
//! - [`lab`]: Monte Carlo estimation, goodness-of-fit tests and blow-up
//!   statistics.
//! - [`classify`]: hypothesis checkers deciding uniformity of hereditary
//!   properties.

pub mod bernoulli;
pub mod classify;
pub mod error;
pub mod graph;
pub mod lab;
pub mod rng;
pub mod sampler;
pub mod template;
pub mod verdict;

pub use error::{Error, Result};
