//! Sequential junction-tree sampling for decomposable graphs.
//!
//! The crate provides:
//!
//! - labeled undirected graphs with decomposability testing and clique
//!   extraction ([`graph`]);
//! - junction trees with validation, exact counting of the number of
//!   junction-tree representations of a graph (with incremental updates),
//!   and uniform link redrawing at a separator ([`jtree`]);
//! - transdimensional kernels that grow a junction tree by one vertex and
//!   collapse it back, together with their exact transition densities
//!   ([`kernels`]);
//! - a sequential Monte Carlo sampler over junction trees that yields
//!   unbiased normalizing-constant estimates (e.g. the number of
//!   decomposable graphs of a given order) and graph posterior
//!   approximations, plus a conditional variant for particle Gibbs
//!   ([`smc`]);
//! - clique/separator-factorized target distributions: a uniform counting
//!   target and the Gaussian graphical model marginal likelihood under a
//!   hyper-Wishart prior, with synthetic data generation ([`models`]).
//!
//! All randomness flows through counter-based streams keyed by
//! `(seed, domain, step, particle)`, so runs are reproducible regardless of
//! thread scheduling.

pub mod cli;
pub mod error;
pub mod graph;
pub mod io;
pub mod jtree;
pub mod kernels;
pub mod models;
pub mod rng;
pub mod smc;

pub use error::{Error, Result};
pub use graph::{Graph, VertexId, VertexSet};
pub use jtree::{JunctionTree, MuFactorization, SeparatorForest};



