//! Packing and covering a fixed directed pattern H inside weighted directed
//! multigraphs.
//!
//! The pieces, bottom-up:
//!
//! - [`graph`]: host digraphs, patterns, generators and the text format.
//! - [`embed`]: enumeration of H-copies and H-freeness tests.
//! - [`lp`]: the fractional cover / packing LP pair, solved by an exact
//!   (or floating) simplex, with duality and slackness certificates.
//! - [`fparam`]: `disc_H(L)`, `f(H, L)`, the searched bound on `f(H)`, and
//!   the acyclic / bipartite subgraph parameters.
//! - [`cover`]: the derandomized peel-and-partition cover algorithm.
//! - [`exact`]: branch-and-bound oracles for the integral cover and packing.
//! - [`extremal`]: cycle decompositions of complete graphs, their random
//!   orientations, and the arc-count bound for cycle-free digraphs.

pub mod caps;
pub mod cover;
pub mod embed;
pub mod error;
pub mod exact;
pub mod extremal;
pub mod fparam;
pub mod graph;
pub mod lp;
pub mod num;

pub use caps::Caps;
pub use error::{Error, Result};
pub use graph::{ArcId, Digraph, Pattern, UndirectedGraph};
pub use num::{Rational, Scalar};
