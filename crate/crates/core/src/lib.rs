//! Light spanners for graphs of bounded pathwidth and catwidth, built by the
//! greedy algorithm over a monotone spanning tree and certified with
//! explicit charging schemes.
//!
//! The usual flow is [`spanner::pipeline`]: normalize the decomposition,
//! reduce degrees, complete the graph, pick the lightest monotone tree,
//! build and verify a charging scheme, run the greedy spanner, certify it,
//! and lift it back to the input graph.

pub mod charging;
pub mod decomposition;
pub mod error;
pub mod graph;
pub mod monotone;
pub mod reductions;
pub mod spanner;
pub mod toolkit;

pub use error::{Error, Result};
pub use graph::{EdgeId, Rational, TreeEdges, VertexId, WeightedGraph};
