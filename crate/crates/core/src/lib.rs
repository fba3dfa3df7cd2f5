//! Exact solver for the weighted discrete p-center problem on tree networks.
//!
//! Centers may sit anywhere on edges; demands are the weighted vertices. The
//! crate provides an `O(p log(n/p))` feasibility test on top of
//! `O(n log n)` envelope preprocessing, two optimizers, and brute-force
//! oracles used to cross-check everything.

pub mod bench;
pub mod envelope;
pub mod feasibility;
pub mod gen;
pub mod numeric;
pub mod optimizer;
pub mod oracle;
pub mod spine;
pub mod tree;

pub use numeric::{Exact, Scalar};
pub use tree::{binarize, parse_tree, PointOnTree, RootedBinaryTree, TreeError, TreeNetwork, VertexId};
