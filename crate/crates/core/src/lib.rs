//! Multipartite Turán numbers for disjoint cliques `kK_t`.
//!
//! The crate bundles closed-form extremal values, the graphs that realize
//! them, an exact packing detector, a branch-and-bound oracle computing
//! `ex(K_{n_1,...,n_r}, kK_t)` for small hosts, and a sweep harness that
//! compares the two.

pub mod constructions;
pub mod error;
pub mod formulas;
pub mod graph;
pub mod harness;
pub mod packing;
pub mod partition;
pub mod random;
pub mod solver;

pub use error::{Error, Result};
pub use graph::{MultipartiteGraph, PartSizes, VertexSet};
pub use partition::BlockPartition;
