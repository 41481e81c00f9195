//! Spanning tree congestion at desk scale.
//!
//! * [`graph`] and [`tree`]: simple graphs, spanning trees, fundamental cuts,
//!   congestion reports and tree shapes.
//! * [`exact`]: spanning-tree enumeration, the matrix-tree count, exact and
//!   decision solvers, and a checker for the spider lemma.
//! * [`threepart`]: 3-Partition instances.
//! * [`reduction`]: the 3-Partition reduction onto proper interval graphs,
//!   with audits, witness trees and partition extraction.
//! * [`classify`]: proper interval ordering, claw and clique-cover checks.
//! * [`io`]: on-disk formats.

pub mod classify;
pub mod exact;
pub mod graph;
pub mod io;
pub mod reduction;
pub mod threepart;
pub mod tree;

pub use exact::{check_spider_lemma, enumerate_spanning_trees, spanning_tree_count, stc_decide, stc_exact, StcError};
pub use graph::{edge, Edge, Graph, GraphError, Vertex};
pub use reduction::{build_reduction, gamma_profile, ReductionArtifact, ReductionError, Role};
pub use threepart::{normalize_instance, solve_bruteforce, validate_instance, verify_partition, Instance, Partition};
pub use tree::{CongestionReport, ShapeKind, SpanningTree, Subtree, TreeError, TreeShape};
