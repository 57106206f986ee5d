//! Exact solver toolkit for 2-Club Cluster Edge Deletion: delete at most `k`
//! edges so that every connected component has diameter at most two.
//!
//! The pieces are
//! - [`graph`]: graphs, BFS distances, conflict quadruples;
//! - [`reduction`]: the six reduction rules and their fixpoint driver;
//! - [`solver`]: the branch-and-reduce search tree with per-case statistics;
//! - [`oracle`]: two deliberately naive exact solvers used as ground truth;
//! - [`analysis`]: branching numbers, branch-completeness checks and the
//!   Liu et al. Case 2.2.4 table;
//! - [`io`] and [`generate`]: the edge-list format and instance generators.

pub mod analysis;
pub mod error;
pub mod fixtures;
pub mod generate;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod reduction;
pub mod solver;

pub use error::{Error, Result};
pub use graph::{ConflictQuadruple, Edge, Graph};
pub use reduction::Instance;
