//! Shortest paths with exclusive-disjunction arc-pair conflicts.
//!
//! Given a directed graph with non-negative integer arc costs, a source, a
//! sink and a set of conflicting arc pairs, find a simple source-to-sink path
//! minimising arc cost plus the penalty of every pair whose two arcs are both
//! used or both unused.
//!
//! ```
//! use spedac::fixtures::seven_vertex;
//! use spedac::solvers::{branch_and_bound, BranchAndBoundConfig, Status};
//!
//! let instance = seven_vertex(10);
//! let report = branch_and_bound(&instance, &BranchAndBoundConfig::default());
//! assert_eq!(report.status, Status::Optimal);
//! assert_eq!(report.objective(), Some(7));
//! ```
//!
//! Runnable walkthroughs live in the crate's `examples/` directory; the
//! `spedac` binary wraps generation, solving, export and benchmarking.

pub mod bench;
pub mod export;
pub mod fixtures;
pub mod generators;
pub mod io;
pub mod model;
pub mod solvers;

pub use model::{
    conflict_penalty_term, evaluate, validate_selection, Arc, Conflict, Cost, Instance, InstanceError, PathSolution,
};
