//! Exact and heuristic solvers sharing one report type.

mod branch_and_bound;
mod brute_force;
mod dijkstra;
mod ksp;
mod local_search;

use std::fmt;
use std::time::Duration;

use thiserror::Error;

use crate::model::{Cost, PathSolution};

pub use branch_and_bound::{branch_and_bound, branch_and_bound_observed, BranchAndBoundConfig, NodeView};
pub use brute_force::{brute_force, enumerate_simple_paths, BruteForceGuard, GuardExceeded};
pub use dijkstra::{dijkstra, Direction, ShortestPaths};
pub use ksp::k_shortest_paths;
pub use local_search::{local_search, LocalSearchConfig};

/// An objective bound; `Infinite` orders above every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    Finite(Cost),
    Infinite,
}

impl Bound {
    pub fn finite(self) -> Option<Cost> {
        match self {
            Bound::Finite(v) => Some(v),
            Bound::Infinite => None,
        }
    }
}

impl From<Option<Cost>> for Bound {
    fn from(v: Option<Cost>) -> Self {
        v.map_or(Bound::Infinite, Bound::Finite)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(v) => write!(f, "{v}"),
            Bound::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    /// Lower and upper bound certified equal.
    Optimal,
    /// Incumbent without an optimality certificate.
    Feasible,
    /// No source-to-sink path exists.
    Infeasible,
    /// Stopped by the time limit before closing the gap.
    TimeLimit,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimal => "optimal",
            Status::Feasible => "feasible",
            Status::Infeasible => "infeasible",
            Status::TimeLimit => "time_limit",
        })
    }
}

/// Result of one solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub lower_bound: Bound,
    pub upper_bound: Bound,
    pub incumbent: Option<PathSolution>,
    pub seconds_to_best: Duration,
    pub seconds_total: Duration,
    pub nodes_explored: u64,
    pub status: Status,
    /// Objective of every accepted incumbent, in order of discovery.
    pub incumbent_history: Vec<Cost>,
}

impl SolveReport {
    pub(crate) fn infeasible(seconds_total: Duration, nodes_explored: u64) -> Self {
        SolveReport {
            lower_bound: Bound::Infinite,
            upper_bound: Bound::Infinite,
            incumbent: None,
            seconds_to_best: Duration::ZERO,
            seconds_total,
            nodes_explored,
            status: Status::Infeasible,
            incumbent_history: Vec::new(),
        }
    }

    pub fn objective(&self) -> Option<Cost> {
        self.incumbent.as_ref().map(PathSolution::objective)
    }

    /// Percentage gap between the bounds; see [`optimality_gap`].
    pub fn gap_pct(&self) -> Result<f64, GapError> {
        match (self.lower_bound, self.upper_bound) {
            (_, Bound::Infinite) => Err(GapError::UnboundedUpper),
            (Bound::Infinite, Bound::Finite(_)) => Err(GapError::Inverted),
            (Bound::Finite(lb), Bound::Finite(ub)) => optimality_gap(lb as f64, ub as f64),
        }
    }

    /// Equality ignoring wall-clock fields.
    pub fn same_outcome(&self, other: &SolveReport) -> bool {
        self.lower_bound == other.lower_bound
            && self.upper_bound == other.upper_bound
            && self.incumbent == other.incumbent
            && self.nodes_explored == other.nodes_explored
            && self.status == other.status
            && self.incumbent_history == other.incumbent_history
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GapError {
    #[error("gap undefined without a finite upper bound")]
    UnboundedUpper,
    #[error("lower bound exceeds upper bound")]
    Inverted,
}

/// `100 * (ub - lb) / ub`, and zero when the bounds coincide.
///
/// Takes floating values so that group means can be fed in directly.
pub fn optimality_gap(lb: f64, ub: f64) -> Result<f64, GapError> {
    if !ub.is_finite() {
        return Err(GapError::UnboundedUpper);
    }
    if lb > ub {
        return Err(GapError::Inverted);
    }
    if ub == lb || ub <= 0.0 {
        return Ok(0.0);
    }
    Ok(100.0 * (ub - lb) / ub)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_examples() {
        assert_eq!(optimality_gap(70658.9, 70658.9), Ok(0.0));
        assert_eq!(optimality_gap(0.0, 0.0), Ok(0.0));
        assert_eq!(optimality_gap(99.0, 100.0), Ok(1.0));
        assert_eq!(optimality_gap(0.0, f64::INFINITY), Err(GapError::UnboundedUpper));
        assert_eq!(optimality_gap(5.0, 4.0), Err(GapError::Inverted));
    }

    #[test]
    fn infinite_bound_orders_last() {
        assert!(Bound::Finite(u64::MAX) < Bound::Infinite);
        assert_eq!(Bound::from(None), Bound::Infinite);
        assert_eq!(Bound::Finite(3).to_string(), "3");
        assert_eq!(Bound::Infinite.to_string(), "inf");
    }

    #[test]
    fn report_gap_requires_upper_bound() {
        let r = SolveReport::infeasible(Duration::ZERO, 0);
        assert_eq!(r.gap_pct(), Err(GapError::UnboundedUpper));
    }
}
