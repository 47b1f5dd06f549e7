//! Exhaustive enumeration of simple source-to-sink paths. Serves as the
//! reference oracle for the other solvers.

use std::time::{Duration, Instant};

use thiserror::Error;

use super::{Bound, SolveReport, Status};
use crate::model::{evaluate, Instance, PathSolution, VertexId};

/// Limits for exhaustive enumeration. `None` disables a limit.
#[derive(Debug, Clone, Copy, Default)]
pub struct BruteForceGuard {
    pub max_paths: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl BruteForceGuard {
    pub fn paths(max_paths: u64) -> Self {
        BruteForceGuard { max_paths: Some(max_paths), time_limit: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("enumeration guard exceeded after {paths} paths")]
pub struct GuardExceeded {
    pub paths: u64,
}

/// Calls `visit` with every simple source-to-sink path, depth first, out-arcs
/// taken in index order. Stops early when `visit` returns `false`.
pub fn enumerate_simple_paths<F>(instance: &Instance, mut visit: F)
where
    F: FnMut(&[VertexId]) -> bool,
{
    fn walk<F: FnMut(&[VertexId]) -> bool>(
        instance: &Instance,
        path: &mut Vec<VertexId>,
        on_path: &mut [bool],
        visit: &mut F,
    ) -> bool {
        let u = *path.last().unwrap();
        if u == instance.sink() {
            return visit(path);
        }
        for &a in instance.out_arcs(u) {
            let v = instance.arc(a).head;
            if on_path[v] {
                continue;
            }
            on_path[v] = true;
            path.push(v);
            let go_on = walk(instance, path, on_path, visit);
            path.pop();
            on_path[v] = false;
            if !go_on {
                return false;
            }
        }
        true
    }

    let mut on_path = vec![false; instance.vertex_count()];
    on_path[instance.source()] = true;
    let mut path = vec![instance.source()];
    walk(instance, &mut path, &mut on_path, &mut visit);
}

/// Evaluates every simple path and keeps the first one of minimum objective.
pub fn brute_force(instance: &Instance, guard: BruteForceGuard) -> Result<SolveReport, GuardExceeded> {
    let start = Instant::now();
    let mut best: Option<PathSolution> = None;
    let mut history = Vec::new();
    let mut time_to_best = Duration::ZERO;
    let mut paths = 0u64;
    let mut exceeded = false;

    enumerate_simple_paths(instance, |path| {
        paths += 1;
        if guard.max_paths.is_some_and(|m| paths > m)
            || guard.time_limit.is_some_and(|t| paths.is_multiple_of(256) && start.elapsed() > t)
        {
            exceeded = true;
            return false;
        }
        let sol = evaluate(instance, path).expect("enumerated paths are simple s-t paths");
        if best.as_ref().is_none_or(|b| sol.objective() < b.objective()) {
            history.push(sol.objective());
            time_to_best = start.elapsed();
            best = Some(sol);
        }
        true
    });

    if exceeded {
        return Err(GuardExceeded { paths: paths - 1 });
    }
    let elapsed = start.elapsed();
    Ok(match best {
        None => SolveReport::infeasible(elapsed, paths),
        Some(sol) => SolveReport {
            lower_bound: Bound::Finite(sol.objective()),
            upper_bound: Bound::Finite(sol.objective()),
            incumbent: Some(sol),
            seconds_to_best: time_to_best,
            seconds_total: elapsed,
            nodes_explored: paths,
            status: Status::Optimal,
            incumbent_history: history,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{seven_vertex, single_arc, SevenVertex};
    use crate::model::Arc;

    #[test]
    fn seven_vertex_optimum() {
        let inst = seven_vertex(10);
        let r = brute_force(&inst, BruteForceGuard::default()).unwrap();
        assert_eq!(r.status, Status::Optimal);
        assert_eq!(r.objective(), Some(7));
        assert_eq!(r.incumbent.unwrap().vertices, SevenVertex::path(&["s", "a", "c", "d", "t"]));
    }

    #[test]
    fn seven_vertex_path_count() {
        let mut count = 0;
        enumerate_simple_paths(&seven_vertex(10), |_| {
            count += 1;
            true
        });
        assert_eq!(count, 12);
    }

    #[test]
    fn single_arc_instance() {
        let r = brute_force(&single_arc(5), BruteForceGuard::default()).unwrap();
        assert_eq!(r.objective(), Some(5));
        assert_eq!(r.lower_bound, Bound::Finite(5));
    }

    #[test]
    fn source_without_out_arcs_is_infeasible() {
        let inst = Instance::new(3, vec![Arc::new(1, 2, 1)], vec![], 0, 2).unwrap();
        let r = brute_force(&inst, BruteForceGuard::default()).unwrap();
        assert_eq!(r.status, Status::Infeasible);
        assert!(r.incumbent.is_none());
    }

    #[test]
    fn guard_trips() {
        let err = brute_force(&seven_vertex(10), BruteForceGuard::paths(4)).unwrap_err();
        assert_eq!(err, GuardExceeded { paths: 4 });
    }
}
