mod common;

use std::time::Duration;

use common::{best_completion, oracle_optimum, sweep_instances};
use spedac::export::{export_flow_model, verify_model_at_point, Assignment, SecMode};
use spedac::solvers::{
    branch_and_bound, branch_and_bound_observed, local_search, Bound, BranchAndBoundConfig, LocalSearchConfig, Status,
};
use spedac::Instance;

fn sample() -> Vec<(String, Instance)> {
    sweep_instances(3)
}

#[test]
fn node_bounds_never_exceed_best_completion() {
    for (label, inst) in sample().iter().filter(|(_, i)| i.vertex_count() <= 10) {
        let mut nodes = Vec::new();
        branch_and_bound_observed(inst, None, &mut |node| nodes.push((node.path.to_vec(), node.bound)));
        assert!(!nodes.is_empty());
        for (prefix, bound) in nodes {
            if let Some(best) = best_completion(inst, &prefix) {
                assert!(bound <= best, "{label}: prefix {prefix:?} bound {bound} > {best}");
            }
        }
    }
}

#[test]
fn exact_search_matches_oracle_in_parallel() {
    for (label, inst) in sample() {
        let serial = branch_and_bound(&inst, &BranchAndBoundConfig::default());
        let parallel = branch_and_bound(&inst, &BranchAndBoundConfig { time_limit: None, workers: 4 });
        let optimum = oracle_optimum(&inst);
        assert_eq!(serial.objective(), optimum, "{label}");
        assert_eq!(parallel.objective(), optimum, "{label}");
        assert_eq!(serial.status, Status::Optimal);
        assert_eq!(serial.lower_bound, serial.upper_bound);
        assert!(serial.incumbent_history.windows(2).all(|w| w[0] > w[1]));
    }
}

#[test]
fn heuristic_brackets_the_optimum() {
    for (label, inst) in sample() {
        let optimum = oracle_optimum(&inst).unwrap();
        for seed in 0..3 {
            let r = local_search(&inst, &LocalSearchConfig { seed, ..Default::default() });
            let found = r.objective().unwrap();
            let seed_value = r.incumbent_history[0];
            assert!(optimum <= found && found <= seed_value, "{label}");
            assert!(r.lower_bound <= Bound::Finite(optimum), "{label}");
            assert!(r.incumbent_history.windows(2).all(|w| w[0] > w[1]));
        }
    }
}

#[test]
fn time_limited_lower_bound_is_valid() {
    for (label, inst) in sample() {
        let optimum = oracle_optimum(&inst).unwrap();
        let r = branch_and_bound(&inst, &BranchAndBoundConfig::with_time_limit(Duration::ZERO));
        assert!(r.lower_bound <= Bound::Finite(optimum), "{label}");
        if let Some(found) = r.objective() {
            assert!(found >= optimum);
        }
    }
}

#[test]
fn solver_runs_are_reproducible() {
    for (_, inst) in sample().into_iter().take(20) {
        let a = branch_and_bound(&inst, &BranchAndBoundConfig::default());
        let b = branch_and_bound(&inst, &BranchAndBoundConfig::default());
        assert!(a.same_outcome(&b));
        let cfg = LocalSearchConfig { seed: 11, ..Default::default() };
        assert!(local_search(&inst, &cfg).same_outcome(&local_search(&inst, &cfg)));
    }
}

#[test]
fn mtz_rejects_a_detached_cycle() {
    // path 0->3 plus the cycle 1->2->1: flow-balanced, so only the MTZ rows can object
    let arcs = vec![
        spedac::Arc::new(0, 3, 5),
        spedac::Arc::new(1, 2, 1),
        spedac::Arc::new(2, 1, 1),
        spedac::Arc::new(0, 1, 1),
        spedac::Arc::new(2, 3, 1),
    ];
    let inst = Instance::new(4, arcs, vec![spedac::Conflict::new(0, 3, 9)], 0, 3).unwrap();
    let model = export_flow_model(&inst, SecMode::Mtz);
    for u1 in 0..=3i64 {
        for u2 in 0..=3i64 {
            let mut point = Assignment::default();
            for (name, x) in [("x_0_3", 1), ("x_1_2", 1), ("x_2_1", 1), ("x_0_1", 0), ("x_2_3", 0)] {
                point.set(name, x);
            }
            point.set("y_0", 0);
            point.set("obj_const", 1);
            for (v, u) in [(0, 0), (1, u1), (2, u2), (3, 3)] {
                point.set(format!("u_{v}"), u);
            }
            assert!(!verify_model_at_point(&model, &point).unwrap().is_feasible());
        }
    }
    // without ordering rows the same selection passes
    let omit = export_flow_model(&inst, SecMode::Omit);
    let mut point = Assignment::default();
    for (name, x) in
        [("x_0_3", 1), ("x_1_2", 1), ("x_2_1", 1), ("x_0_1", 0), ("x_2_3", 0), ("y_0", 0), ("obj_const", 1)]
    {
        point.set(name, x);
    }
    assert!(verify_model_at_point(&omit, &point).unwrap().is_feasible());
}
