//! Exact search on a generated instance, serial and with four workers, and
//! under a deliberately tiny time limit.

use std::time::Duration;

use spedac::generators::{generate_random, CostRange, RandomConfig};
use spedac::solvers::{branch_and_bound, branch_and_bound_observed, BranchAndBoundConfig};

fn main() {
    let inst = generate_random(&RandomConfig {
        n: 22,
        density: 0.2,
        conflict_density: 2e-3,
        penalties: CostRange::new(25, 200),
        weights: CostRange::new(1, 100),
        seed: 7,
    })
    .unwrap();
    println!("{} vertices, {} arcs, {} conflicts", inst.vertex_count(), inst.arc_count(), inst.conflict_count());

    let serial = branch_and_bound(&inst, &BranchAndBoundConfig::default());
    println!(
        "serial:   {} {} after {} nodes",
        serial.status,
        serial.incumbent.as_ref().unwrap(),
        serial.nodes_explored
    );
    println!("          incumbents {:?}", serial.incumbent_history);

    let parallel = branch_and_bound(&inst, &BranchAndBoundConfig { time_limit: None, workers: 4 });
    println!("parallel: {} objective {:?}", parallel.status, parallel.objective());

    let rushed = branch_and_bound(&inst, &BranchAndBoundConfig::with_time_limit(Duration::from_micros(200)));
    println!("rushed:   {} LB {} UB {}", rushed.status, rushed.lower_bound, rushed.upper_bound);

    let mut deepest = 0;
    branch_and_bound_observed(&inst, None, &mut |node| deepest = deepest.max(node.path.len()));
    println!("deepest node visited holds {deepest} vertices");
}
