//! The seven-vertex example: every solver finds the zig-zag path s,a,c,d,t
//! that satisfies all three colour conflicts.

use spedac::fixtures::{seven_vertex, SevenVertex};
use spedac::solvers::{
    branch_and_bound, brute_force, dijkstra, local_search, BranchAndBoundConfig, BruteForceGuard, Direction,
    LocalSearchConfig,
};
use spedac::{evaluate, validate_selection};

fn labels(path: &[usize]) -> String {
    path.iter().map(|&v| SevenVertex::label(v)).collect::<Vec<_>>().join(",")
}

fn main() {
    let inst = seven_vertex(10);
    let tree = dijkstra(&inst, Direction::FromSource);
    let shortest = tree.path(&inst, inst.sink()).unwrap();
    println!("conflict-free shortest path {} has length {}", labels(&shortest), tree.dist[inst.sink()].unwrap());
    println!("  with penalties: {}", evaluate(&inst, &shortest).unwrap());

    let reports = [
        ("branch and bound", branch_and_bound(&inst, &BranchAndBoundConfig::default())),
        ("brute force", brute_force(&inst, BruteForceGuard::default()).unwrap()),
        ("local search", local_search(&inst, &LocalSearchConfig::default())),
    ];
    for (name, report) in &reports {
        let sol = report.incumbent.as_ref().unwrap();
        println!("{name:>16}: {} objective {} status {}", labels(&sol.vertices), sol.objective(), report.status);
    }

    let best = reports[0].1.incumbent.as_ref().unwrap();
    let accepted = validate_selection(&inst, &best.arc_flags(&inst)).unwrap();
    println!("selection check accepts the optimum: {}", accepted == *best);
}
