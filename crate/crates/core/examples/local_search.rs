//! Heuristic against the exact optimum on a few small-world instances.

use spedac::generators::{generate_small_world, CostRange, SmallWorldConfig};
use spedac::solvers::{branch_and_bound, local_search, BranchAndBoundConfig, LocalSearchConfig};

fn main() {
    for seed in 0..5 {
        let inst = generate_small_world(&SmallWorldConfig {
            n: 14,
            k: 0.3,
            beta: 0.5,
            conflict_density: 5e-3,
            penalties: CostRange::new(25, 200),
            weights: CostRange::new(1, 100),
            seed,
        })
        .unwrap();
        let heur = local_search(&inst, &LocalSearchConfig { seed, ..Default::default() });
        let exact = branch_and_bound(&inst, &BranchAndBoundConfig::default());
        println!(
            "seed {seed}: heuristic {:?} (seed path {}) exact {:?}",
            heur.objective(),
            heur.incumbent_history[0],
            exact.objective()
        );
    }
}
