//! Desk-scale benchmark: generates a small sweep into a temporary directory
//! and prints the CSV report for the exact solver and the heuristic.

use std::time::Duration;

use spedac::bench::{render_csv, run_bench, BenchConfig, Clock, Method};
use spedac::generators::{CostRange, RandomConfig};
use spedac::io::{render_instance, GeneratorConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("spedac-bench-sweep");
    std::fs::create_dir_all(&dir)?;
    for n in [8, 10, 12] {
        for density in [0.2, 0.4] {
            for seed in 0..5 {
                let config = GeneratorConfig::Random(RandomConfig {
                    n,
                    density,
                    conflict_density: 0.01,
                    penalties: CostRange::new(25, 200),
                    weights: CostRange::new(1, 100),
                    seed,
                });
                std::fs::write(dir.join(config.name().file_name()), render_instance(&config.generate()?))?;
            }
        }
    }
    let rows = run_bench(
        &dir,
        &BenchConfig {
            methods: vec![Method::BranchAndBound, Method::LocalSearch],
            time_limit: Duration::from_secs(10),
            seed: 0,
            jobs: 2,
            clock: Clock::Wall,
        },
    )?;
    print!("{}", render_csv(&rows));
    Ok(())
}
