//! Generates one instance of each family and writes them as instance files.
//!
//! Usage: `cargo run --example generate_instances [OUT_DIR]`

use spedac::generators::{conflict_count, random_arc_count, CostRange, RandomConfig, SmallWorldConfig};
use spedac::io::{render_instance, GeneratorConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out_dir = std::env::args().nth(1).unwrap_or_else(|| "instances".into());
    std::fs::create_dir_all(&out_dir)?;
    let configs = [
        GeneratorConfig::Random(RandomConfig {
            n: 100,
            density: 0.1,
            conflict_density: 1e-3,
            penalties: CostRange::new(25, 125),
            weights: CostRange::new(1, 100),
            seed: 1,
        }),
        GeneratorConfig::SmallWorld(SmallWorldConfig {
            n: 100,
            k: 0.15,
            beta: 0.5,
            conflict_density: 1e-3,
            penalties: CostRange::new(1, 20),
            weights: CostRange::new(1, 100),
            seed: 1,
        }),
    ];
    println!("random n=100 d=0.1 expects {} arcs", random_arc_count(100, 0.1));
    for config in configs {
        let inst = config.generate()?;
        let path = std::path::Path::new(&out_dir).join(config.name().file_name());
        std::fs::write(&path, render_instance(&inst))?;
        println!(
            "{}: {} arcs, {} conflicts (formula {})",
            path.display(),
            inst.arc_count(),
            inst.conflict_count(),
            conflict_count(inst.arc_count(), 1e-3)
        );
    }
    Ok(())
}
