//! Command-line front end. Exit codes: 0 success, 1 other failure (I/O, a
//! rejected check), 2 parse or invariant error, 3 guard or time limit hit
//! without an incumbent.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use spedac::bench::{render_csv, run_bench, BenchConfig, Clock, Method};
use spedac::export::{export_flow_model, induced_assignment, verify_model_at_point, Assignment, SecMode};
use spedac::generators::{CostRange, RandomConfig, SmallWorldConfig, DEFAULT_WEIGHTS};
use spedac::io::{parse_instance, parse_profile, render_instance, GeneratorConfig};
use spedac::model::{evaluate, Instance};
use spedac::solvers::{branch_and_bound, BranchAndBoundConfig, SolveReport, Status};

#[derive(Parser)]
#[command(name = "spedac", version, about = "Shortest paths with exclusive-disjunction arc-pair conflicts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate uniformly random instances
    GenRandom(GenRandomArgs),
    /// Generate small-world instances
    GenSmallworld(GenSmallWorldArgs),
    /// Solve one instance file
    Solve(SolveArgs),
    /// Write the mixed-integer model of an instance in LP format
    Export(ExportArgs),
    /// Solve every instance in a directory and write a CSV report
    Bench(BenchArgs),
    /// Check an instance file, a path, or a model assignment
    Validate(ValidateArgs),
}

#[derive(Args)]
struct CommonGenArgs {
    /// Key=value profile; replaces the parameter flags
    #[arg(long)]
    profile: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// Conflict density r
    #[arg(long)]
    conflict_density: Option<f64>,
    /// Penalty range LO-HI
    #[arg(long)]
    penalty: Option<CostRange>,
    /// Weight range LO-HI
    #[arg(long, default_value_t = DEFAULT_WEIGHTS)]
    weights: CostRange,
    /// Seed of the first replicate; replicate i uses seed + i
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    replicates: u64,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct GenRandomArgs {
    #[command(flatten)]
    common: CommonGenArgs,
    /// Arc density d
    #[arg(long)]
    density: Option<f64>,
}

#[derive(Args)]
struct GenSmallWorldArgs {
    #[command(flatten)]
    common: CommonGenArgs,
    /// Initial neighbour fraction k
    #[arg(long)]
    k: Option<f64>,
    /// Rewiring probability
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, default_value = "bb")]
    method: Method,
    /// Seconds
    #[arg(long, default_value_t = 1800.0)]
    time_limit: f64,
    /// Branch-and-bound worker threads
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Local search seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `wall` reports measured seconds, `off` prints zeros
    #[arg(long, default_value = "wall")]
    clock: Clock,
    /// Also write the model assignment induced by the incumbent
    #[arg(long)]
    assignment_out: Option<PathBuf>,
    #[arg(long, default_value = "mtz")]
    sec: SecMode,
}

#[derive(Args)]
struct ExportArgs {
    instance: PathBuf,
    #[arg(long, default_value = "mtz")]
    sec: SecMode,
    /// Output file; stdout when absent
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    directory: PathBuf,
    /// Comma-separated: bb, heur, brute
    #[arg(long, value_delimiter = ',', default_value = "bb,heur")]
    methods: Vec<Method>,
    #[arg(long, default_value_t = 1800.0)]
    time_limit: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instances solved concurrently
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value = "wall")]
    clock: Clock,
    /// Output CSV; stdout when absent
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    instance: PathBuf,
    /// Comma-separated vertex sequence to evaluate
    #[arg(long)]
    path: Option<String>,
    /// name=value file checked against the exported model
    #[arg(long)]
    assignment: Option<PathBuf>,
    #[arg(long, default_value = "mtz")]
    sec: SecMode,
}

enum Failure {
    Other(String),
    Input(String),
    NoIncumbent(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Other(_) => 1,
            Failure::Input(_) => 2,
            Failure::NoIncumbent(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Other(m) | Failure::Input(m) | Failure::NoIncumbent(m) => m,
        }
    }
}

type CliResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Other(format!("reading {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult {
    std::fs::write(path, text).map_err(|e| Failure::Other(format!("writing {}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> CliResult {
    match output {
        Some(path) => write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn seconds(value: f64) -> Result<Duration, Failure> {
    Duration::try_from_secs_f64(value).map_err(|e| Failure::Input(format!("time limit {value}: {e}")))
}

fn missing(flag: &str) -> Failure {
    Failure::Input(format!("--{flag} is required without --profile"))
}

fn generate(base: GeneratorConfig, common: &CommonGenArgs) -> CliResult {
    std::fs::create_dir_all(&common.out_dir)
        .map_err(|e| Failure::Other(format!("creating {}: {e}", common.out_dir.display())))?;
    for i in 0..common.replicates {
        let config = base.with_seed(base.seed() + i);
        let instance = config.generate().map_err(|e| Failure::Input(e.to_string()))?;
        let path = common.out_dir.join(config.name().file_name());
        write(&path, &render_instance(&instance))?;
        println!("{}", path.display());
    }
    Ok(())
}

fn profile_or(
    common: &CommonGenArgs,
    build: impl FnOnce() -> Result<GeneratorConfig, Failure>,
) -> Result<GeneratorConfig, Failure> {
    match &common.profile {
        Some(path) => parse_profile(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => build(),
    }
}

fn gen_random(args: GenRandomArgs) -> CliResult {
    let c = &args.common;
    let config = profile_or(c, || {
        Ok(GeneratorConfig::Random(RandomConfig {
            n: c.n.ok_or_else(|| missing("n"))?,
            density: args.density.ok_or_else(|| missing("density"))?,
            conflict_density: c.conflict_density.ok_or_else(|| missing("conflict-density"))?,
            penalties: c.penalty.ok_or_else(|| missing("penalty"))?,
            weights: c.weights,
            seed: c.seed,
        }))
    })?;
    generate(config, c)
}

fn gen_small_world(args: GenSmallWorldArgs) -> CliResult {
    let c = &args.common;
    let config = profile_or(c, || {
        Ok(GeneratorConfig::SmallWorld(SmallWorldConfig {
            n: c.n.ok_or_else(|| missing("n"))?,
            k: args.k.ok_or_else(|| missing("k"))?,
            beta: args.beta,
            conflict_density: c.conflict_density.ok_or_else(|| missing("conflict-density"))?,
            penalties: c.penalty.ok_or_else(|| missing("penalty"))?,
            weights: c.weights,
            seed: c.seed,
        }))
    })?;
    generate(config, c)
}

fn describe(method: Method, report: &SolveReport, clock: Clock) -> String {
    let mut out = String::new();
    let secs = |d: Duration| if clock == Clock::Wall { d.as_secs_f64() } else { 0.0 };
    let _ = writeln!(out, "method: {method}");
    let _ = writeln!(out, "status: {}", report.status);
    let _ = writeln!(out, "lower_bound: {}", report.lower_bound);
    let _ = writeln!(out, "upper_bound: {}", report.upper_bound);
    let gap = report.gap_pct().map_or_else(|_| "NA".to_string(), |g| format!("{g:.5}"));
    let _ = writeln!(out, "gap_pct: {gap}");
    if let Some(sol) = &report.incumbent {
        let path: Vec<String> = sol.vertices.iter().map(|v| v.to_string()).collect();
        let violated: Vec<String> = sol.violated_conflicts.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "objective: {}", sol.objective());
        let _ = writeln!(out, "path: {}", path.join(","));
        let _ = writeln!(out, "arc_cost: {}", sol.arc_cost);
        let _ = writeln!(out, "penalty_cost: {}", sol.penalty_cost);
        let _ = writeln!(out, "violated_conflicts: {}", violated.join(","));
    }
    let _ = writeln!(out, "nodes: {}", report.nodes_explored);
    let _ = writeln!(out, "sec_best: {:.3}", secs(report.seconds_to_best));
    let _ = writeln!(out, "sec_tot: {:.3}", secs(report.seconds_total));
    out
}

fn solve(args: SolveArgs) -> CliResult {
    let instance = load_instance(&args.instance)?;
    let time_limit = seconds(args.time_limit)?;
    let report = match args.method {
        Method::BranchAndBound if args.workers > 1 => {
            branch_and_bound(&instance, &BranchAndBoundConfig { time_limit: Some(time_limit), workers: args.workers })
        }
        method => method
            .solve(&instance, time_limit, args.seed)
            .ok_or_else(|| Failure::NoIncumbent("enumeration guard exceeded".into()))?,
    };
    print!("{}", describe(args.method, &report, args.clock));
    if let (Some(path), Some(sol)) = (&args.assignment_out, &report.incumbent) {
        write(path, &induced_assignment(&instance, sol, args.sec).render())?;
    }
    if report.incumbent.is_none() && report.status == Status::TimeLimit {
        return Err(Failure::NoIncumbent("time limit reached without an incumbent".into()));
    }
    Ok(())
}

fn export(args: ExportArgs) -> CliResult {
    let instance = load_instance(&args.instance)?;
    emit(args.output.as_deref(), &export_flow_model(&instance, args.sec).render())
}

fn bench(args: BenchArgs) -> CliResult {
    let config = BenchConfig {
        methods: args.methods,
        time_limit: seconds(args.time_limit)?,
        seed: args.seed,
        jobs: args.jobs,
        clock: args.clock,
    };
    let rows = run_bench(&args.directory, &config).map_err(|e| Failure::Other(e.to_string()))?;
    emit(args.output.as_deref(), &render_csv(&rows))
}

fn validate(args: ValidateArgs) -> CliResult {
    let instance = load_instance(&args.instance)?;
    println!(
        "instance: n={} m={} c={} s={} t={}",
        instance.vertex_count(),
        instance.arc_count(),
        instance.conflict_count(),
        instance.source(),
        instance.sink()
    );
    if let Some(path) = &args.path {
        let vertices = path
            .split(',')
            .map(|v| v.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Failure::Input(format!("path {path:?}: {e}")))?;
        let sol = evaluate(&instance, &vertices).map_err(|e| Failure::Input(format!("path: {e}")))?;
        println!("path: {sol}");
    }
    if let Some(file) = &args.assignment {
        let assignment =
            Assignment::parse(&read(file)?).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
        let model = export_flow_model(&instance, args.sec);
        let check = verify_model_at_point(&model, &assignment).map_err(|e| Failure::Input(e.to_string()))?;
        println!("objective: {}", check.objective);
        for v in &check.violations {
            println!("violated: {:?} {}", v.kind, v.name);
        }
        if !check.is_feasible() {
            return Err(Failure::Other(format!("{} violations", check.violations.len())));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let result = match Cli::parse().command {
        Command::GenRandom(a) => gen_random(a),
        Command::GenSmallworld(a) => gen_small_world(a),
        Command::Solve(a) => solve(a),
        Command::Export(a) => export(a),
        Command::Bench(a) => bench(a),
        Command::Validate(a) => validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}
