//! Benchmark harness: solve every instance file in a directory with each
//! method, then average by (family, density, n) and by (family, density).
//!
//! CSV columns follow the usual results-table layout
//! (`LB, UB, Sec best, Sec tot, Opt gap %`), preceded by row identification
//! and followed by the number of rows averaged.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use thiserror::Error;

use crate::io::{parse_instance, InstanceName, INSTANCE_EXTENSION};
use crate::model::Instance;
use crate::solvers::{
    branch_and_bound, brute_force, local_search, BranchAndBoundConfig, BruteForceGuard, LocalSearchConfig, SolveReport,
};

pub const CSV_SCHEMA_COMMENT: &str = "# spedac-bench schema v1";
pub const CSV_COLUMNS: [&str; 11] =
    ["kind", "set", "method", "instance", "status", "LB", "UB", "Sec best", "Sec tot", "Opt gap %", "count"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    BranchAndBound,
    LocalSearch,
    BruteForce,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::BranchAndBound => "bb",
            Method::LocalSearch => "heur",
            Method::BruteForce => "brute",
        }
    }

    /// Runs the method; `None` when the brute-force guard trips.
    pub fn solve(self, instance: &Instance, time_limit: Duration, seed: u64) -> Option<SolveReport> {
        match self {
            Method::BranchAndBound => {
                Some(branch_and_bound(instance, &BranchAndBoundConfig::with_time_limit(time_limit)))
            }
            Method::LocalSearch => Some(local_search(
                instance,
                &LocalSearchConfig { time_limit: Some(time_limit), seed, ..LocalSearchConfig::default() },
            )),
            Method::BruteForce => {
                brute_force(instance, BruteForceGuard { max_paths: None, time_limit: Some(time_limit) }).ok()
            }
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bb" => Ok(Method::BranchAndBound),
            "heur" => Ok(Method::LocalSearch),
            "brute" => Ok(Method::BruteForce),
            other => Err(format!("unknown method {other:?} (expected bb, heur or brute)")),
        }
    }
}

/// Whether wall-clock columns are measured or written as zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clock {
    Wall,
    Off,
}

impl FromStr for Clock {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "wall" => Ok(Clock::Wall),
            "off" => Ok(Clock::Off),
            other => Err(format!("unknown clock {other:?} (expected wall or off)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub methods: Vec<Method>,
    pub time_limit: Duration,
    pub seed: u64,
    /// Instances solved concurrently. Row order does not depend on it.
    pub jobs: usize,
    pub clock: Clock,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RowKind {
    Instance,
    /// Mean over one (family, density, n) group.
    Group,
    /// Mean over one (family, density) group, all sizes.
    Cumulative,
}

impl RowKind {
    fn as_str(self) -> &'static str {
        match self {
            RowKind::Instance => "instance",
            RowKind::Group => "mean",
            RowKind::Cumulative => "cumulative",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub kind: RowKind,
    pub set: String,
    pub method: Method,
    pub instance: String,
    pub status: String,
    pub lb: Option<f64>,
    pub ub: Option<f64>,
    pub sec_best: f64,
    pub sec_tot: f64,
    pub opt_gap_pct: Option<f64>,
    pub count: usize,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("reading {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// Grouping key recovered from the file name; unnamed files group under "other".
#[derive(Debug, Clone, PartialEq, PartialOrd)]
struct SetKey {
    family: String,
    density: Option<f64>,
    n: Option<usize>,
    density_symbol: &'static str,
}

impl SetKey {
    fn of(file_name: &str) -> Self {
        match InstanceName::parse(file_name) {
            Some(name) => SetKey {
                family: name.family.as_str().into(),
                density: Some(name.density),
                n: Some(name.n),
                density_symbol: name.family.density_symbol(),
            },
            None => SetKey { family: "other".into(), density: None, n: None, density_symbol: "d" },
        }
    }

    fn label(&self, with_n: bool) -> String {
        match (self.density, self.n) {
            (Some(d), Some(n)) if with_n => format!("{} {}={} n={}", self.family, self.density_symbol, d, n),
            (Some(d), _) => format!("{} {}={}", self.family, self.density_symbol, d),
            _ => self.family.clone(),
        }
    }

    fn sort_key(&self) -> (String, f64, usize) {
        (self.family.clone(), self.density.unwrap_or(-1.0), self.n.unwrap_or(0))
    }
}

/// Instance files (`*.spedac`) directly inside `dir`, sorted by name.
pub fn instance_files(dir: &Path) -> Result<Vec<PathBuf>, BenchError> {
    let io_err = |source| BenchError::Io { path: dir.to_path_buf(), source };
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(io_err)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == INSTANCE_EXTENSION))
        .collect();
    files.sort();
    Ok(files)
}

fn instance_row(path: &Path, method: Method, config: &BenchConfig) -> BenchRow {
    let file_name = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    let set = SetKey::of(&file_name).label(true);
    let mut row = BenchRow {
        kind: RowKind::Instance,
        set,
        method,
        instance: file_name,
        status: String::new(),
        lb: None,
        ub: None,
        sec_best: 0.0,
        sec_tot: 0.0,
        opt_gap_pct: None,
        count: 1,
    };
    let instance = match std::fs::read_to_string(path) {
        Err(e) => {
            row.status = format!("io_error: {e}");
            return row;
        }
        Ok(text) => match parse_instance(&text) {
            Err(e) => {
                row.status = format!("invalid: {e}");
                return row;
            }
            Ok(instance) => instance,
        },
    };
    match method.solve(&instance, config.time_limit, config.seed) {
        None => row.status = "guard_exceeded".into(),
        Some(report) => {
            row.status = report.status.to_string();
            row.lb = report.lower_bound.finite().map(|v| v as f64);
            row.ub = report.upper_bound.finite().map(|v| v as f64);
            row.opt_gap_pct = report.gap_pct().ok();
            if config.clock == Clock::Wall {
                row.sec_best = report.seconds_to_best.as_secs_f64();
                row.sec_tot = report.seconds_total.as_secs_f64();
            }
        }
    }
    row
}

fn mean(values: impl Iterator<Item = Option<f64>>) -> (Option<f64>, usize) {
    let finite: Vec<f64> = values.flatten().collect();
    if finite.is_empty() {
        (None, 0)
    } else {
        (Some(finite.iter().sum::<f64>() / finite.len() as f64), finite.len())
    }
}

fn mean_row(kind: RowKind, set: String, method: Method, members: &[&BenchRow]) -> BenchRow {
    let (lb, _) = mean(members.iter().map(|r| r.lb));
    let (ub, count) = mean(members.iter().map(|r| r.ub));
    let (gap, _) = mean(members.iter().map(|r| r.opt_gap_pct));
    let (sec_best, _) = mean(members.iter().map(|r| Some(r.sec_best)));
    let (sec_tot, _) = mean(members.iter().map(|r| Some(r.sec_tot)));
    BenchRow {
        kind,
        set,
        method,
        instance: String::new(),
        status: String::new(),
        lb,
        ub,
        sec_best: sec_best.unwrap_or(0.0),
        sec_tot: sec_tot.unwrap_or(0.0),
        opt_gap_pct: gap,
        count,
    }
}

/// Solves every instance file in `dir` with every configured method.
pub fn run_bench(dir: &Path, config: &BenchConfig) -> Result<Vec<BenchRow>, BenchError> {
    let files = instance_files(dir)?;
    let jobs: Vec<(Method, &PathBuf)> =
        config.methods.iter().flat_map(|&m| files.iter().map(move |f| (m, f))).collect();
    let results: Mutex<Vec<Option<BenchRow>>> = Mutex::new(vec![None; jobs.len()]);
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..config.jobs.max(1) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::AcqRel);
                let Some(&(method, path)) = jobs.get(i) else { break };
                let row = instance_row(path, method, config);
                results.lock().unwrap()[i] = Some(row);
            });
        }
    });
    let instance_rows: Vec<BenchRow> = results.into_inner().unwrap().into_iter().map(Option::unwrap).collect();
    Ok(aggregate(instance_rows))
}

/// Orders instance rows and appends the group and cumulative means, method by method.
pub fn aggregate(mut instance_rows: Vec<BenchRow>) -> Vec<BenchRow> {
    let key = |r: &BenchRow| SetKey::of(&r.instance).sort_key();
    instance_rows.sort_by(|a, b| {
        a.method
            .cmp(&b.method)
            .then_with(|| key(a).partial_cmp(&key(b)).unwrap())
            .then_with(|| a.instance.cmp(&b.instance))
    });

    let mut methods: Vec<Method> = instance_rows.iter().map(|r| r.method).collect();
    methods.dedup();
    let mut out = Vec::new();
    for method in methods {
        let rows: Vec<&BenchRow> = instance_rows.iter().filter(|r| r.method == method).collect();
        out.extend(rows.iter().map(|r| (*r).clone()));
        for with_n in [true, false] {
            let mut labels: Vec<String> = Vec::new();
            for r in &rows {
                let label = SetKey::of(&r.instance).label(with_n);
                if !labels.contains(&label) {
                    labels.push(label);
                }
            }
            let kind = if with_n { RowKind::Group } else { RowKind::Cumulative };
            for label in labels {
                let members: Vec<&BenchRow> =
                    rows.iter().copied().filter(|r| SetKey::of(&r.instance).label(with_n) == label).collect();
                out.push(mean_row(kind, label, method, &members));
            }
        }
    }
    out
}

fn fmt_opt(value: Option<f64>, decimals: usize) -> String {
    value.map_or_else(|| "NA".to_string(), |v| format!("{v:.decimals$}"))
}

fn fmt_bound(value: Option<f64>, kind: RowKind) -> String {
    match (value, kind) {
        (None, _) => "inf".into(),
        (Some(v), RowKind::Instance) => format!("{v:.0}"),
        (Some(v), _) => format!("{v:.1}"),
    }
}

/// CSV text: schema comment line, header, one line per row.
pub fn render_csv(rows: &[BenchRow]) -> String {
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    writer.write_record(CSV_COLUMNS).expect("in-memory write");
    for r in rows {
        writer
            .write_record([
                r.kind.as_str().to_string(),
                r.set.clone(),
                r.method.to_string(),
                r.instance.clone(),
                r.status.clone(),
                fmt_bound(r.lb, r.kind),
                fmt_bound(r.ub, r.kind),
                format!("{:.3}", r.sec_best),
                format!("{:.3}", r.sec_tot),
                fmt_opt(r.opt_gap_pct, 5),
                r.count.to_string(),
            ])
            .expect("in-memory write");
    }
    let body = String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 fields");
    format!("{CSV_SCHEMA_COMMENT}\n{body}")
}
