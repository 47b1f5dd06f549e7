//! Text formats: instance files, generator profiles and the instance file
//! naming scheme.
//!
//! Instance file:
//!
//! ```text
//! SPEDAC 1
//! n m c s t
//! tail head weight        (m lines)
//! arcIndexA arcIndexB penalty   (c lines)
//! ```
//!
//! Whitespace-separated decimal integers, 0-based ids. Blank lines and `#`
//! comments are ignored.

use std::fmt::Write as _;

use thiserror::Error;

use crate::generators::{
    generate_random, generate_small_world, CostRange, GeneratorError, RandomConfig, SmallWorldConfig, DEFAULT_WEIGHTS,
};
use crate::model::{Arc, Conflict, Instance, InstanceError};

pub const INSTANCE_HEADER: &str = "SPEDAC 1";
pub const INSTANCE_EXTENSION: &str = "spedac";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceFileError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid instance: {0}")]
    Invariant(#[from] InstanceError),
}

pub fn render_instance(instance: &Instance) -> String {
    let mut out = String::new();
    out.push_str(INSTANCE_HEADER);
    out.push('\n');
    let _ = writeln!(
        out,
        "{} {} {} {} {}",
        instance.vertex_count(),
        instance.arc_count(),
        instance.conflict_count(),
        instance.source(),
        instance.sink()
    );
    for a in instance.arcs() {
        let _ = writeln!(out, "{} {} {}", a.tail, a.head, a.weight);
    }
    for c in instance.conflicts() {
        let _ = writeln!(out, "{} {} {}", c.arc_a, c.arc_b, c.penalty);
    }
    out
}

/// Parses an instance file. Blank lines and `#` comments are skipped.
pub fn parse_instance(text: &str) -> Result<Instance, InstanceFileError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty());
    let parse_err = |line: usize, message: String| InstanceFileError::Parse { line, message };

    let mut next_line =
        |what: &str| lines.next().ok_or_else(|| parse_err(0, format!("unexpected end of file, expected {what}")));
    let (line, header) = next_line("header")?;
    if header.trim_end() != INSTANCE_HEADER {
        return Err(parse_err(line, format!("expected header {INSTANCE_HEADER:?}")));
    }
    let fields = |line: usize, text: &str, count: usize| -> Result<Vec<u64>, InstanceFileError> {
        let values = text
            .split_whitespace()
            .map(|f| f.parse::<u64>().map_err(|_| parse_err(line, format!("not a non-negative integer: {f:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if values.len() != count {
            return Err(parse_err(line, format!("expected {count} fields, found {}", values.len())));
        }
        Ok(values)
    };

    let (line, counts) = next_line("counts line")?;
    let counts = fields(line, counts, 5)?;
    let as_usize = |v: u64| v as usize;
    let (n, m, c, s, t) =
        (as_usize(counts[0]), as_usize(counts[1]), as_usize(counts[2]), as_usize(counts[3]), as_usize(counts[4]));

    let mut arcs = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, text) = next_line("arc line")?;
        let f = fields(line, text, 3)?;
        arcs.push(Arc::new(f[0] as usize, f[1] as usize, f[2]));
    }
    let mut conflicts = Vec::with_capacity(c);
    for _ in 0..c {
        let (line, text) = next_line("conflict line")?;
        let f = fields(line, text, 3)?;
        conflicts.push(Conflict::new(f[0] as usize, f[1] as usize, f[2]));
    }
    if let Some((line, _)) = lines.next() {
        return Err(parse_err(line, "trailing content after the last conflict".into()));
    }
    Ok(Instance::new(n, arcs, conflicts, s, t)?)
}

/// Either generator family's configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorConfig {
    Random(RandomConfig),
    SmallWorld(SmallWorldConfig),
}

impl GeneratorConfig {
    pub fn generate(&self) -> Result<Instance, GeneratorError> {
        match self {
            GeneratorConfig::Random(c) => generate_random(c),
            GeneratorConfig::SmallWorld(c) => generate_small_world(c),
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        let mut copy = self.clone();
        match &mut copy {
            GeneratorConfig::Random(c) => c.seed = seed,
            GeneratorConfig::SmallWorld(c) => c.seed = seed,
        }
        copy
    }

    pub fn seed(&self) -> u64 {
        match self {
            GeneratorConfig::Random(c) => c.seed,
            GeneratorConfig::SmallWorld(c) => c.seed,
        }
    }

    pub fn name(&self) -> InstanceName {
        match self {
            GeneratorConfig::Random(c) => InstanceName {
                family: Family::Random,
                n: c.n,
                density: c.density,
                conflict_density: c.conflict_density,
                penalties: c.penalties,
                seed: c.seed,
            },
            GeneratorConfig::SmallWorld(c) => InstanceName {
                family: Family::SmallWorld,
                n: c.n,
                density: c.k,
                conflict_density: c.conflict_density,
                penalties: c.penalties,
                seed: c.seed,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("profile line {line}: {message}")]
pub struct ProfileError {
    pub line: usize,
    pub message: String,
}

/// Reads a `key=value` generator profile. Keys: `family` (`random` or
/// `smallworld`), `n`, `d` (random), `k` and `beta` (small-world), `r`,
/// `penalty` (`LO-HI`), `weights` (`LO-HI`, default 1-100), `seed`.
/// `#` starts a comment.
pub fn parse_profile(text: &str) -> Result<GeneratorConfig, ProfileError> {
    let mut entries: Vec<(usize, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| ProfileError { line: i + 1, message: "expected key=value".into() })?;
        entries.push((i + 1, key.trim().to_string(), value.trim().to_string()));
    }
    let lookup = |key: &str| entries.iter().rev().find(|(_, k, _)| k == key);
    fn value<T: std::str::FromStr>(
        entry: Option<&(usize, String, String)>,
        key: &str,
    ) -> Result<Option<T>, ProfileError>
    where
        T::Err: std::fmt::Display,
    {
        match entry {
            None => Ok(None),
            Some((line, _, v)) => {
                v.parse::<T>().map(Some).map_err(|e| ProfileError { line: *line, message: format!("{key}: {e}") })
            }
        }
    }
    let required = |key: &str| ProfileError { line: 0, message: format!("missing key {key:?}") };
    for (line, key, _) in &entries {
        if !["family", "n", "d", "k", "beta", "r", "penalty", "weights", "seed"].contains(&key.as_str()) {
            return Err(ProfileError { line: *line, message: format!("unknown key {key:?}") });
        }
    }

    let family: String = value(lookup("family"), "family")?.ok_or_else(|| required("family"))?;
    let n: usize = value(lookup("n"), "n")?.ok_or_else(|| required("n"))?;
    let r: f64 = value(lookup("r"), "r")?.ok_or_else(|| required("r"))?;
    let penalties: CostRange = value(lookup("penalty"), "penalty")?.ok_or_else(|| required("penalty"))?;
    let weights: CostRange = value(lookup("weights"), "weights")?.unwrap_or(DEFAULT_WEIGHTS);
    let seed: u64 = value(lookup("seed"), "seed")?.unwrap_or(0);
    match family.as_str() {
        "random" => Ok(GeneratorConfig::Random(RandomConfig {
            n,
            density: value(lookup("d"), "d")?.ok_or_else(|| required("d"))?,
            conflict_density: r,
            penalties,
            weights,
            seed,
        })),
        "smallworld" => Ok(GeneratorConfig::SmallWorld(SmallWorldConfig {
            n,
            k: value(lookup("k"), "k")?.ok_or_else(|| required("k"))?,
            beta: value(lookup("beta"), "beta")?.unwrap_or(0.5),
            conflict_density: r,
            penalties,
            weights,
            seed,
        })),
        other => Err(ProfileError {
            line: lookup("family").map_or(0, |e| e.0),
            message: format!("unknown family {other:?}"),
        }),
    }
}

pub fn render_profile(config: &GeneratorConfig) -> String {
    match config {
        GeneratorConfig::Random(c) => format!(
            "family=random\nn={}\nd={}\nr={}\npenalty={}\nweights={}\nseed={}\n",
            c.n, c.density, c.conflict_density, c.penalties, c.weights, c.seed
        ),
        GeneratorConfig::SmallWorld(c) => format!(
            "family=smallworld\nn={}\nk={}\nbeta={}\nr={}\npenalty={}\nweights={}\nseed={}\n",
            c.n, c.k, c.beta, c.conflict_density, c.penalties, c.weights, c.seed
        ),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Random,
    SmallWorld,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Random => "random",
            Family::SmallWorld => "smallworld",
        }
    }

    /// Symbol of the density parameter: `d` for random, `k` for small-world.
    pub fn density_symbol(self) -> &'static str {
        match self {
            Family::Random => "d",
            Family::SmallWorld => "k",
        }
    }
}

/// Parameters encoded in a file name
/// `family_nNNN_dDENSITY_rR_pLO-HI_sSEED.spedac`. For small-world files the
/// `d` field holds `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceName {
    pub family: Family,
    pub n: usize,
    pub density: f64,
    pub conflict_density: f64,
    pub penalties: CostRange,
    pub seed: u64,
}

impl InstanceName {
    pub fn file_name(&self) -> String {
        format!(
            "{}_n{:03}_d{}_r{}_p{}_s{}.{INSTANCE_EXTENSION}",
            self.family.as_str(),
            self.n,
            self.density,
            self.conflict_density,
            self.penalties,
            self.seed
        )
    }

    pub fn parse(file_name: &str) -> Option<Self> {
        let stem = file_name.strip_suffix(&format!(".{INSTANCE_EXTENSION}"))?;
        let parts: Vec<&str> = stem.split('_').collect();
        let [family, n, d, r, p, s] = parts.as_slice() else {
            return None;
        };
        let family = match *family {
            "random" => Family::Random,
            "smallworld" => Family::SmallWorld,
            _ => return None,
        };
        Some(InstanceName {
            family,
            n: n.strip_prefix('n')?.parse().ok()?,
            density: d.strip_prefix('d')?.parse().ok()?,
            conflict_density: r.strip_prefix('r')?.parse().ok()?,
            penalties: p.strip_prefix('p')?.parse().ok()?,
            seed: s.strip_prefix('s')?.parse().ok()?,
        })
    }
}
