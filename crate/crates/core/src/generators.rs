//! Benchmark instance families: uniformly random digraphs and small-world
//! networks, with conflicts and penalties sampled on top.
//!
//! Every random draw comes from a ChaCha stream selected by purpose, so e.g.
//! changing the penalty range leaves topology, weights and conflict pairs
//! untouched.

use std::collections::HashSet;
use std::fmt;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{Arc, ArcId, Conflict, Cost, Instance, VertexId};

/// Inclusive integer range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CostRange {
    pub lo: Cost,
    pub hi: Cost,
}

impl CostRange {
    pub const fn new(lo: Cost, hi: Cost) -> Self {
        CostRange { lo, hi }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Cost {
        rng.gen_range(self.lo..=self.hi)
    }
}

impl fmt::Display for CostRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

impl std::str::FromStr for CostRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = s.split_once('-').ok_or_else(|| format!("expected LO-HI, got {s:?}"))?;
        let parse = |x: &str| x.trim().parse::<Cost>().map_err(|e| format!("{x:?}: {e}"));
        Ok(CostRange::new(parse(lo)?, parse(hi)?))
    }
}

/// Weights used when none are configured.
pub const DEFAULT_WEIGHTS: CostRange = CostRange::new(1, 100);
/// Regeneration attempts before giving up on sink reachability.
pub const MAX_TOPOLOGY_ATTEMPTS: u64 = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct RandomConfig {
    pub n: usize,
    /// Fraction of the `n(n-1)` ordered pairs that become arcs.
    pub density: f64,
    pub conflict_density: f64,
    pub penalties: CostRange,
    pub weights: CostRange,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmallWorldConfig {
    pub n: usize,
    /// Initial neighbour fraction: every vertex starts with about `k * n` neighbours.
    pub k: f64,
    /// Probability that each directed arc is rewired.
    pub beta: f64,
    pub conflict_density: f64,
    pub penalties: CostRange,
    pub weights: CostRange,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("sink unreachable from source after {0} topology attempts")]
    UnsatisfiableConfig(u64),
}

// stream ids
const WEIGHT_STREAM: u64 = 1;
const CONFLICT_STREAM: u64 = 2;
const PENALTY_STREAM: u64 = 3;
const TOPOLOGY_STREAM_BASE: u64 = 1 << 32;

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// `floor(scale * count)` for a non-negative decimal `scale`, snapping
/// products that sit within floating-point noise of an integer.
fn floor_scaled(scale: f64, count: u64) -> u64 {
    let x = scale * count as f64;
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest as u64
    } else {
        x.floor() as u64
    }
}

/// Number of arcs of a random instance: `round(d * n(n-1))`.
pub fn random_arc_count(n: usize, density: f64) -> usize {
    (density * (n * n.saturating_sub(1)) as f64).round() as usize
}

/// Number of conflicts for `m` arcs: `floor((r/2) * m(m-1))`.
pub fn conflict_count(m: usize, conflict_density: f64) -> usize {
    let m = m as u64;
    floor_scaled(conflict_density / 2.0, m * m.saturating_sub(1)) as usize
}

/// Initial ring degree: `k * n` rounded to the nearest even integer, ties up.
pub fn ring_degree(n: usize, k: f64) -> usize {
    let kn = (k * n as f64 * 1e6).round() / 1e6;
    ((kn / 2.0 + 0.5).floor() * 2.0) as usize
}

fn check_common(
    n: usize,
    conflict_density: f64,
    penalties: CostRange,
    weights: CostRange,
) -> Result<(), GeneratorError> {
    let bad = |msg: String| Err(GeneratorError::InvalidConfig(msg));
    if n < 2 {
        return bad(format!("need at least 2 vertices, got {n}"));
    }
    if !(conflict_density >= 0.0 && conflict_density.is_finite()) {
        return bad(format!("conflict density must be >= 0, got {conflict_density}"));
    }
    if penalties.lo < 1 || penalties.lo > penalties.hi {
        return bad(format!("penalty range {penalties} must satisfy 1 <= lo <= hi"));
    }
    if weights.lo > weights.hi {
        return bad(format!("weight range {weights} must satisfy lo <= hi"));
    }
    Ok(())
}

impl RandomConfig {
    pub fn validate(&self) -> Result<(), GeneratorError> {
        check_common(self.n, self.conflict_density, self.penalties, self.weights)?;
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(GeneratorError::InvalidConfig(format!("density must be in (0,1], got {}", self.density)));
        }
        if random_arc_count(self.n, self.density) < 1 {
            return Err(GeneratorError::InvalidConfig("density yields no arcs".into()));
        }
        let m = random_arc_count(self.n, self.density);
        if conflict_count(m, self.conflict_density) > m * (m - 1) / 2 {
            return Err(GeneratorError::InvalidConfig("more conflicts than arc pairs".into()));
        }
        Ok(())
    }
}

impl SmallWorldConfig {
    pub fn validate(&self) -> Result<(), GeneratorError> {
        check_common(self.n, self.conflict_density, self.penalties, self.weights)?;
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(GeneratorError::InvalidConfig(format!("beta must be in [0,1], got {}", self.beta)));
        }
        let degree = ring_degree(self.n, self.k);
        if degree < 2 || degree >= self.n {
            return Err(GeneratorError::InvalidConfig(format!(
                "ring degree {degree} (from k*n = {}) must be even, >= 2 and < n",
                self.k * self.n as f64
            )));
        }
        let m = self.n * degree;
        if conflict_count(m, self.conflict_density) > m * (m - 1) / 2 {
            return Err(GeneratorError::InvalidConfig("more conflicts than arc pairs".into()));
        }
        Ok(())
    }
}

pub fn generate_random(config: &RandomConfig) -> Result<Instance, GeneratorError> {
    config.validate()?;
    let n = config.n;
    let m = random_arc_count(n, config.density);
    let topology = |rng: &mut ChaCha8Rng| -> Vec<(VertexId, VertexId)> {
        let mut pairs: Vec<(VertexId, VertexId)> = index::sample(rng, n * (n - 1), m)
            .into_iter()
            .map(|k| {
                let tail = k / (n - 1);
                let offset = k % (n - 1);
                (tail, if offset >= tail { offset + 1 } else { offset })
            })
            .collect();
        pairs.sort_unstable();
        pairs
    };
    assemble(n, config.seed, config.conflict_density, config.penalties, config.weights, topology)
}

pub fn generate_small_world(config: &SmallWorldConfig) -> Result<Instance, GeneratorError> {
    config.validate()?;
    let n = config.n;
    let half = ring_degree(n, config.k) / 2;
    let beta = config.beta;
    let topology = |rng: &mut ChaCha8Rng| -> Vec<(VertexId, VertexId)> {
        let mut pairs = Vec::with_capacity(n * 2 * half);
        for v in 0..n {
            for j in 1..=half {
                let w = (v + j) % n;
                pairs.push((v, w));
                pairs.push((w, v));
            }
        }
        if beta > 0.0 {
            let mut present: HashSet<(VertexId, VertexId)> = pairs.iter().copied().collect();
            for pair in pairs.iter_mut() {
                if !rng.gen_bool(beta) {
                    continue;
                }
                let tail = pair.0;
                for _ in 0..n {
                    let head = rng.gen_range(0..n);
                    if head != tail && !present.contains(&(tail, head)) {
                        present.remove(pair);
                        present.insert((tail, head));
                        pair.1 = head;
                        break;
                    }
                }
            }
        }
        pairs.sort_unstable();
        pairs
    };
    assemble(n, config.seed, config.conflict_density, config.penalties, config.weights, topology)
}

/// Draws a reachable topology, then weights, conflict pairs and penalties.
fn assemble<T>(
    n: usize,
    seed: u64,
    conflict_density: f64,
    penalties: CostRange,
    weights: CostRange,
    mut topology: T,
) -> Result<Instance, GeneratorError>
where
    T: FnMut(&mut ChaCha8Rng) -> Vec<(VertexId, VertexId)>,
{
    let (source, sink) = (0, n - 1);
    let pairs = (0..MAX_TOPOLOGY_ATTEMPTS)
        .map(|attempt| topology(&mut stream(seed, TOPOLOGY_STREAM_BASE + attempt)))
        .find(|pairs| reachable(n, pairs, source, sink))
        .ok_or(GeneratorError::UnsatisfiableConfig(MAX_TOPOLOGY_ATTEMPTS))?;

    let mut rng = stream(seed, WEIGHT_STREAM);
    let arcs: Vec<Arc> = pairs.iter().map(|&(t, h)| Arc::new(t, h, weights.sample(&mut rng))).collect();

    let m = arcs.len();
    let c = conflict_count(m, conflict_density);
    let arc_pairs = sample_arc_pairs(&mut stream(seed, CONFLICT_STREAM), m, c);
    let mut rng = stream(seed, PENALTY_STREAM);
    let conflicts = arc_pairs.into_iter().map(|(a, b)| Conflict::new(a, b, penalties.sample(&mut rng))).collect();

    Ok(Instance::new(n, arcs, conflicts, source, sink).expect("generated instance is well formed"))
}

/// `count` distinct unordered pairs `a < b` out of `m` items, uniformly,
/// returned in increasing pair order.
fn sample_arc_pairs(rng: &mut ChaCha8Rng, m: usize, count: usize) -> Vec<(ArcId, ArcId)> {
    let total = m * m.saturating_sub(1) / 2;
    let mut ranks: Vec<usize> = index::sample(rng, total, count).into_vec();
    ranks.sort_unstable();
    ranks.into_iter().map(|r| unrank_pair(m, r)).collect()
}

/// Inverse of the row-major ranking of pairs `(a, b)`, `a < b < m`.
fn unrank_pair(m: usize, rank: usize) -> (ArcId, ArcId) {
    // row a starts at a*m - a(a+1)/2
    let row_start = |a: usize| a * m - a * (a + 1) / 2;
    let (mut lo, mut hi) = (0usize, m - 1);
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if row_start(mid) <= rank {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let a = lo;
    (a, a + 1 + (rank - row_start(a)))
}

fn reachable(n: usize, pairs: &[(VertexId, VertexId)], from: VertexId, to: VertexId) -> bool {
    let mut adjacency = vec![Vec::new(); n];
    for &(t, h) in pairs {
        adjacency[t].push(h);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(u) = stack.pop() {
        if u == to {
            return true;
        }
        for &v in &adjacency[u] {
            if !std::mem::replace(&mut seen[v], true) {
                stack.push(v);
            }
        }
    }
    false
}
