//! Heuristic: conflict-free shortest path as the seed, a pool of k shortest
//! paths, then first-improvement detour moves under randomly perturbed
//! weights.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dijkstra::{dijkstra, restricted_path, Direction, Restriction};
use super::ksp::k_shortest_paths;
use super::{Bound, SolveReport, Status};
use crate::model::{evaluate, Cost, Instance, PathSolution};

#[derive(Debug, Clone, Copy)]
pub struct LocalSearchConfig {
    pub time_limit: Option<Duration>,
    pub seed: u64,
    /// Size of the k-shortest-path candidate pool.
    pub pool_size: usize,
    /// Longest subpath (in arcs) a detour may replace; `None` is unlimited.
    pub detour_radius: Option<usize>,
    /// Descent rounds; every round after the first perturbs the weights.
    pub rounds: usize,
}

impl Default for LocalSearchConfig {
    fn default() -> Self {
        LocalSearchConfig { time_limit: None, seed: 0, pool_size: 50, detour_radius: None, rounds: 8 }
    }
}

struct Tracker {
    start: Instant,
    deadline: Option<Instant>,
    best: PathSolution,
    history: Vec<Cost>,
    time_to_best: Duration,
    evaluated: u64,
}

impl Tracker {
    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    fn offer(&mut self, sol: PathSolution) -> bool {
        self.evaluated += 1;
        if sol.objective() < self.best.objective() {
            self.history.push(sol.objective());
            self.time_to_best = self.start.elapsed();
            self.best = sol;
            true
        } else {
            false
        }
    }
}

pub fn local_search(instance: &Instance, config: &LocalSearchConfig) -> SolveReport {
    let start = Instant::now();
    let tree = dijkstra(instance, Direction::FromSource);
    let Some(seed_path) = tree.path(instance, instance.sink()) else {
        return SolveReport::infeasible(start.elapsed(), 0);
    };
    let lower_bound = tree.dist[instance.sink()].expect("sink reached");
    let seed = evaluate(instance, &seed_path).expect("tree path is simple");

    let mut tracker = Tracker {
        start,
        deadline: config.time_limit.map(|t| start + t),
        history: vec![seed.objective()],
        best: seed,
        time_to_best: start.elapsed(),
        evaluated: 1,
    };

    for path in k_shortest_paths(instance, config.pool_size).into_iter().skip(1) {
        if tracker.expired() {
            break;
        }
        tracker.offer(evaluate(instance, &path).expect("k-shortest paths are simple"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let max_weight = instance.arcs().iter().map(|a| a.weight).max().unwrap_or(0).max(1);
    for round in 0..config.rounds {
        if tracker.expired() {
            break;
        }
        let noise: Vec<Cost> =
            instance.arcs().iter().map(|_| if round == 0 { 0 } else { rng.gen_range(0..=max_weight) }).collect();
        while !tracker.expired() && improve_by_detour(instance, config, &noise, &mut tracker) {}
    }

    let best = tracker.best;
    SolveReport {
        lower_bound: Bound::Finite(lower_bound),
        upper_bound: Bound::Finite(best.objective()),
        incumbent: Some(best),
        seconds_to_best: tracker.time_to_best,
        seconds_total: start.elapsed(),
        nodes_explored: tracker.evaluated,
        status: Status::Feasible,
        incumbent_history: tracker.history,
    }
}

/// One scan over all subpaths of the incumbent; replaces the first one whose
/// cheapest vertex-disjoint detour improves the objective.
fn improve_by_detour(instance: &Instance, config: &LocalSearchConfig, noise: &[Cost], tracker: &mut Tracker) -> bool {
    let current = tracker.best.clone();
    let on_path = current.arc_flags(instance);
    // arcs whose conflict partner is already used would create a both-used violation
    let weights: Vec<Cost> = instance
        .arcs()
        .iter()
        .enumerate()
        .map(|(a, arc)| {
            let clash: Cost = instance
                .conflicts_of(a)
                .iter()
                .map(|&c| instance.conflict(c))
                .filter(|c| on_path[c.partner(a)])
                .map(|c| c.penalty)
                .sum();
            arc.weight + noise[a] + clash
        })
        .collect();

    let path = &current.vertices;
    let radius = config.detour_radius.unwrap_or(usize::MAX);
    for i in 0..path.len() - 1 {
        for j in i + 1..path.len() {
            if j - i > radius {
                break;
            }
            if tracker.expired() {
                return false;
            }
            let mut restriction = Restriction::none(instance);
            for (k, &v) in path.iter().enumerate() {
                if k != i && k != j {
                    restriction.banned_vertices[v] = true;
                }
            }
            if j == i + 1 {
                if let Some(a) = instance.find_arc(path[i], path[j]) {
                    restriction.banned_arcs[a] = true;
                }
            }
            let Some((detour, _)) = restricted_path(instance, path[i], path[j], &weights, &restriction) else {
                continue;
            };
            let mut candidate = path[..i].to_vec();
            candidate.extend(detour);
            candidate.extend_from_slice(&path[j + 1..]);
            let sol = evaluate(instance, &candidate).expect("detour keeps the path simple");
            if tracker.offer(sol) {
                return true;
            }
        }
    }
    false
}
