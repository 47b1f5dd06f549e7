//! Test-side reference implementations. They read only the raw arc and
//! conflict lists and share no code with the library's evaluator or solvers.

#![allow(dead_code)]

use spedac::generators::{conflict_count, generate_random, random_arc_count, CostRange, RandomConfig};
use spedac::Instance;

pub const SWEEP_SIZES: [usize; 4] = [6, 8, 10, 12];
pub const SWEEP_DENSITIES: [f64; 2] = [0.2, 0.4];
pub const SWEEP_PENALTIES: [CostRange; 2] = [CostRange::new(1, 20), CostRange::new(25, 200)];
pub const MAX_SWEEP_CONFLICTS: usize = 15;

/// Objective recomputed from scratch: summed arc weights plus, for every
/// conflict, its penalty unless exactly one of its arcs is used.
pub fn oracle_objective(instance: &Instance, vertices: &[usize]) -> u64 {
    let mut used = vec![false; instance.arc_count()];
    let mut cost = 0;
    for pair in vertices.windows(2) {
        let (id, arc) = instance
            .arcs()
            .iter()
            .enumerate()
            .find(|(_, a)| a.tail == pair[0] && a.head == pair[1])
            .expect("consecutive vertices joined by an arc");
        used[id] = true;
        cost += arc.weight;
    }
    for c in instance.conflicts() {
        if used[c.arc_a] == used[c.arc_b] {
            cost += c.penalty;
        }
    }
    cost
}

fn adjacency(instance: &Instance) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); instance.vertex_count()];
    for a in instance.arcs() {
        adj[a.tail].push(a.head);
    }
    adj
}

/// Every simple source-to-sink path extending `prefix`.
pub fn completions(instance: &Instance, prefix: &[usize]) -> Vec<Vec<usize>> {
    fn dfs(adj: &[Vec<usize>], t: usize, path: &mut Vec<usize>, seen: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let u = *path.last().unwrap();
        if u == t {
            out.push(path.clone());
            return;
        }
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                path.push(v);
                dfs(adj, t, path, seen, out);
                path.pop();
                seen[v] = false;
            }
        }
    }
    let adj = adjacency(instance);
    let mut seen = vec![false; instance.vertex_count()];
    for &v in prefix {
        seen[v] = true;
    }
    let mut out = Vec::new();
    dfs(&adj, instance.sink(), &mut prefix.to_vec(), &mut seen, &mut out);
    out
}

pub fn all_paths(instance: &Instance) -> Vec<Vec<usize>> {
    completions(instance, &[instance.source()])
}

/// Minimum objective over completions of `prefix`, `None` if there are none.
pub fn best_completion(instance: &Instance, prefix: &[usize]) -> Option<u64> {
    completions(instance, prefix).iter().map(|p| oracle_objective(instance, p)).min()
}

pub fn oracle_optimum(instance: &Instance) -> Option<u64> {
    best_completion(instance, &[instance.source()])
}

/// Conflict-free shortest distance by Bellman-Ford relaxation.
pub fn oracle_distance(instance: &Instance) -> Option<u64> {
    let mut dist: Vec<Option<u64>> = vec![None; instance.vertex_count()];
    dist[instance.source()] = Some(0);
    for _ in 0..instance.vertex_count() {
        for a in instance.arcs() {
            if let Some(d) = dist[a.tail] {
                if dist[a.head].is_none_or(|h| d + a.weight < h) {
                    dist[a.head] = Some(d + a.weight);
                }
            }
        }
    }
    dist[instance.sink()]
}

/// Conflict density that yields exactly `count` conflicts among `m` arcs.
pub fn density_for_count(m: usize, count: usize) -> f64 {
    if m < 2 {
        return 0.0;
    }
    2.0 * count as f64 / (m * (m - 1)) as f64
}

/// The oracle sweep family: every size, density and penalty range, with the
/// conflict count cycling through 0..=15 as the seed advances.
pub fn sweep_instances(replicates: u64) -> Vec<(String, Instance)> {
    let mut out = Vec::new();
    for &n in &SWEEP_SIZES {
        for &density in &SWEEP_DENSITIES {
            for &penalties in &SWEEP_PENALTIES {
                for seed in 0..replicates {
                    let m = random_arc_count(n, density);
                    let wanted = (seed as usize * 7 + n) % (MAX_SWEEP_CONFLICTS + 1);
                    let conflict_density = density_for_count(m, wanted);
                    assert_eq!(conflict_count(m, conflict_density), wanted);
                    let config =
                        RandomConfig { n, density, conflict_density, penalties, weights: CostRange::new(1, 100), seed };
                    let instance = generate_random(&config).expect("sweep config is satisfiable");
                    out.push((format!("n={n} d={density} p={penalties} seed={seed}"), instance));
                }
            }
        }
    }
    out
}
