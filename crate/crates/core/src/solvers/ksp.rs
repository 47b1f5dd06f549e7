//! Yen's k shortest simple paths on arc weights.

use std::collections::{BTreeSet, HashSet};

use super::dijkstra::{restricted_path, Restriction};
use crate::model::{Cost, Instance, VertexId};

fn path_weight(instance: &Instance, path: &[VertexId], weights: &[Cost]) -> Cost {
    path.windows(2).map(|w| weights[instance.find_arc(w[0], w[1]).expect("path follows arcs")]).sum()
}

/// Up to `k` simple source-to-sink paths in non-decreasing arc cost order,
/// ties broken by vertex sequence.
pub fn k_shortest_paths(instance: &Instance, k: usize) -> Vec<Vec<VertexId>> {
    let weights: Vec<Cost> = instance.arcs().iter().map(|a| a.weight).collect();
    let (s, t) = (instance.source(), instance.sink());
    if k == 0 {
        return Vec::new();
    }
    let Some((first, _)) = restricted_path(instance, s, t, &weights, &Restriction::none(instance)) else {
        return Vec::new();
    };

    let mut accepted: Vec<Vec<VertexId>> = vec![first];
    let mut known: HashSet<Vec<VertexId>> = accepted.iter().cloned().collect();
    let mut candidates: BTreeSet<(Cost, Vec<VertexId>)> = BTreeSet::new();

    while accepted.len() < k {
        let last = accepted.last().unwrap().clone();
        for i in 0..last.len() - 1 {
            let spur = last[i];
            let root = &last[..=i];
            let mut restriction = Restriction::none(instance);
            for p in &accepted {
                if p.len() > i + 1 && &p[..=i] == root {
                    if let Some(a) = instance.find_arc(p[i], p[i + 1]) {
                        restriction.banned_arcs[a] = true;
                    }
                }
            }
            for &v in &root[..i] {
                restriction.banned_vertices[v] = true;
            }
            if let Some((spur_path, _)) = restricted_path(instance, spur, t, &weights, &restriction) {
                let mut full = root[..i].to_vec();
                full.extend(spur_path);
                if !known.contains(&full) {
                    let cost = path_weight(instance, &full, &weights);
                    known.insert(full.clone());
                    candidates.insert((cost, full));
                }
            }
        }
        match candidates.pop_first() {
            Some((_, next)) => accepted.push(next),
            None => break,
        }
    }
    accepted
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::seven_vertex;
    use crate::model::evaluate;
    use crate::solvers::brute_force::enumerate_simple_paths;

    #[test]
    fn enumerates_every_path_in_cost_order() {
        let inst = seven_vertex(10);
        let paths = k_shortest_paths(&inst, 50);
        let mut all = Vec::new();
        enumerate_simple_paths(&inst, |p| {
            all.push(p.to_vec());
            true
        });
        assert_eq!(paths.len(), all.len());
        let costs: Vec<Cost> = paths.iter().map(|p| evaluate(&inst, p).unwrap().arc_cost).collect();
        assert!(costs.windows(2).all(|w| w[0] <= w[1]));
        let mut expected: Vec<Cost> = all.iter().map(|p| evaluate(&inst, p).unwrap().arc_cost).collect();
        expected.sort_unstable();
        assert_eq!(costs, expected);
        let unique: HashSet<_> = paths.iter().collect();
        assert_eq!(unique.len(), paths.len());
    }

    #[test]
    fn respects_k() {
        let inst = seven_vertex(10);
        assert_eq!(k_shortest_paths(&inst, 3).len(), 3);
        assert!(k_shortest_paths(&inst, 0).is_empty());
    }
}
