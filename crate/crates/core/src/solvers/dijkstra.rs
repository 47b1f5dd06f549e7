use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::model::{ArcId, Cost, Instance, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Distances from the source along arcs.
    FromSource,
    /// Distances to the sink, i.e. from the sink on reversed arcs.
    ToSink,
}

/// Shortest-path tree over arc weights, conflicts ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortestPaths {
    pub direction: Direction,
    pub origin: VertexId,
    /// `None` marks an unreachable vertex.
    pub dist: Vec<Option<Cost>>,
    /// Tree arc through which each vertex was reached.
    pub pred: Vec<Option<ArcId>>,
}

impl ShortestPaths {
    /// The tree path between the origin and `v`, oriented along the arcs:
    /// origin..v for `FromSource`, v..origin for `ToSink`.
    pub fn path(&self, instance: &Instance, v: VertexId) -> Option<Vec<VertexId>> {
        self.dist[v]?;
        let mut path = vec![v];
        let mut at = v;
        while let Some(arc) = self.pred[at] {
            let arc = instance.arc(arc);
            at = match self.direction {
                Direction::FromSource => arc.tail,
                Direction::ToSink => arc.head,
            };
            path.push(at);
        }
        if self.direction == Direction::FromSource {
            path.reverse();
        }
        Some(path)
    }
}

pub fn dijkstra(instance: &Instance, direction: Direction) -> ShortestPaths {
    let origin = match direction {
        Direction::FromSource => instance.source(),
        Direction::ToSink => instance.sink(),
    };
    let weights: Vec<Cost> = instance.arcs().iter().map(|a| a.weight).collect();
    search(instance, origin, direction, &weights, None, None)
}

/// Vertices and arcs excluded from a restricted search.
#[derive(Debug, Clone)]
pub(crate) struct Restriction {
    pub banned_vertices: Vec<bool>,
    pub banned_arcs: Vec<bool>,
}

impl Restriction {
    pub fn none(instance: &Instance) -> Self {
        Restriction {
            banned_vertices: vec![false; instance.vertex_count()],
            banned_arcs: vec![false; instance.arc_count()],
        }
    }
}

/// Cheapest forward path `from -> to` under `weights`, avoiding the
/// restriction. Returns the vertex sequence and its weight.
pub(crate) fn restricted_path(
    instance: &Instance,
    from: VertexId,
    to: VertexId,
    weights: &[Cost],
    restriction: &Restriction,
) -> Option<(Vec<VertexId>, Cost)> {
    let tree = search(instance, from, Direction::FromSource, weights, Some(restriction), Some(to));
    let cost = tree.dist[to]?;
    Some((tree.path(instance, to)?, cost))
}

fn search(
    instance: &Instance,
    origin: VertexId,
    direction: Direction,
    weights: &[Cost],
    restriction: Option<&Restriction>,
    target: Option<VertexId>,
) -> ShortestPaths {
    let n = instance.vertex_count();
    let mut dist: Vec<Option<Cost>> = vec![None; n];
    let mut pred = vec![None; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();

    let vertex_ok = |v: VertexId| restriction.is_none_or(|r| !r.banned_vertices[v]);
    let arc_ok = |a: ArcId| restriction.is_none_or(|r| !r.banned_arcs[a]);

    if vertex_ok(origin) {
        dist[origin] = Some(0);
        heap.push(Reverse((0, origin)));
    }
    while let Some(Reverse((d, u))) = heap.pop() {
        if settled[u] {
            continue;
        }
        settled[u] = true;
        if target == Some(u) {
            break;
        }
        let arcs = match direction {
            Direction::FromSource => instance.out_arcs(u),
            Direction::ToSink => instance.in_arcs(u),
        };
        for &a in arcs {
            let arc = instance.arc(a);
            let v = match direction {
                Direction::FromSource => arc.head,
                Direction::ToSink => arc.tail,
            };
            if settled[v] || !vertex_ok(v) || !arc_ok(a) {
                continue;
            }
            let nd = d + weights[a];
            if dist[v].is_none_or(|old| nd < old) {
                dist[v] = Some(nd);
                pred[v] = Some(a);
                heap.push(Reverse((nd, v)));
            }
        }
    }
    ShortestPaths { direction, origin, dist, pred }
}
