//! Small hand-built instances used by tests and examples.

use crate::model::{Arc, Conflict, Cost, Instance, VertexId};

/// Vertex labels of the seven-vertex worked example, in id order.
pub struct SevenVertex;

impl SevenVertex {
    pub const LABELS: [&'static str; 7] = ["s", "a", "b", "c", "d", "e", "t"];

    pub fn id(label: &str) -> VertexId {
        Self::LABELS.iter().position(|&l| l == label).unwrap_or_else(|| panic!("unknown vertex label {label}"))
    }

    pub fn label(v: VertexId) -> &'static str {
        Self::LABELS[v]
    }

    pub fn path(labels: &[&str]) -> Vec<VertexId> {
        labels.iter().map(|l| Self::id(l)).collect()
    }
}

/// The seven-vertex, twelve-arc example with three colour-coded conflict
/// pairs (red, blue, green), every pair carrying `penalty`.
///
/// Its unique penalty-free path `s,a,c,d,t` costs 7.
pub fn seven_vertex(penalty: Cost) -> Instance {
    let id = SevenVertex::id;
    let arc = |t: &str, h: &str, w| Arc::new(id(t), id(h), w);
    let arcs = vec![
        arc("s", "a", 3), // 0 red
        arc("s", "b", 1), // 1
        arc("a", "c", 1), // 2 blue
        arc("a", "d", 2), // 3 green
        arc("b", "a", 1), // 4
        arc("b", "c", 4), // 5
        arc("b", "e", 3), // 6 blue
        arc("c", "d", 2), // 7
        arc("c", "e", 4), // 8
        arc("c", "t", 2), // 9 red
        arc("d", "t", 1), // 10 green
        arc("e", "t", 3), // 11
    ];
    let conflicts = vec![Conflict::new(0, 9, penalty), Conflict::new(2, 6, penalty), Conflict::new(3, 10, penalty)];
    Instance::new(7, arcs, conflicts, id("s"), id("t")).expect("seven-vertex instance is valid")
}

/// A single arc `0 -> 1` of the given weight, no conflicts.
pub fn single_arc(weight: Cost) -> Instance {
    Instance::new(2, vec![Arc::new(0, 1, weight)], vec![], 0, 1).expect("valid")
}
