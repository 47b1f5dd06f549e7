//! Problem data model, objective evaluation and structural validation of
//! candidate solutions.
//!
//! A conflict `{a, b}` is satisfied only when exactly one of its two arcs lies
//! on the path. Using both arcs, or neither, costs the conflict's penalty.
//! All arithmetic is integer.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

pub type VertexId = usize;
pub type ArcId = usize;
pub type ConflictId = usize;
/// Arc weights, penalties and objective values.
pub type Cost = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub tail: VertexId,
    pub head: VertexId,
    pub weight: Cost,
}

impl Arc {
    pub fn new(tail: VertexId, head: VertexId, weight: Cost) -> Self {
        Arc { tail, head, weight }
    }
}

/// An unordered pair of arcs, referenced by index, with its penalty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Conflict {
    pub arc_a: ArcId,
    pub arc_b: ArcId,
    pub penalty: Cost,
}

impl Conflict {
    pub fn new(arc_a: ArcId, arc_b: ArcId, penalty: Cost) -> Self {
        Conflict { arc_a, arc_b, penalty }
    }

    /// The arc paired with `arc` in this conflict.
    pub fn partner(&self, arc: ArcId) -> ArcId {
        if self.arc_a == arc {
            self.arc_b
        } else {
            self.arc_a
        }
    }

    fn key(&self) -> (ArcId, ArcId) {
        (self.arc_a.min(self.arc_b), self.arc_a.max(self.arc_b))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("vertex count must be positive")]
    NoVertices,
    #[error("source and sink coincide (vertex {0})")]
    SourceIsSink(VertexId),
    #[error("vertex {vertex} out of range (vertex count {vertex_count})")]
    VertexOutOfRange { vertex: VertexId, vertex_count: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate arc ({tail}, {head})")]
    DuplicateArc { tail: VertexId, head: VertexId },
    #[error("arc index out of range: {index} (arc count {arc_count})")]
    ArcIndexOutOfRange { index: ArcId, arc_count: usize },
    #[error("conflict {0} pairs an arc with itself")]
    DegenerateConflict(ConflictId),
    #[error("duplicate conflict pair ({0}, {1})")]
    DuplicateConflict(ArcId, ArcId),
    #[error("conflict {0} has zero penalty")]
    ZeroPenalty(ConflictId),
}

/// A validated problem instance: directed graph, conflict pairs, source and
/// sink. Immutable once built.
#[derive(Debug, Clone)]
pub struct Instance {
    vertex_count: usize,
    arcs: Vec<Arc>,
    conflicts: Vec<Conflict>,
    source: VertexId,
    sink: VertexId,
    out_arcs: Vec<Vec<ArcId>>,
    in_arcs: Vec<Vec<ArcId>>,
    arc_conflicts: Vec<Vec<ConflictId>>,
    arc_lookup: HashMap<(VertexId, VertexId), ArcId>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count
            && self.source == other.source
            && self.sink == other.sink
            && self.arcs == other.arcs
            && self.conflicts == other.conflicts
    }
}

impl Eq for Instance {}

impl Instance {
    pub fn new(
        vertex_count: usize,
        arcs: Vec<Arc>,
        conflicts: Vec<Conflict>,
        source: VertexId,
        sink: VertexId,
    ) -> Result<Self, InstanceError> {
        if vertex_count == 0 {
            return Err(InstanceError::NoVertices);
        }
        for v in [source, sink] {
            if v >= vertex_count {
                return Err(InstanceError::VertexOutOfRange { vertex: v, vertex_count });
            }
        }
        if source == sink {
            return Err(InstanceError::SourceIsSink(source));
        }

        let mut out_arcs = vec![Vec::new(); vertex_count];
        let mut in_arcs = vec![Vec::new(); vertex_count];
        let mut arc_lookup = HashMap::with_capacity(arcs.len());
        for (id, arc) in arcs.iter().enumerate() {
            for v in [arc.tail, arc.head] {
                if v >= vertex_count {
                    return Err(InstanceError::VertexOutOfRange { vertex: v, vertex_count });
                }
            }
            if arc.tail == arc.head {
                return Err(InstanceError::SelfLoop(arc.tail));
            }
            if arc_lookup.insert((arc.tail, arc.head), id).is_some() {
                return Err(InstanceError::DuplicateArc { tail: arc.tail, head: arc.head });
            }
            out_arcs[arc.tail].push(id);
            in_arcs[arc.head].push(id);
        }

        let mut arc_conflicts = vec![Vec::new(); arcs.len()];
        let mut seen = HashSet::with_capacity(conflicts.len());
        for (id, c) in conflicts.iter().enumerate() {
            for index in [c.arc_a, c.arc_b] {
                if index >= arcs.len() {
                    return Err(InstanceError::ArcIndexOutOfRange { index, arc_count: arcs.len() });
                }
            }
            if c.arc_a == c.arc_b {
                return Err(InstanceError::DegenerateConflict(id));
            }
            if c.penalty == 0 {
                return Err(InstanceError::ZeroPenalty(id));
            }
            let key = c.key();
            if !seen.insert(key) {
                return Err(InstanceError::DuplicateConflict(key.0, key.1));
            }
            arc_conflicts[c.arc_a].push(id);
            arc_conflicts[c.arc_b].push(id);
        }

        Ok(Instance { vertex_count, arcs, conflicts, source, sink, out_arcs, in_arcs, arc_conflicts, arc_lookup })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn conflict_count(&self) -> usize {
        self.conflicts.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> &Arc {
        &self.arcs[id]
    }

    pub fn conflicts(&self) -> &[Conflict] {
        &self.conflicts
    }

    pub fn conflict(&self, id: ConflictId) -> &Conflict {
        &self.conflicts[id]
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn sink(&self) -> VertexId {
        self.sink
    }

    /// Outgoing arcs of `v`, in arc index order.
    pub fn out_arcs(&self, v: VertexId) -> &[ArcId] {
        &self.out_arcs[v]
    }

    /// Incoming arcs of `v`, in arc index order.
    pub fn in_arcs(&self, v: VertexId) -> &[ArcId] {
        &self.in_arcs[v]
    }

    /// Conflicts in which `arc` takes part.
    pub fn conflicts_of(&self, arc: ArcId) -> &[ConflictId] {
        &self.arc_conflicts[arc]
    }

    pub fn find_arc(&self, tail: VertexId, head: VertexId) -> Option<ArcId> {
        self.arc_lookup.get(&(tail, head)).copied()
    }

    /// Sum of all penalties; the objective of the empty selection.
    pub fn total_penalty(&self) -> Cost {
        self.conflicts.iter().map(|c| c.penalty).sum()
    }

    /// Same graph and conflict pairs with every penalty replaced.
    pub fn with_uniform_penalty(&self, penalty: Cost) -> Result<Self, InstanceError> {
        let conflicts = self.conflicts.iter().map(|c| Conflict::new(c.arc_a, c.arc_b, penalty)).collect();
        Instance::new(self.vertex_count, self.arcs.clone(), conflicts, self.source, self.sink)
    }
}

/// One penalty term of the objective: `p * (2y - x_a - x_b + 1)` with
/// `y = x_a AND x_b`. Equals `p` when both or neither arc is selected and
/// zero otherwise.
pub fn conflict_penalty_term(x_a: bool, x_b: bool, penalty: Cost) -> Cost {
    let (a, b) = (i64::from(x_a), i64::from(x_b));
    let y = a * b;
    let factor = 2 * y - a - b + 1;
    debug_assert!(factor == 0 || factor == 1);
    penalty * factor as Cost
}

/// Arc and penalty variable values (`x` per arc, `y` per conflict).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceVector {
    pub arc_flags: Vec<bool>,
    pub penalty_flags: Vec<bool>,
}

impl IncidenceVector {
    /// Sets each penalty flag to the conjunction of its two arc flags, the
    /// only value the linking constraints admit.
    pub fn from_arc_flags(instance: &Instance, arc_flags: Vec<bool>) -> Self {
        assert_eq!(arc_flags.len(), instance.arc_count());
        let penalty_flags = instance.conflicts().iter().map(|c| arc_flags[c.arc_a] && arc_flags[c.arc_b]).collect();
        IncidenceVector { arc_flags, penalty_flags }
    }

    /// Whether every `y` satisfies `y >= x_a + x_b - 1`, `y <= x_a`, `y <= x_b`.
    pub fn is_linked(&self, instance: &Instance) -> bool {
        instance.conflicts().iter().zip(&self.penalty_flags).all(|(c, &y)| {
            let (a, b) = (self.arc_flags[c.arc_a], self.arc_flags[c.arc_b]);
            y == (a && b)
        })
    }

    /// The linearised objective evaluated literally, term by term.
    pub fn objective(&self, instance: &Instance) -> Cost {
        let arc_part: i64 =
            instance.arcs().iter().zip(&self.arc_flags).filter(|(_, &x)| x).map(|(a, _)| a.weight as i64).sum();
        let penalty_part: i64 = instance
            .conflicts()
            .iter()
            .zip(&self.penalty_flags)
            .map(|(c, &y)| {
                let xa = i64::from(self.arc_flags[c.arc_a]);
                let xb = i64::from(self.arc_flags[c.arc_b]);
                c.penalty as i64 * (2 * i64::from(y) - xa - xb + 1)
            })
            .sum();
        (arc_part + penalty_part) as Cost
    }
}

/// A simple source-to-sink path with its objective breakdown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSolution {
    pub vertices: Vec<VertexId>,
    pub arc_indices: Vec<ArcId>,
    pub arc_cost: Cost,
    pub penalty_cost: Cost,
    /// Sorted ascending.
    pub violated_conflicts: Vec<ConflictId>,
}

impl PathSolution {
    pub fn objective(&self) -> Cost {
        self.arc_cost + self.penalty_cost
    }

    pub fn arc_flags(&self, instance: &Instance) -> Vec<bool> {
        let mut flags = vec![false; instance.arc_count()];
        for &a in &self.arc_indices {
            flags[a] = true;
        }
        flags
    }

    pub fn incidence(&self, instance: &Instance) -> IncidenceVector {
        IncidenceVector::from_arc_flags(instance, self.arc_flags(instance))
    }
}

impl fmt::Display for PathSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(
            f,
            "{} (arcs {} + penalties {} = {})",
            path.join(","),
            self.arc_cost,
            self.penalty_cost,
            self.objective()
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MalformedPath {
    #[error("path is empty")]
    Empty,
    #[error("path starts at {found}, expected source {expected}")]
    WrongStart { found: VertexId, expected: VertexId },
    #[error("path ends at {found}, expected sink {expected}")]
    WrongEnd { found: VertexId, expected: VertexId },
    #[error("vertex {0} repeats")]
    RepeatedVertex(VertexId),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(VertexId),
    #[error("no arc ({0}, {1})")]
    MissingArc(VertexId, VertexId),
}

/// Evaluates a vertex sequence against the instance.
pub fn evaluate(instance: &Instance, path: &[VertexId]) -> Result<PathSolution, MalformedPath> {
    let (&first, &last) = match (path.first(), path.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(MalformedPath::Empty),
    };
    if let Some(&v) = path.iter().find(|&&v| v >= instance.vertex_count()) {
        return Err(MalformedPath::VertexOutOfRange(v));
    }
    if first != instance.source() {
        return Err(MalformedPath::WrongStart { found: first, expected: instance.source() });
    }
    if last != instance.sink() {
        return Err(MalformedPath::WrongEnd { found: last, expected: instance.sink() });
    }
    let mut seen = vec![false; instance.vertex_count()];
    for &v in path {
        if std::mem::replace(&mut seen[v], true) {
            return Err(MalformedPath::RepeatedVertex(v));
        }
    }
    let arc_indices = path
        .windows(2)
        .map(|w| instance.find_arc(w[0], w[1]).ok_or(MalformedPath::MissingArc(w[0], w[1])))
        .collect::<Result<Vec<_>, _>>()?;

    let mut selected = vec![false; instance.arc_count()];
    for &a in &arc_indices {
        selected[a] = true;
    }
    let arc_cost = arc_indices.iter().map(|&a| instance.arc(a).weight).sum();
    let violated_conflicts: Vec<ConflictId> = instance
        .conflicts()
        .iter()
        .enumerate()
        .filter(|(_, c)| selected[c.arc_a] == selected[c.arc_b])
        .map(|(id, _)| id)
        .collect();
    let penalty_cost = violated_conflicts.iter().map(|&c| instance.conflict(c).penalty).sum();

    Ok(PathSolution { vertices: path.to_vec(), arc_indices, arc_cost, penalty_cost, violated_conflicts })
}

/// Why an arc selection is not a single simple source-to-sink path.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SelectionViolation {
    #[error("expected {expected} flags, got {found}")]
    WrongLength { expected: usize, found: usize },
    /// Outflow minus inflow at `vertex` differs from the required balance
    /// (+1 at the source, -1 at the sink, 0 elsewhere).
    #[error("flow imbalance at vertex {vertex}: out - in = {net_outflow}, required {required}")]
    FlowImbalance { vertex: VertexId, net_outflow: i64, required: i64 },
    /// The selected arcs inside `vertices` number at least `|vertices|`,
    /// violating the subtour elimination inequality for that subset.
    #[error("cycle through vertices {vertices:?}")]
    Cycle { vertices: Vec<VertexId> },
}

/// Accepts the arc selection iff it is exactly one simple source-to-sink
/// path, returning its evaluation.
pub fn validate_selection(instance: &Instance, arc_flags: &[bool]) -> Result<PathSolution, SelectionViolation> {
    if arc_flags.len() != instance.arc_count() {
        return Err(SelectionViolation::WrongLength { expected: instance.arc_count(), found: arc_flags.len() });
    }
    let (s, t) = (instance.source(), instance.sink());
    let mut net = vec![0i64; instance.vertex_count()];
    for (arc, _) in instance.arcs().iter().zip(arc_flags).filter(|(_, &x)| x) {
        net[arc.tail] += 1;
        net[arc.head] -= 1;
    }
    let required = |v: VertexId| {
        if v == s {
            1
        } else if v == t {
            -1
        } else {
            0
        }
    };
    let order = [s, t].into_iter().chain((0..instance.vertex_count()).filter(|&v| v != s && v != t));
    for v in order {
        if net[v] != required(v) {
            return Err(SelectionViolation::FlowImbalance { vertex: v, net_outflow: net[v], required: required(v) });
        }
    }

    // Balanced flow decomposes into one s-t path plus zero or more cycles.
    let mut remaining: Vec<bool> = arc_flags.to_vec();
    let first_out = |remaining: &[bool], v: VertexId| instance.out_arcs(v).iter().copied().find(|&a| remaining[a]);
    let mut path = vec![s];
    let mut position = vec![usize::MAX; instance.vertex_count()];
    position[s] = 0;
    let mut current = s;
    while current != t {
        let arc = first_out(&remaining, current).expect("balanced flow leaves every entered vertex");
        remaining[arc] = false;
        let next = instance.arc(arc).head;
        if position[next] != usize::MAX {
            return Err(SelectionViolation::Cycle { vertices: sorted(&path[position[next]..]) });
        }
        position[next] = path.len();
        path.push(next);
        current = next;
    }

    if let Some(start_arc) = remaining.iter().position(|&x| x) {
        let mut walk = vec![instance.arc(start_arc).tail];
        let mut at = vec![usize::MAX; instance.vertex_count()];
        at[walk[0]] = 0;
        let mut arc = start_arc;
        loop {
            remaining[arc] = false;
            let next = instance.arc(arc).head;
            if at[next] != usize::MAX {
                return Err(SelectionViolation::Cycle { vertices: sorted(&walk[at[next]..]) });
            }
            at[next] = walk.len();
            walk.push(next);
            arc = first_out(&remaining, next).expect("leftover flow is a circulation");
        }
    }

    Ok(evaluate(instance, &path).expect("walk follows selected arcs without repeats"))
}

fn sorted(vertices: &[VertexId]) -> Vec<VertexId> {
    let mut v = vertices.to_vec();
    v.sort_unstable();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{seven_vertex, SevenVertex};

    #[test]
    fn penalty_term_cases() {
        assert_eq!(conflict_penalty_term(true, true, 10), 10);
        assert_eq!(conflict_penalty_term(false, false, 10), 10);
        assert_eq!(conflict_penalty_term(true, false, 10), 0);
        assert_eq!(conflict_penalty_term(false, true, 10), 0);
    }

    #[test]
    fn seven_vertex_optimal_path_has_no_penalty() {
        let inst = seven_vertex(10);
        let sol = evaluate(&inst, &SevenVertex::path(&["s", "a", "c", "d", "t"])).unwrap();
        assert_eq!(sol.arc_cost, 7);
        assert_eq!(sol.penalty_cost, 0);
        assert!(sol.violated_conflicts.is_empty());
    }

    #[test]
    fn seven_vertex_cheap_path_violates_all_three_pairs() {
        let inst = seven_vertex(10);
        let sol = evaluate(&inst, &SevenVertex::path(&["s", "b", "a", "d", "t"])).unwrap();
        assert_eq!(sol.arc_cost, 5);
        assert_eq!(sol.penalty_cost, 30);
        assert_eq!(sol.violated_conflicts, vec![0, 1, 2]);
    }

    #[test]
    fn no_conflicts_no_penalty() {
        let arcs = vec![Arc::new(0, 1, 2), Arc::new(1, 2, 3), Arc::new(0, 2, 9)];
        let inst = Instance::new(3, arcs, vec![], 0, 2).unwrap();
        assert_eq!(evaluate(&inst, &[0, 1, 2]).unwrap().penalty_cost, 0);
        assert_eq!(evaluate(&inst, &[0, 2]).unwrap().objective(), 9);
    }

    #[test]
    fn malformed_paths() {
        let inst = seven_vertex(10);
        let p = |names: &[&str]| SevenVertex::path(names);
        assert_eq!(evaluate(&inst, &[]), Err(MalformedPath::Empty));
        assert!(matches!(evaluate(&inst, &p(&["a", "c", "t"])), Err(MalformedPath::WrongStart { .. })));
        assert!(matches!(evaluate(&inst, &p(&["s", "a", "c"])), Err(MalformedPath::WrongEnd { .. })));
        assert!(matches!(evaluate(&inst, &p(&["s", "a", "t"])), Err(MalformedPath::MissingArc(..))));
        assert_eq!(evaluate(&inst, &[0, 99, 6]), Err(MalformedPath::VertexOutOfRange(99)));
        let mut bad = p(&["s", "a", "c", "e", "t"]);
        bad.insert(3, SevenVertex::id("a"));
        assert_eq!(evaluate(&inst, &bad), Err(MalformedPath::RepeatedVertex(SevenVertex::id("a"))));
    }

    #[test]
    fn instance_invariants() {
        let a = |t, h| Arc::new(t, h, 1);
        assert_eq!(Instance::new(0, vec![], vec![], 0, 0), Err(InstanceError::NoVertices));
        assert_eq!(Instance::new(2, vec![], vec![], 1, 1), Err(InstanceError::SourceIsSink(1)));
        assert_eq!(Instance::new(2, vec![a(1, 1)], vec![], 0, 1), Err(InstanceError::SelfLoop(1)));
        assert_eq!(
            Instance::new(2, vec![a(0, 1), a(0, 1)], vec![], 0, 1),
            Err(InstanceError::DuplicateArc { tail: 0, head: 1 })
        );
        assert!(matches!(
            Instance::new(2, vec![a(0, 2)], vec![], 0, 1),
            Err(InstanceError::VertexOutOfRange { vertex: 2, .. })
        ));
        let arcs = vec![a(0, 1), a(1, 0)];
        assert!(matches!(
            Instance::new(2, arcs.clone(), vec![Conflict::new(0, 2, 1)], 0, 1),
            Err(InstanceError::ArcIndexOutOfRange { index: 2, .. })
        ));
        assert_eq!(
            Instance::new(2, arcs.clone(), vec![Conflict::new(1, 1, 1)], 0, 1),
            Err(InstanceError::DegenerateConflict(0))
        );
        assert_eq!(
            Instance::new(2, arcs.clone(), vec![Conflict::new(0, 1, 0)], 0, 1),
            Err(InstanceError::ZeroPenalty(0))
        );
        assert_eq!(
            Instance::new(2, arcs, vec![Conflict::new(0, 1, 3), Conflict::new(1, 0, 4)], 0, 1),
            Err(InstanceError::DuplicateConflict(0, 1))
        );
    }

    #[test]
    fn conflict_sharing_an_endpoint_is_allowed() {
        // green pair (a,d),(d,t) meets at d
        let inst = seven_vertex(1);
        let green = inst.conflict(2);
        assert_eq!(inst.arc(green.arc_a).head, inst.arc(green.arc_b).tail);
    }

    #[test]
    fn selection_of_optimal_path_accepted() {
        let inst = seven_vertex(10);
        let sol = evaluate(&inst, &SevenVertex::path(&["s", "a", "c", "d", "t"])).unwrap();
        let accepted = validate_selection(&inst, &sol.arc_flags(&inst)).unwrap();
        assert_eq!(accepted.objective(), 7);
        assert_eq!(accepted, sol);
    }

    #[test]
    fn empty_selection_imbalanced_at_source() {
        let inst = seven_vertex(10);
        let err = validate_selection(&inst, &vec![false; inst.arc_count()]).unwrap_err();
        assert_eq!(err, SelectionViolation::FlowImbalance { vertex: inst.source(), net_outflow: 0, required: 1 });
    }

    #[test]
    fn path_plus_disjoint_triangle_yields_cycle_witness() {
        // 0 -> 1 -> 2 path, triangle 3 -> 4 -> 5 -> 3
        let arcs = vec![
            Arc::new(0, 1, 1),
            Arc::new(1, 2, 1),
            Arc::new(3, 4, 1),
            Arc::new(4, 5, 1),
            Arc::new(5, 3, 1),
            Arc::new(0, 3, 1),
        ];
        let inst = Instance::new(6, arcs, vec![], 0, 2).unwrap();
        let flags = [true, true, true, true, true, false];
        let err = validate_selection(&inst, &flags).unwrap_err();
        assert_eq!(err, SelectionViolation::Cycle { vertices: vec![3, 4, 5] });
    }

    #[test]
    fn cycle_through_the_source_is_rejected() {
        // 0 -> 1 -> 0 and 0 -> 2: out(0)=2,in(0)=1 balanced at +1
        let arcs = vec![Arc::new(0, 1, 1), Arc::new(1, 0, 1), Arc::new(0, 2, 1)];
        let inst = Instance::new(3, arcs, vec![], 0, 2).unwrap();
        let err = validate_selection(&inst, &[true, true, true]).unwrap_err();
        assert_eq!(err, SelectionViolation::Cycle { vertices: vec![0, 1] });
    }

    #[test]
    fn wrong_flag_count() {
        let inst = seven_vertex(10);
        assert!(matches!(validate_selection(&inst, &[true]), Err(SelectionViolation::WrongLength { .. })));
    }
}
