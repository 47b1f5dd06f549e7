//! Depth-first branch-and-bound over simple partial paths from the source.
//!
//! Node bound: arc cost of the partial path, plus the penalties of conflicts
//! whose two arcs are both decided, plus the conflict-free distance from the
//! current vertex to the sink. An arc is decided-in when it lies on the
//! partial path and decided-out when no completion can use it: its tail is
//! an interior path vertex or the sink, or its head is already on the path.
//! A decided pair's penalty is paid in every completion, and the remaining
//! terms are non-negative, so the bound never exceeds any completion.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use super::dijkstra::{dijkstra, Direction};
use super::{Bound, SolveReport, Status};
use crate::model::{evaluate, ArcId, Cost, Instance, PathSolution, VertexId};

const CLOCK_CHECK_INTERVAL: u64 = 1024;

#[derive(Debug, Clone, Copy)]
pub struct BranchAndBoundConfig {
    pub time_limit: Option<Duration>,
    /// Threads exploring root subtrees. One gives bitwise-reproducible reports.
    pub workers: usize,
}

impl Default for BranchAndBoundConfig {
    fn default() -> Self {
        BranchAndBoundConfig { time_limit: None, workers: 1 }
    }
}

impl BranchAndBoundConfig {
    pub fn with_time_limit(time_limit: Duration) -> Self {
        BranchAndBoundConfig { time_limit: Some(time_limit), ..Self::default() }
    }
}

/// A search node as seen by an observer.
#[derive(Debug, Clone, Copy)]
pub struct NodeView<'a> {
    pub path: &'a [VertexId],
    pub bound: Cost,
}

pub fn branch_and_bound(instance: &Instance, config: &BranchAndBoundConfig) -> SolveReport {
    run(instance, config, None)
}

/// Single-worker search calling `observer` on every node entered, pruned or not.
pub fn branch_and_bound_observed(
    instance: &Instance,
    time_limit: Option<Duration>,
    observer: &mut dyn FnMut(NodeView<'_>),
) -> SolveReport {
    let config = BranchAndBoundConfig { time_limit, workers: 1 };
    run(instance, &config, Some(observer))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ArcState {
    Undecided,
    In,
    Out,
}

/// Incumbent value visible to every worker.
struct Shared {
    incumbent: AtomicU64,
    next_root_child: AtomicUsize,
}

struct Search<'a, 'o> {
    inst: &'a Instance,
    dist_to_sink: &'a [Option<Cost>],
    shared: &'a Shared,
    start: Instant,
    deadline: Option<Instant>,
    observer: Option<&'o mut dyn FnMut(NodeView<'_>)>,

    state: Vec<ArcState>,
    trail: Vec<ArcId>,
    on_path: Vec<bool>,
    path: Vec<VertexId>,
    arc_cost: Cost,
    committed: Cost,

    best: Option<PathSolution>,
    history: Vec<Cost>,
    time_to_best: Duration,
    nodes: u64,
    timed_out: bool,
    open_bound: Bound,
}

/// Undo point for one extension.
struct Mark {
    trail_len: usize,
    committed: Cost,
    arc_cost: Cost,
}

impl<'a, 'o> Search<'a, 'o> {
    fn new(
        inst: &'a Instance,
        dist_to_sink: &'a [Option<Cost>],
        shared: &'a Shared,
        start: Instant,
        deadline: Option<Instant>,
        observer: Option<&'o mut dyn FnMut(NodeView<'_>)>,
    ) -> Self {
        let s = inst.source();
        let mut search = Search {
            inst,
            dist_to_sink,
            shared,
            start,
            deadline,
            observer,
            state: vec![ArcState::Undecided; inst.arc_count()],
            trail: Vec::new(),
            on_path: vec![false; inst.vertex_count()],
            path: vec![s],
            arc_cost: 0,
            committed: 0,
            best: None,
            history: Vec::new(),
            time_to_best: Duration::ZERO,
            nodes: 0,
            timed_out: false,
            open_bound: Bound::Infinite,
        };
        search.on_path[s] = true;
        for &a in inst.in_arcs(s) {
            search.decide(a, ArcState::Out);
        }
        for &a in inst.out_arcs(inst.sink()) {
            search.decide(a, ArcState::Out);
        }
        search
    }

    fn incumbent(&self) -> Cost {
        self.shared.incumbent.load(Ordering::Acquire)
    }

    fn decide(&mut self, arc: ArcId, to: ArcState) {
        if self.state[arc] != ArcState::Undecided {
            return;
        }
        self.state[arc] = to;
        self.trail.push(arc);
        for &c in self.inst.conflicts_of(arc) {
            let conflict = self.inst.conflict(c);
            if self.state[conflict.partner(arc)] == to {
                self.committed += conflict.penalty;
            }
        }
    }

    fn current(&self) -> VertexId {
        *self.path.last().unwrap()
    }

    fn bound(&self) -> Option<Cost> {
        self.dist_to_sink[self.current()].map(|d| self.arc_cost + self.committed + d)
    }

    fn extend(&mut self, arc: ArcId) -> Mark {
        let mark = Mark { trail_len: self.trail.len(), committed: self.committed, arc_cost: self.arc_cost };
        let inst = self.inst;
        let (u, v) = (inst.arc(arc).tail, inst.arc(arc).head);
        self.decide(arc, ArcState::In);
        for &a in inst.out_arcs(u) {
            self.decide(a, ArcState::Out);
        }
        for &a in inst.in_arcs(v) {
            self.decide(a, ArcState::Out);
        }
        self.arc_cost += inst.arc(arc).weight;
        self.on_path[v] = true;
        self.path.push(v);
        mark
    }

    fn retract(&mut self, mark: Mark) {
        let v = self.path.pop().unwrap();
        self.on_path[v] = false;
        for arc in self.trail.drain(mark.trail_len..) {
            self.state[arc] = ArcState::Undecided;
        }
        self.committed = mark.committed;
        self.arc_cost = mark.arc_cost;
    }

    /// Outgoing arcs to unvisited vertices that can still reach the sink,
    /// cheapest estimated completion first.
    fn children(&self) -> Vec<ArcId> {
        let mut children: Vec<(Cost, ArcId)> = self
            .inst
            .out_arcs(self.current())
            .iter()
            .filter_map(|&a| {
                let arc = self.inst.arc(a);
                if self.on_path[arc.head] {
                    return None;
                }
                self.dist_to_sink[arc.head].map(|d| (arc.weight + d, a))
            })
            .collect();
        children.sort_unstable();
        children.into_iter().map(|(_, a)| a).collect()
    }

    fn check_clock(&mut self) {
        if let Some(deadline) = self.deadline {
            if (self.nodes - 1).is_multiple_of(CLOCK_CHECK_INTERVAL) && Instant::now() >= deadline {
                self.timed_out = true;
            }
        }
    }

    fn record_open(&mut self, bound: Option<Cost>) {
        if let Some(b) = bound {
            if b < self.incumbent() {
                self.open_bound = self.open_bound.min(Bound::Finite(b));
            }
        }
    }

    fn explore(&mut self) {
        self.nodes += 1;
        self.check_clock();
        let Some(bound) = self.bound() else { return };
        if let Some(observer) = self.observer.as_mut() {
            observer(NodeView { path: &self.path, bound });
        }
        if self.timed_out {
            self.record_open(Some(bound));
            return;
        }
        if bound >= self.incumbent() {
            return;
        }
        if self.current() == self.inst.sink() {
            self.accept_leaf();
            return;
        }
        let children = self.children();
        for (i, &arc) in children.iter().enumerate() {
            let mark = self.extend(arc);
            self.explore();
            self.retract(mark);
            if self.timed_out {
                for &rest in &children[i + 1..] {
                    self.open_child(rest);
                }
                return;
            }
        }
    }

    fn open_child(&mut self, arc: ArcId) {
        let mark = self.extend(arc);
        let b = self.bound();
        self.retract(mark);
        self.record_open(b);
    }

    fn accept_leaf(&mut self) {
        let sol = evaluate(self.inst, &self.path).expect("search paths are simple s-t paths");
        let obj = sol.objective();
        if obj < self.incumbent() {
            self.shared.incumbent.fetch_min(obj, Ordering::AcqRel);
            self.history.push(obj);
            self.time_to_best = self.start.elapsed();
            self.best = Some(sol);
        }
    }
}

fn run(
    instance: &Instance,
    config: &BranchAndBoundConfig,
    observer: Option<&mut dyn FnMut(NodeView<'_>)>,
) -> SolveReport {
    let start = Instant::now();
    let deadline = config.time_limit.map(|t| start + t);
    let dist_to_sink = dijkstra(instance, Direction::ToSink).dist;
    if dist_to_sink[instance.source()].is_none() {
        return SolveReport::infeasible(start.elapsed(), 0);
    }
    let shared = Shared { incumbent: AtomicU64::new(Cost::MAX), next_root_child: AtomicUsize::new(0) };

    let outcome = if config.workers <= 1 || observer.is_some() {
        let mut search = Search::new(instance, &dist_to_sink, &shared, start, deadline, observer);
        search.explore();
        Outcome::from_search(search)
    } else {
        run_parallel(instance, config.workers, &dist_to_sink, &shared, start, deadline)
    };

    let elapsed = start.elapsed();
    let upper_bound = Bound::from(outcome.best.as_ref().map(PathSolution::objective));
    let (status, lower_bound) = match (outcome.timed_out, &outcome.best) {
        (false, Some(_)) => (Status::Optimal, upper_bound),
        (false, None) => (Status::Infeasible, Bound::Infinite),
        (true, _) => (Status::TimeLimit, outcome.open_bound.min(upper_bound)),
    };
    SolveReport {
        lower_bound,
        upper_bound,
        incumbent: outcome.best,
        seconds_to_best: outcome.time_to_best,
        seconds_total: elapsed,
        nodes_explored: outcome.nodes,
        status,
        incumbent_history: outcome.history,
    }
}

struct Outcome {
    best: Option<PathSolution>,
    history: Vec<Cost>,
    time_to_best: Duration,
    nodes: u64,
    timed_out: bool,
    open_bound: Bound,
}

impl Outcome {
    fn from_search(search: Search<'_, '_>) -> Self {
        Outcome {
            best: search.best,
            history: search.history,
            time_to_best: search.time_to_best,
            nodes: search.nodes,
            timed_out: search.timed_out,
            open_bound: search.open_bound,
        }
    }
}

/// Workers claim root children from a shared counter and prune against a
/// shared incumbent value. The optimal objective does not depend on the
/// worker count; which optimal path is returned may.
fn run_parallel(
    instance: &Instance,
    workers: usize,
    dist_to_sink: &[Option<Cost>],
    shared: &Shared,
    start: Instant,
    deadline: Option<Instant>,
) -> Outcome {
    let root_children = Search::new(instance, dist_to_sink, shared, start, deadline, None).children();
    let results: Mutex<Vec<(usize, Outcome)>> = Mutex::new(Vec::new());

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = shared.next_root_child.fetch_add(1, Ordering::AcqRel);
                if i >= root_children.len() {
                    break;
                }
                let mut search = Search::new(instance, dist_to_sink, shared, start, deadline, None);
                // the root node itself is accounted once, by the merge below
                let mark = search.extend(root_children[i]);
                search.explore();
                search.retract(mark);
                results.lock().unwrap().push((i, Outcome::from_search(search)));
            });
        }
    });

    let mut results = results.into_inner().unwrap();
    results.sort_by_key(|(i, _)| *i);
    let mut merged = Outcome {
        best: None,
        history: Vec::new(),
        time_to_best: Duration::ZERO,
        nodes: 1,
        timed_out: false,
        open_bound: Bound::Infinite,
    };
    let mut improvements: Vec<(Duration, Cost)> = Vec::new();
    for (_, part) in results {
        merged.nodes += part.nodes;
        merged.timed_out |= part.timed_out;
        merged.open_bound = merged.open_bound.min(part.open_bound);
        improvements.extend(part.history.iter().map(|&c| (part.time_to_best, c)));
        let better = match (&merged.best, &part.best) {
            (_, None) => false,
            (None, Some(_)) => true,
            (Some(m), Some(p)) => p.objective() < m.objective(),
        };
        if better {
            merged.best = part.best;
            merged.time_to_best = part.time_to_best;
        }
    }
    // a claimed-but-unfinished root child is covered by its worker's open bound;
    // unclaimed ones (time ran out first) are bounded here
    if merged.timed_out {
        let mut probe = Search::new(instance, dist_to_sink, shared, start, deadline, None);
        let claimed = shared.next_root_child.load(Ordering::Acquire).min(root_children.len());
        for &arc in &root_children[claimed..] {
            probe.open_child(arc);
        }
        merged.open_bound = merged.open_bound.min(probe.open_bound);
    }
    improvements.sort();
    let mut last = Cost::MAX;
    for (_, c) in improvements {
        if c < last {
            merged.history.push(c);
            last = c;
        }
    }
    merged
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{seven_vertex, single_arc, SevenVertex};
    use crate::model::Arc;

    #[test]
    fn seven_vertex_optimal() {
        let inst = seven_vertex(10);
        let r = branch_and_bound(&inst, &BranchAndBoundConfig::default());
        assert_eq!(r.status, Status::Optimal);
        assert_eq!(r.lower_bound, Bound::Finite(7));
        assert_eq!(r.upper_bound, Bound::Finite(7));
        let sol = r.incumbent.unwrap();
        assert_eq!(sol.vertices, SevenVertex::path(&["s", "a", "c", "d", "t"]));
        assert!(sol.violated_conflicts.is_empty());
    }

    #[test]
    fn incumbents_strictly_decrease() {
        let r = branch_and_bound(&seven_vertex(10), &BranchAndBoundConfig::default());
        assert!(r.incumbent_history.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(r.incumbent_history.last(), Some(&7));
    }

    #[test]
    fn infeasible_when_sink_unreachable() {
        let inst = Instance::new(3, vec![Arc::new(0, 1, 1)], vec![], 0, 2).unwrap();
        let r = branch_and_bound(&inst, &BranchAndBoundConfig::default());
        assert_eq!(r.status, Status::Infeasible);
        assert!(r.incumbent.is_none());
    }

    #[test]
    fn two_vertex() {
        let r = branch_and_bound(&single_arc(5), &BranchAndBoundConfig::default());
        assert_eq!(r.objective(), Some(5));
    }

    #[test]
    fn zero_time_limit_stops_at_root() {
        let inst = seven_vertex(10);
        let r = branch_and_bound(&inst, &BranchAndBoundConfig::with_time_limit(Duration::ZERO));
        assert_eq!(r.status, Status::TimeLimit);
        assert!(r.incumbent.is_none());
        // root bound: distance 5, no pair decided yet
        assert_eq!(r.lower_bound, Bound::Finite(5));
    }

    #[test]
    fn parallel_matches_serial_objective() {
        let inst = seven_vertex(10);
        let serial = branch_and_bound(&inst, &BranchAndBoundConfig::default());
        let parallel = branch_and_bound(&inst, &BranchAndBoundConfig { time_limit: None, workers: 4 });
        assert_eq!(parallel.status, Status::Optimal);
        assert_eq!(parallel.objective(), serial.objective());
    }

    #[test]
    fn observer_sees_root_first() {
        let inst = seven_vertex(10);
        let mut seen = Vec::new();
        branch_and_bound_observed(&inst, None, &mut |node| seen.push((node.path.to_vec(), node.bound)));
        assert_eq!(seen[0], (vec![inst.source()], 5));
    }
}
