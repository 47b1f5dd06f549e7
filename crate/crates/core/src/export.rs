//! Mixed-integer model export in LP text format, exact evaluation of the
//! exported model at a given point, and the circuit-closure view of an
//! instance.
//!
//! Naming: `x_{tail}_{head}` per arc, `y_{conflict}` per conflict pair,
//! `u_{vertex}` for the ordering variables, and `obj_const`, fixed to 1,
//! which carries the objective constant.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_rational::Ratio;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::io::render_instance;
use crate::model::{ArcId, Instance, PathSolution, VertexId};

pub type Rational = Ratio<i64>;

pub const CONSTANT_VAR: &str = "obj_const";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecMode {
    /// Miller-Tucker-Zemlin ordering rows.
    Mtz,
    /// No subtour elimination rows; the file header says so.
    Omit,
}

impl fmt::Display for SecMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SecMode::Mtz => "mtz",
            SecMode::Omit => "omit",
        })
    }
}

impl FromStr for SecMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mtz" => Ok(SecMode::Mtz),
            "omit" => Ok(SecMode::Omit),
            other => Err(format!("unknown sec mode {other:?} (expected mtz or omit)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    Continuous,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: i64,
    pub upper: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }

    fn holds(self, lhs: Rational, rhs: Rational) -> bool {
        match self {
            Sense::Le => lhs <= rhs,
            Sense::Ge => lhs >= rhs,
            Sense::Eq => lhs == rhs,
        }
    }
}

/// A linear row `sum(coef * var) sense rhs`; terms index the variable catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub name: String,
    pub terms: Vec<(usize, i64)>,
    pub sense: Sense,
    pub rhs: i64,
}

#[derive(Debug, Clone)]
pub struct ExportedModel {
    pub variables: Vec<Variable>,
    /// Minimised; includes the `obj_const` term.
    pub objective: Vec<(usize, i64)>,
    pub rows: Vec<Row>,
    pub sec_mode: SecMode,
    /// Leading hex digits of the SHA-256 of the rendered instance file.
    pub instance_digest: String,
    index: HashMap<String, usize>,
}

struct Builder {
    variables: Vec<Variable>,
    index: HashMap<String, usize>,
}

impl Builder {
    fn add(&mut self, name: String, kind: VarKind, lower: i64, upper: i64) -> usize {
        let id = self.variables.len();
        let previous = self.index.insert(name.clone(), id);
        assert!(previous.is_none(), "duplicate variable {name}");
        self.variables.push(Variable { name, kind, lower, upper });
        id
    }
}

pub fn arc_var_name(instance: &Instance, arc: ArcId) -> String {
    let a = instance.arc(arc);
    format!("x_{}_{}", a.tail, a.head)
}

pub fn instance_digest(instance: &Instance) -> String {
    let digest = Sha256::digest(render_instance(instance).as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Builds the flow model: arc-cost plus linearised penalty objective, flow
/// conservation (outflow minus inflow is +1 at the source, -1 at the sink),
/// the three linking rows per conflict, and optional MTZ rows.
pub fn export_flow_model(instance: &Instance, sec_mode: SecMode) -> ExportedModel {
    let n = instance.vertex_count() as i64;
    let mut b = Builder { variables: Vec::new(), index: HashMap::new() };
    let x: Vec<usize> =
        (0..instance.arc_count()).map(|a| b.add(arc_var_name(instance, a), VarKind::Binary, 0, 1)).collect();
    let y: Vec<usize> =
        (0..instance.conflict_count()).map(|c| b.add(format!("y_{c}"), VarKind::Binary, 0, 1)).collect();
    let u: Vec<usize> = match sec_mode {
        SecMode::Mtz => (0..instance.vertex_count())
            .map(|v| {
                let upper = if v == instance.source() { 0 } else { n - 1 };
                b.add(format!("u_{v}"), VarKind::Continuous, 0, upper)
            })
            .collect(),
        SecMode::Omit => Vec::new(),
    };
    let one = b.add(CONSTANT_VAR.to_string(), VarKind::Continuous, 1, 1);

    // w x + sum p (2y - x_a - x_b + 1)
    let mut x_coef: Vec<i64> = instance.arcs().iter().map(|a| a.weight as i64).collect();
    let mut objective = Vec::new();
    for c in instance.conflicts() {
        x_coef[c.arc_a] -= c.penalty as i64;
        x_coef[c.arc_b] -= c.penalty as i64;
    }
    objective.extend(x.iter().zip(&x_coef).filter(|(_, &k)| k != 0).map(|(&v, &k)| (v, k)));
    objective.extend(instance.conflicts().iter().zip(&y).map(|(c, &v)| (v, 2 * c.penalty as i64)));
    objective.push((one, instance.total_penalty() as i64));

    let mut rows = Vec::new();
    for v in 0..instance.vertex_count() {
        let mut terms: Vec<(usize, i64)> = instance.out_arcs(v).iter().map(|&a| (x[a], 1)).collect();
        terms.extend(instance.in_arcs(v).iter().map(|&a| (x[a], -1)));
        terms.sort_unstable();
        let rhs = if v == instance.source() {
            1
        } else if v == instance.sink() {
            -1
        } else {
            0
        };
        rows.push(Row { name: format!("flow_{v}"), terms, sense: Sense::Eq, rhs });
    }
    for (id, c) in instance.conflicts().iter().enumerate() {
        let (xa, xb, yc) = (x[c.arc_a], x[c.arc_b], y[id]);
        rows.push(Row {
            name: format!("both_{id}"),
            terms: vec![(yc, 1), (xa, -1), (xb, -1)],
            sense: Sense::Ge,
            rhs: -1,
        });
        rows.push(Row { name: format!("only_a_{id}"), terms: vec![(yc, 1), (xa, -1)], sense: Sense::Le, rhs: 0 });
        rows.push(Row { name: format!("only_b_{id}"), terms: vec![(yc, 1), (xb, -1)], sense: Sense::Le, rhs: 0 });
    }
    if sec_mode == SecMode::Mtz {
        // u_i - u_j + n x_ij <= n - 1; with u_source pinned at 0 this also
        // forbids every arc into the source
        for (id, arc) in instance.arcs().iter().enumerate() {
            rows.push(Row {
                name: format!("mtz_{}_{}", arc.tail, arc.head),
                terms: vec![(u[arc.tail], 1), (u[arc.head], -1), (x[id], n)],
                sense: Sense::Le,
                rhs: n - 1,
            });
        }
    }

    ExportedModel {
        variables: b.variables,
        objective,
        rows,
        sec_mode,
        instance_digest: instance_digest(instance),
        index: b.index,
    }
}

impl ExportedModel {
    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn objective_constant(&self) -> i64 {
        let one = self.index[CONSTANT_VAR];
        self.objective.iter().filter(|(v, _)| *v == one).map(|(_, k)| k).sum()
    }

    /// LP text: header comments, `Minimize`, `Subject To`, `Bounds`,
    /// `Binaries`, `End`. ASCII with LF line endings.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("\\ SP-EDAC flow model\n");
        let _ = writeln!(out, "\\ instance: sha256:{}", self.instance_digest);
        let _ = writeln!(out, "\\ sec_mode: {}", self.sec_mode);
        let _ = writeln!(out, "\\ tool: spedac {}", env!("CARGO_PKG_VERSION"));
        if self.sec_mode == SecMode::Omit {
            out.push_str("\\ WARNING: subtour elimination rows omitted; they must be separated lazily\n");
        }
        out.push_str("Minimize\n");
        self.write_expression(&mut out, "obj", &self.objective);
        out.push('\n');
        out.push_str("Subject To\n");
        for row in &self.rows {
            self.write_expression(&mut out, &row.name, &row.terms);
            let _ = writeln!(out, " {} {}", row.sense.symbol(), row.rhs);
        }
        out.push_str("Bounds\n");
        for v in self.variables.iter().filter(|v| v.kind == VarKind::Continuous) {
            if v.lower == v.upper {
                let _ = writeln!(out, " {} = {}", v.name, v.lower);
            } else {
                let _ = writeln!(out, " {} <= {} <= {}", v.lower, v.name, v.upper);
            }
        }
        out.push_str("Binaries\n");
        for v in self.variables.iter().filter(|v| v.kind == VarKind::Binary) {
            let _ = writeln!(out, " {}", v.name);
        }
        out.push_str("End\n");
        out
    }

    fn write_expression(&self, out: &mut String, label: &str, terms: &[(usize, i64)]) {
        const TERMS_PER_LINE: usize = 8;
        let _ = write!(out, " {label}:");
        if terms.is_empty() {
            let _ = write!(out, " 0 {CONSTANT_VAR}");
        }
        for (i, &(var, coef)) in terms.iter().enumerate() {
            if i > 0 && i % TERMS_PER_LINE == 0 {
                out.push_str("\n   ");
            }
            let sign = if coef < 0 {
                "-"
            } else if i == 0 {
                ""
            } else {
                "+"
            };
            let magnitude = coef.unsigned_abs();
            let name = &self.variables[var].name;
            let term = if magnitude == 1 { name.clone() } else { format!("{magnitude} {name}") };
            if sign.is_empty() {
                let _ = write!(out, " {term}");
            } else {
                let _ = write!(out, " {sign} {term}");
            }
        }
    }
}

/// Values keyed by variable name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment(pub BTreeMap<String, Rational>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct AssignmentParseError {
    pub line: usize,
    pub message: String,
}

impl Assignment {
    pub fn set(&mut self, name: impl Into<String>, value: impl Into<Rational>) {
        self.0.insert(name.into(), value.into());
    }

    pub fn get(&self, name: &str) -> Option<Rational> {
        self.0.get(name).copied()
    }

    /// `name=value` lines; `#` starts a comment. Values are integers,
    /// decimals or fractions `p/q`.
    pub fn parse(text: &str) -> Result<Self, AssignmentParseError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| AssignmentParseError { line: i + 1, message };
            let (name, value) = line.split_once('=').ok_or_else(|| err("expected name=value".into()))?;
            let value = parse_rational(value.trim()).ok_or_else(|| err(format!("bad value {:?}", value.trim())))?;
            values.insert(name.trim().to_string(), value);
        }
        Ok(Assignment(values))
    }

    pub fn render(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let digits = frac.len() as u32;
        let scale = 10i64.checked_pow(digits)?;
        let whole: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().ok()? };
        let part: i64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
        let magnitude = whole.abs().checked_mul(scale)?.checked_add(part)?;
        let numer = if negative { -magnitude } else { magnitude };
        Some(Rational::new(numer, scale))
    } else {
        Rational::from_str(s).ok()
    }
}

/// Full assignment induced by a path: `x` from its arcs, `y` as the
/// conjunction of each pair, `u` as the position along the path (0 for
/// vertices off the path), and `obj_const = 1`.
pub fn induced_assignment(instance: &Instance, path: &PathSolution, sec_mode: SecMode) -> Assignment {
    let mut assignment = Assignment::default();
    let incidence = path.incidence(instance);
    for (a, &x) in incidence.arc_flags.iter().enumerate() {
        assignment.set(arc_var_name(instance, a), i64::from(x));
    }
    for (c, &y) in incidence.penalty_flags.iter().enumerate() {
        assignment.set(format!("y_{c}"), i64::from(y));
    }
    if sec_mode == SecMode::Mtz {
        let mut order = vec![0i64; instance.vertex_count()];
        for (pos, &v) in path.vertices.iter().enumerate() {
            order[v] = pos as i64;
        }
        for (v, pos) in order.into_iter().enumerate() {
            assignment.set(format!("u_{v}"), pos);
        }
    }
    assignment.set(CONSTANT_VAR, 1);
    assignment
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("assignment has no value for variable {0}")]
pub struct MissingVariable(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    Row,
    Bound,
    Integrality,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Row or variable name.
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCheck {
    pub objective: Rational,
    pub violations: Vec<Violation>,
}

impl PointCheck {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violated_rows(&self) -> impl Iterator<Item = &str> {
        self.violations.iter().filter(|v| v.kind == ViolationKind::Row).map(|v| v.name.as_str())
    }
}

/// Evaluates every row, bound and integrality requirement and the objective
/// exactly at `assignment`.
pub fn verify_model_at_point(model: &ExportedModel, assignment: &Assignment) -> Result<PointCheck, MissingVariable> {
    let values: Vec<Rational> = model
        .variables
        .iter()
        .map(|v| assignment.get(&v.name).ok_or_else(|| MissingVariable(v.name.clone())))
        .collect::<Result<_, _>>()?;
    let dot = |terms: &[(usize, i64)]| -> Rational {
        terms.iter().fold(Rational::from_integer(0), |acc, &(v, k)| acc + values[v] * k)
    };

    let mut violations = Vec::new();
    for (var, &value) in model.variables.iter().zip(&values) {
        if value < Rational::from_integer(var.lower) || value > Rational::from_integer(var.upper) {
            violations.push(Violation { kind: ViolationKind::Bound, name: var.name.clone() });
        }
        if var.kind == VarKind::Binary && !value.is_integer() {
            violations.push(Violation { kind: ViolationKind::Integrality, name: var.name.clone() });
        }
    }
    for row in &model.rows {
        if !row.sense.holds(dot(&row.terms), Rational::from_integer(row.rhs)) {
            violations.push(Violation { kind: ViolationKind::Row, name: row.name.clone() });
        }
    }
    Ok(PointCheck { objective: dot(&model.objective), violations })
}

/// One arc of the circuit view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CircuitArc {
    Real(ArcId),
    /// The artificial sink-to-source arc, fixed to 1 with cost 0.
    Closing,
    /// Marks a vertex (never the source or sink) as left out of the circuit.
    SelfLoop(VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitViolation {
    #[error("closing arc missing")]
    NoClosingArc,
    #[error("self-loop on terminal vertex {0}")]
    TerminalSelfLoop(VertexId),
    #[error("vertex {0} is self-looped and also touched by a circuit arc")]
    SelfLoopTouched(VertexId),
    #[error("vertex {vertex} has in-degree {indegree} and out-degree {outdegree}")]
    Degree { vertex: VertexId, indegree: usize, outdegree: usize },
    #[error("selected arcs split into more than one circuit")]
    Disconnected,
}

/// Path-as-circuit view: instance arcs, the closing arc, and one self-loop
/// slot per non-terminal vertex.
#[derive(Debug, Clone)]
pub struct CircuitForm<'a> {
    pub instance: &'a Instance,
    pub self_loop_vertices: Vec<VertexId>,
}

pub fn to_circuit_form(instance: &Instance) -> CircuitForm<'_> {
    let self_loop_vertices =
        (0..instance.vertex_count()).filter(|&v| v != instance.source() && v != instance.sink()).collect();
    CircuitForm { instance, self_loop_vertices }
}

impl CircuitForm<'_> {
    /// Every circuit arc slot: real arcs, the closing arc, then self-loops.
    pub fn arcs(&self) -> Vec<CircuitArc> {
        (0..self.instance.arc_count())
            .map(CircuitArc::Real)
            .chain(std::iter::once(CircuitArc::Closing))
            .chain(self.self_loop_vertices.iter().map(|&v| CircuitArc::SelfLoop(v)))
            .collect()
    }

    /// Closes a path into a circuit, self-looping every vertex it misses.
    pub fn close_path(&self, path: &PathSolution) -> Vec<CircuitArc> {
        let mut on_path = vec![false; self.instance.vertex_count()];
        for &v in &path.vertices {
            on_path[v] = true;
        }
        let mut selection: Vec<CircuitArc> = path.arc_indices.iter().map(|&a| CircuitArc::Real(a)).collect();
        selection.push(CircuitArc::Closing);
        selection.extend(self.self_loop_vertices.iter().filter(|&&v| !on_path[v]).map(|&v| CircuitArc::SelfLoop(v)));
        selection.sort_unstable();
        selection
    }

    /// Whether `selection` is one circuit through the closing arc covering
    /// exactly the vertices without a self-loop.
    pub fn check(&self, selection: &[CircuitArc]) -> Result<(), CircuitViolation> {
        let inst = self.instance;
        let n = inst.vertex_count();
        let (s, t) = (inst.source(), inst.sink());
        let mut looped = vec![false; n];
        let mut succ: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        let mut indegree = vec![0usize; n];
        let mut closing = false;
        for &arc in selection {
            let (tail, head) = match arc {
                CircuitArc::Real(a) => (inst.arc(a).tail, inst.arc(a).head),
                CircuitArc::Closing => {
                    closing = true;
                    (t, s)
                }
                CircuitArc::SelfLoop(v) => {
                    if v == s || v == t {
                        return Err(CircuitViolation::TerminalSelfLoop(v));
                    }
                    looped[v] = true;
                    continue;
                }
            };
            succ[tail].push(head);
            indegree[head] += 1;
        }
        if !closing {
            return Err(CircuitViolation::NoClosingArc);
        }
        for v in 0..n {
            let (i, o) = (indegree[v], succ[v].len());
            if looped[v] {
                if i + o > 0 {
                    return Err(CircuitViolation::SelfLoopTouched(v));
                }
            } else if i != 1 || o != 1 {
                return Err(CircuitViolation::Degree { vertex: v, indegree: i, outdegree: o });
            }
        }
        let covered = looped.iter().filter(|&&l| !l).count();
        let mut length = 1;
        let mut at = succ[s][0];
        while at != s {
            at = succ[at][0];
            length += 1;
        }
        if length == covered {
            Ok(())
        } else {
            Err(CircuitViolation::Disconnected)
        }
    }

    /// Drops the closing arc and the self-loops of a valid circuit, leaving
    /// the arc flags of the underlying path.
    pub fn decode(&self, selection: &[CircuitArc]) -> Result<Vec<bool>, CircuitViolation> {
        self.check(selection)?;
        let mut flags = vec![false; self.instance.arc_count()];
        for &arc in selection {
            if let CircuitArc::Real(a) = arc {
                flags[a] = true;
            }
        }
        Ok(flags)
    }
}
