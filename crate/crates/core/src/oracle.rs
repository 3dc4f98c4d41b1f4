//! Brute-force checks of the machine's semantics on small, fully enumerable
//! instances.
//!
//! Nothing here calls [`GraphState::resolve`] or the op engine's endpoint
//! logic. States are read as plain `[f0, f1]` tables and label strings are
//! evaluated in written order, innermost (rightmost) symbol first. Ops reach
//! the engine only through their printed text, so a disagreement points at
//! either the parser or the rewrite itself.

use std::collections::HashSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{GraphState, Label};
use crate::op::{Composition, PrimitiveOp};

pub const MAX_EXHAUSTIVE_NODES: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("exhaustive enumeration supports 1..={MAX_EXHAUSTIVE_NODES} nodes, got {n}")]
    BoundsExceeded { n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepBounds {
    pub n: usize,
    /// Maximum written left-hand string length, including the assigned label.
    pub max_target_len: usize,
    pub max_source_len: usize,
}

impl SweepBounds {
    pub fn new(n: usize) -> Result<Self, OracleError> {
        Self::with_lengths(n, 3, 3)
    }

    pub fn with_lengths(n: usize, max_target_len: usize, max_source_len: usize) -> Result<Self, OracleError> {
        if n == 0 || n > MAX_EXHAUSTIVE_NODES {
            return Err(OracleError::BoundsExceeded { n });
        }
        Ok(SweepBounds {
            n,
            max_target_len: max_target_len.max(1),
            max_source_len,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub state: String,
    pub op: String,
    pub equation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    pub check: String,
    pub cases_checked: usize,
    /// Cases where a one-directional claim's hypothesis held.
    pub antecedent_cases: Option<usize>,
    pub violations: Vec<Violation>,
    /// Informational findings that are not failures.
    pub notes: Vec<String>,
    /// `case<TAB>status` lines, filled only when case logging is requested.
    pub case_log: Vec<String>,
}

impl Report {
    fn named(check: &str) -> Self {
        Report {
            check: check.to_string(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.antecedent_cases.is_none_or(|k| k > 0)
    }

    /// Sums counts and concatenates findings; the result does not depend on
    /// merge order beyond the order of listed findings.
    pub fn merge(&mut self, other: Report) {
        self.cases_checked += other.cases_checked;
        self.antecedent_cases = match (self.antecedent_cases, other.antecedent_cases) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(0) + b.unwrap_or(0)),
        };
        self.violations.extend(other.violations);
        self.notes.extend(other.notes);
        self.case_log.extend(other.case_log);
    }

    fn record(&mut self, log: bool, case: impl FnOnce() -> String, violation: Option<Violation>) {
        self.cases_checked += 1;
        if log {
            let status = if violation.is_some() { "FAIL" } else { "ok" };
            self.case_log.push(format!("{}\t{status}", case()));
        }
        if let Some(v) = violation {
            self.violations.push(v);
        }
    }

    pub fn render_dump(&self) -> String {
        self.case_log.iter().map(|l| format!("{l}\n")).collect()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: cases={}", self.check, self.cases_checked)?;
        if let Some(k) = self.antecedent_cases {
            write!(f, " antecedent={k}")?;
        }
        writeln!(f, " violations={}", self.violations.len())?;
        for v in self.violations.iter().take(10) {
            writeln!(f, "  violation: {} ({})", v.op, v.equation)?;
            for line in v.state.lines() {
                writeln!(f, "    {line}")?;
            }
        }
        if self.violations.len() > 10 {
            writeln!(f, "  ... {} more", self.violations.len() - 10)?;
        }
        for note in &self.notes {
            writeln!(f, "  note: {note}")?;
        }
        writeln!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Plain successor tables: `maps[label][node]`.
type Maps = [Vec<usize>; 2];

fn maps_of(s: &GraphState) -> Maps {
    Label::ALL.map(|l| s.table(l).iter().map(|x| x.index()).collect())
}

/// `f_{w1}(f_{w2}(...f_{wk}(e)...))` for the written string `w1 w2 ... wk`.
fn eval_written(maps: &Maps, e: usize, written: &[u8]) -> usize {
    let mut x = e;
    for &w in written.iter().rev() {
        x = maps[w as usize][x];
    }
    x
}

/// An op in the notation's own terms: `origin[lhs := rhs]`, strings as written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WrittenOp {
    pub origin: usize,
    pub lhs: Vec<u8>,
    pub rhs: Vec<u8>,
}

impl WrittenOp {
    fn bits(b: &[u8]) -> String {
        b.iter().map(|&x| if x == 0 { '0' } else { '1' }).collect()
    }

    pub fn text(&self) -> String {
        if self.rhs.is_empty() {
            format!("{}[{} :=]", self.origin, Self::bits(&self.lhs))
        } else {
            format!("{}[{} := {}]", self.origin, Self::bits(&self.lhs), Self::bits(&self.rhs))
        }
    }

    /// The engine's op, obtained by parsing [`WrittenOp::text`].
    pub fn to_op(&self) -> PrimitiveOp {
        self.text().parse().expect("enumerated op text parses")
    }

    fn label(&self) -> usize {
        self.lhs[0] as usize
    }

    /// `(b, a)` as defined by the notation, evaluated on `maps`.
    fn endpoints(&self, maps: &Maps) -> (usize, usize) {
        (
            eval_written(maps, self.origin, &self.lhs[1..]),
            eval_written(maps, self.origin, &self.rhs),
        )
    }
}

/// All `(n^n)^2` states, lexicographic on `succ0` then `succ1`.
pub fn enumerate_states(n: usize) -> Result<Vec<GraphState>, OracleError> {
    if n == 0 || n > MAX_EXHAUSTIVE_NODES {
        return Err(OracleError::BoundsExceeded { n });
    }
    let tables = all_tuples(n, n);
    let mut out = Vec::with_capacity(tables.len() * tables.len());
    for s0 in &tables {
        for s1 in &tables {
            out.push(GraphState::from_indices(n, s0, s1).expect("enumerated entries are in range"));
        }
    }
    Ok(out)
}

/// All length-`len` tuples over `0..base`, first position most significant.
fn all_tuples(base: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..base).map(move |d| {
                    let mut t = prefix.clone();
                    t.push(d);
                    t
                })
            })
            .collect();
    }
    out
}

fn bit_strings(min_len: usize, max_len: usize) -> Vec<Vec<u8>> {
    (min_len..=max_len)
        .flat_map(|len| {
            all_tuples(2, len)
                .into_iter()
                .map(|t| t.into_iter().map(|x| x as u8).collect())
        })
        .collect()
}

/// Every op within `bounds`: origin, then left string by length and value,
/// then right string by length and value.
pub fn enumerate_written_ops(bounds: &SweepBounds) -> Vec<WrittenOp> {
    let lhs_all = bit_strings(1, bounds.max_target_len);
    let rhs_all = bit_strings(0, bounds.max_source_len);
    let mut out = Vec::with_capacity(bounds.n * lhs_all.len() * rhs_all.len());
    for origin in 0..bounds.n {
        for lhs in &lhs_all {
            for rhs in &rhs_all {
                out.push(WrittenOp {
                    origin,
                    lhs: lhs.clone(),
                    rhs: rhs.clone(),
                });
            }
        }
    }
    out
}

pub fn enumerate_ops(bounds: &SweepBounds) -> Vec<PrimitiveOp> {
    enumerate_written_ops(bounds).iter().map(WrittenOp::to_op).collect()
}

/// The three postcondition equations, checked on raw tables. Returns the
/// first equation that fails.
fn postcondition_violation(op: &WrittenOp, before: &Maps, after: &Maps) -> Option<String> {
    let (b, a) = op.endpoints(before);
    let b0 = op.label();
    if after[b0][b] != a {
        return Some(format!("g_{b0}(b) = a: expected {a} at ({b}, {b0}), found {}", after[b0][b]));
    }
    let other = 1 - b0;
    if let Some(x) = (0..before[0].len()).find(|&x| after[other][x] != before[other][x]) {
        return Some(format!("g_{other} = f_{other}: differs at node {x}"));
    }
    if let Some(x) = (0..before[0].len()).find(|&x| x != b && after[b0][x] != before[b0][x]) {
        return Some(format!("g_{b0}(x) = f_{b0}(x) for x != b: differs at node {x}"));
    }
    None
}

pub type ApplyFn<'a> = &'a dyn Fn(&GraphState, &PrimitiveOp) -> GraphState;
pub type FixedFn<'a> = &'a dyn Fn(&GraphState, &PrimitiveOp) -> bool;

fn engine_apply(s: &GraphState, op: &PrimitiveOp) -> GraphState {
    op.apply(s).expect("enumerated origins are in range")
}

fn engine_fixed(s: &GraphState, op: &PrimitiveOp) -> bool {
    op.is_fixed(s).expect("enumerated origins are in range")
}

fn case_id(s: &GraphState, op: &WrittenOp) -> String {
    format!("{:016x} {}", s.digest(), op.text())
}

fn check_postconditions_on(
    report: &mut Report,
    states: &[GraphState],
    ops: &[WrittenOp],
    apply: ApplyFn,
    log: bool,
) {
    for s in states {
        let before = maps_of(s);
        for wop in ops {
            let op = wop.to_op();
            let after = maps_of(&apply(s, &op));
            let violation = postcondition_violation(wop, &before, &after).map(|equation| Violation {
                state: s.encode(),
                op: wop.text(),
                equation,
            });
            report.record(log, || case_id(s, wop), violation);
        }
    }
}

/// Every enumerated (state, op) pair satisfies the three postcondition
/// equations.
pub fn check_postconditions(bounds: &SweepBounds) -> Report {
    check_postconditions_with(bounds, &engine_apply, false)
}

pub fn check_postconditions_with(bounds: &SweepBounds, apply: ApplyFn, log: bool) -> Report {
    let mut report = Report::named(&format!("postconditions n={}", bounds.n));
    let states = enumerate_states(bounds.n).expect("bounds are validated");
    let ops = enumerate_written_ops(bounds);
    check_postconditions_on(&mut report, &states, &ops, apply, log);
    report
}

/// Uniform state on `n` nodes.
pub fn random_state<R: Rng>(rng: &mut R, n: usize) -> GraphState {
    let mut table = || (0..n).map(|_| rng.gen_range(0..n)).collect::<Vec<_>>();
    let (s0, s1) = (table(), table());
    GraphState::from_indices(n, &s0, &s1).expect("random entries are in range")
}

pub fn random_written_op<R: Rng>(rng: &mut R, n: usize, max_len: usize) -> WrittenOp {
    let lhs_len = rng.gen_range(1..=max_len.max(1));
    let rhs_len = rng.gen_range(0..=max_len);
    WrittenOp {
        origin: rng.gen_range(0..n),
        lhs: (0..lhs_len).map(|_| rng.gen_range(0..2u8)).collect(),
        rhs: (0..rhs_len).map(|_| rng.gen_range(0..2u8)).collect(),
    }
}

/// Postconditions on `cases` random pairs with `1..=max_n` nodes.
pub fn check_postconditions_random(cases: usize, max_n: usize, max_len: usize, seed: u64) -> Report {
    let mut report = Report::named(&format!("postconditions random n<={max_n}"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cases {
        let n = rng.gen_range(1..=max_n.max(1));
        let s = random_state(&mut rng, n);
        let wop = random_written_op(&mut rng, n, max_len);
        check_postconditions_on(&mut report, std::slice::from_ref(&s), std::slice::from_ref(&wop), &engine_apply, false);
    }
    report
}

fn check_fixed_iff_on(
    report: &mut Report,
    states: &[GraphState],
    ops: &[WrittenOp],
    fixed: FixedFn,
    log: bool,
) {
    for s in states {
        let maps = maps_of(s);
        for wop in ops {
            let op = wop.to_op();
            let predicate = fixed(s, &op);
            let unchanged = engine_apply(s, &op) == *s;
            let (b, a) = wop.endpoints(&maps);
            let by_equation = maps[wop.label()][b] == a;
            let violation = if predicate != unchanged {
                Some(format!("is_fixed = {predicate} but apply changes state = {}", !unchanged))
            } else if predicate != by_equation {
                Some(format!("is_fixed = {predicate} but f_b0(b) = a is {by_equation}"))
            } else {
                None
            }
            .map(|equation| Violation {
                state: s.encode(),
                op: wop.text(),
                equation,
            });
            report.record(log, || case_id(s, wop), violation);
        }
    }
}

/// The per-op fixed-point predicate agrees with "applying changes nothing"
/// and with the closed-form equation `f_b0(b) = a`.
pub fn check_fixed_point_iff(bounds: &SweepBounds) -> Report {
    check_fixed_point_iff_with(bounds, &engine_fixed, false)
}

pub fn check_fixed_point_iff_with(bounds: &SweepBounds, fixed: FixedFn, log: bool) -> Report {
    let mut report = Report::named(&format!("fixed-point iff n={}", bounds.n));
    let states = enumerate_states(bounds.n).expect("bounds are validated");
    let ops = enumerate_written_ops(bounds);
    check_fixed_iff_on(&mut report, &states, &ops, fixed, log);
    report
}

/// Fixed-point iff on `cases` random (state, op) pairs of exactly `n` nodes.
pub fn check_fixed_point_iff_random(cases: usize, n: usize, max_len: usize, seed: u64) -> Report {
    let mut report = Report::named(&format!("fixed-point iff random n={n}"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cases {
        let s = random_state(&mut rng, n);
        let wop = random_written_op(&mut rng, n, max_len);
        check_fixed_iff_on(&mut report, std::slice::from_ref(&s), std::slice::from_ref(&wop), &engine_fixed, false);
    }
    report
}

/// For `programs` random compositions of 1 to 3 enumerated ops, each tried on
/// one random state and on the all-self-loop state: whenever every op is
/// individually fixed, the whole composition must be fixed.
pub fn check_fixed_construction(bounds: &SweepBounds, programs: usize, seed: u64) -> Report {
    check_fixed_construction_with(bounds, programs, seed, false)
}

pub fn check_fixed_construction_with(bounds: &SweepBounds, programs: usize, seed: u64, log: bool) -> Report {
    let mut report = Report::named(&format!("fixed-point construction n={}", bounds.n));
    report.antecedent_cases = Some(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states = enumerate_states(bounds.n).expect("bounds are validated");
    let ops = enumerate_written_ops(bounds);
    let loops = GraphState::self_loops(bounds.n).expect("n >= 1");

    for i in 0..programs {
        let len = rng.gen_range(1..=3);
        let chosen: Vec<&WrittenOp> = (0..len).map(|_| ops.choose(&mut rng).expect("ops nonempty")).collect();
        let random = states.choose(&mut rng).expect("states nonempty").clone();
        for s in [random, loops.clone()] {
            let maps = maps_of(&s);
            let all_fixed = chosen.iter().all(|w| {
                let (b, a) = w.endpoints(&maps);
                maps[w.label()][b] == a
            });
            let comp: Composition = chosen.iter().map(|w| w.to_op()).collect();
            let comp_fixed = comp.apply(&s).expect("origins in range") == s;
            if all_fixed {
                *report.antecedent_cases.as_mut().expect("set above") += 1;
            }
            let violation = (all_fixed && !comp_fixed).then(|| Violation {
                state: s.encode(),
                op: chosen.iter().map(|w| w.text()).collect::<Vec<_>>().join("; "),
                equation: "every op fixed but composition moves the state".into(),
            });
            report.record(log, || format!("program {i} @{:016x}", s.digest()), violation);
        }
    }
    report
}

/// A state fixed by a composition although one of its ops, applied alone,
/// would move it. Searches two-op programs at the given bounds.
pub fn find_converse_counterexample(bounds: &SweepBounds) -> Option<(GraphState, Composition)> {
    let states = enumerate_states(bounds.n).ok()?;
    let ops = enumerate_written_ops(bounds);
    for s in &states {
        let maps = maps_of(s);
        let movers: Vec<&WrittenOp> = ops
            .iter()
            .filter(|w| {
                let (b, a) = w.endpoints(&maps);
                maps[w.label()][b] != a
            })
            .collect();
        for first in &movers {
            for second in &ops {
                let comp: Composition = [first.to_op(), second.to_op()].into_iter().collect();
                if comp.apply(s).ok()? == *s {
                    return Some((s.clone(), comp));
                }
            }
        }
    }
    None
}

/// Runs every check at `bounds` and returns the reports in a fixed order.
pub fn run_all(bounds: &SweepBounds, programs: usize, seed: u64, log: bool) -> Vec<Report> {
    let mut construction = check_fixed_construction_with(bounds, programs, seed, log);
    let small = SweepBounds::with_lengths(bounds.n, 2, 2).expect("n already validated");
    if let Some((s, comp)) = find_converse_counterexample(&small) {
        let ops: Vec<String> = comp.ops.iter().map(|o| o.to_string()).collect();
        construction.notes.push(format!(
            "converse does not hold: [{}] fixes state {:016x} though its first op alone does not",
            ops.join("; "),
            s.digest()
        ));
    }
    vec![
        check_postconditions_with(bounds, &engine_apply, log),
        check_fixed_point_iff_with(bounds, &engine_fixed, log),
        construction,
    ]
}

/// Distinct digests among `states`; equals `states.len()` when no two
/// states coincide.
pub fn distinct_digests(states: &[GraphState]) -> usize {
    states.iter().map(GraphState::digest).collect::<HashSet<_>>().len()
}
