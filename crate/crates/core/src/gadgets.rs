//! Boolean cells and the conditional (multiplexer) embedding, plus NOT/AND/OR
//! gates built on top of it.
//!
//! A boolean cell anchored at `b` is read through `c = f0(b)`: the cell holds
//! true when `f1(c) = c` and false when `f1(c) = f1(b)`.
//!
//! The conditional core uses a fixed numbering:
//!
//! ```text
//!   e=0 --0--> p=1 --0--> m=3
//!     \          \--1--> n=4
//!      \--1--> b=2 --0--> c=5
//!                 \--1--> d=6
//! ```
//!
//! Running `0[011 := 10]` then `0[001 := 00]` leaves `m` (true) or `n`
//! (false) at the end of the traversal path `1,0,1,0` from `e`. Every edge not
//! drawn above is a don't-care and may be filled from a seed.

use std::fmt::{self, Write as _};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{GraphState, Label, NodeId, Path};
use crate::op::{Composition, PrimitiveOp};

pub const COND_PROGRAM: [&str; 2] = ["0[011 := 10]", "0[001 := 00]"];

/// Traversal-order readout path `1,0,1,0`, i.e. `g0(g1(g0(g1(e))))`.
pub fn cond_readout_path() -> Path {
    Path::from_bits(&[1, 0, 1, 0])
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("anchor {anchor} has f0 = f1, so true and false cannot be told apart")]
    AmbiguousCell { anchor: NodeId },
    #[error("anchor {anchor} is outside a graph of {nodes} nodes")]
    AnchorOutOfRange { anchor: NodeId, nodes: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TruthValue {
    True,
    False,
    Invalid,
}

impl TruthValue {
    pub fn as_bool(self) -> Option<bool> {
        match self {
            TruthValue::True => Some(true),
            TruthValue::False => Some(false),
            TruthValue::Invalid => None,
        }
    }
}

impl From<bool> for TruthValue {
    fn from(b: bool) -> Self {
        if b {
            TruthValue::True
        } else {
            TruthValue::False
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TruthValue::True => "T",
            TruthValue::False => "F",
            TruthValue::Invalid => "invalid",
        })
    }
}

/// A boolean cell anchored at a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoolCell {
    pub anchor: NodeId,
}

impl BoolCell {
    pub fn read(&self, s: &GraphState) -> TruthValue {
        read_bool(s, self.anchor)
    }
}

pub fn read_bool(s: &GraphState, anchor: NodeId) -> TruthValue {
    let c = s.succ(anchor, Label::Zero);
    let d = s.succ(anchor, Label::One);
    if c == d {
        return TruthValue::Invalid;
    }
    let probe = s.succ(c, Label::One);
    if probe == c {
        TruthValue::True
    } else if probe == d {
        TruthValue::False
    } else {
        TruthValue::Invalid
    }
}

/// Sets the single edge `(f0(anchor), 1)` so the cell reads `value`.
pub fn write_bool(s: &GraphState, anchor: NodeId, value: bool) -> Result<GraphState, GadgetError> {
    if !s.contains(anchor) {
        return Err(GadgetError::AnchorOutOfRange {
            anchor,
            nodes: s.len(),
        });
    }
    let c = s.succ(anchor, Label::Zero);
    let d = s.succ(anchor, Label::One);
    if c == d {
        return Err(GadgetError::AmbiguousCell { anchor });
    }
    let target = if value { c } else { d };
    let mut next = s.clone();
    next.set_succ(c, Label::One, target);
    Ok(next)
}

/// Node roles of the conditional core.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CondLayout {
    pub e: NodeId,
    pub p: NodeId,
    pub b: NodeId,
    pub c: NodeId,
    pub d: NodeId,
    pub m: NodeId,
    pub n: NodeId,
}

impl CondLayout {
    pub const FIXED: CondLayout = CondLayout {
        e: NodeId(0),
        p: NodeId(1),
        b: NodeId(2),
        m: NodeId(3),
        n: NodeId(4),
        c: NodeId(5),
        d: NodeId(6),
    };

    fn nodes(&self) -> [NodeId; 7] {
        [self.e, self.p, self.b, self.c, self.d, self.m, self.n]
    }

    /// Whether `s` realises this layout with pairwise distinct roles.
    pub fn holds_in(&self, s: &GraphState) -> bool {
        let nodes = self.nodes();
        let distinct = nodes
            .iter()
            .enumerate()
            .all(|(i, a)| nodes[i + 1..].iter().all(|b| a != b));
        distinct
            && nodes.iter().all(|&x| s.contains(x))
            && s.succ(self.e, Label::Zero) == self.p
            && s.succ(self.e, Label::One) == self.b
            && s.succ(self.p, Label::Zero) == self.m
            && s.succ(self.p, Label::One) == self.n
            && s.succ(self.b, Label::Zero) == self.c
            && s.succ(self.b, Label::One) == self.d
    }
}

/// Partially specified state whose remaining edges are filled from a seed.
///
/// Seed 0 fills every free edge with a self-loop. Any other seed draws each
/// free edge uniformly, except that slots listed in `avoid` never receive the
/// listed value. A fresh fixture therefore never already holds an edge the
/// program is about to write.
#[derive(Debug, Clone)]
struct FixtureSpec {
    edges: Vec<[Option<usize>; 2]>,
    avoid: Vec<(usize, Label, usize)>,
}

impl FixtureSpec {
    fn new(n: usize) -> Self {
        FixtureSpec {
            edges: vec![[None, None]; n],
            avoid: Vec::new(),
        }
    }

    fn set(&mut self, node: usize, label: Label, target: usize) -> &mut Self {
        self.edges[node][label.index()] = Some(target);
        self
    }

    fn avoid(&mut self, node: usize, label: Label, value: usize) -> &mut Self {
        self.avoid.push((node, label, value));
        self
    }

    fn fill(&self, seed: u64) -> GraphState {
        let n = self.edges.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tables = [Vec::with_capacity(n), Vec::with_capacity(n)];
        for (node, slots) in self.edges.iter().enumerate() {
            for label in Label::ALL {
                let target = match slots[label.index()] {
                    Some(t) => t,
                    None if seed == 0 => node,
                    None => {
                        let banned = self
                            .avoid
                            .iter()
                            .find(|(x, l, _)| *x == node && *l == label)
                            .map(|&(_, _, v)| v);
                        loop {
                            let t = rng.gen_range(0..n);
                            if Some(t) != banned {
                                break t;
                            }
                        }
                    }
                };
                tables[label.index()].push(NodeId(target));
            }
        }
        let [succ0, succ1] = tables;
        GraphState::new(n, succ0, succ1).expect("fixture edges stay inside the node range")
    }
}

/// The conditional core on nodes 0..7 with the boolean `value` at `b`.
fn cond_core(n: usize, value: bool) -> FixtureSpec {
    let l = CondLayout::FIXED;
    let mut spec = FixtureSpec::new(n);
    spec.set(l.e.0, Label::Zero, l.p.0)
        .set(l.e.0, Label::One, l.b.0)
        .set(l.p.0, Label::Zero, l.m.0)
        .set(l.p.0, Label::One, l.n.0)
        .set(l.b.0, Label::Zero, l.c.0)
        .set(l.b.0, Label::One, l.d.0)
        .set(l.c.0, Label::One, if value { l.c.0 } else { l.d.0 })
        // the two edges the conditional program writes
        .avoid(l.d.0, Label::Zero, l.n.0)
        .avoid(l.c.0, Label::Zero, l.m.0);
    spec
}

pub fn build_cond_fixture(value: bool, dontcare_seed: u64) -> (GraphState, CondLayout) {
    (cond_core(7, value).fill(dontcare_seed), CondLayout::FIXED)
}

pub fn cond_program() -> Composition {
    COND_PROGRAM
        .iter()
        .map(|t| t.parse::<PrimitiveOp>().expect("built-in op parses"))
        .collect()
}

pub fn read_cond_result(s: &GraphState, layout: &CondLayout) -> NodeId {
    s.resolve(layout.e, &cond_readout_path())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    Not,
    And,
    Or,
    Cond,
}

impl GateKind {
    pub const ALL: [GateKind; 4] = [GateKind::Not, GateKind::And, GateKind::Or, GateKind::Cond];

    pub fn arity(self) -> usize {
        match self {
            GateKind::Not | GateKind::Cond => 1,
            GateKind::And | GateKind::Or => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Not => "not",
            GateKind::And => "and",
            GateKind::Or => "or",
            GateKind::Cond => "cond",
        }
    }
}

impl std::str::FromStr for GateKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown gate `{s}` (expected not, and, or, cond)"))
    }
}

/// What a gadget's readout should produce for one input row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expected {
    Bool(bool),
    Node(NodeId),
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expected::Bool(b) => write!(f, "{}", TruthValue::from(*b)),
            Expected::Node(n) => write!(f, "node {n}"),
        }
    }
}

/// A built fixture: the state, where the inputs live, and where to look.
#[derive(Debug, Clone)]
pub struct GateFixture {
    pub state: GraphState,
    pub inputs: Vec<BoolCell>,
}

// Payload cells for the gates hang off m and n on fresh nodes.
const M_CELL: (usize, usize) = (7, 8);
const N_CELL: (usize, usize) = (9, 10);
const GATE_NODES: usize = 11;

/// The value placed in one payload cell.
#[derive(Debug, Clone, Copy)]
enum Payload {
    Const(bool),
    Input(usize),
}

/// A gate expressed as a conditional over boolean-cell payloads.
///
/// Input 0 always sits at `b`. The result is read at the node reached from
/// `readout_origin` along `readout_path`: a boolean cell for the gates, the
/// payload node itself for [`GateKind::Cond`].
#[derive(Debug, Clone)]
pub struct GateGadget {
    pub kind: GateKind,
    pub program: Composition,
    pub readout_origin: NodeId,
    pub readout_path: Path,
}

impl GateGadget {
    fn payloads(&self) -> Option<(Payload, Payload)> {
        use Payload::*;
        match self.kind {
            GateKind::Not => Some((Const(false), Const(true))),
            GateKind::And => Some((Input(1), Const(false))),
            GateKind::Or => Some((Const(true), Input(1))),
            GateKind::Cond => None,
        }
    }

    pub fn arity(&self) -> usize {
        self.kind.arity()
    }

    /// All input rows in ascending binary order, first input most significant.
    pub fn rows(&self) -> Vec<Vec<bool>> {
        let k = self.arity();
        (0..1usize << k)
            .map(|bits| (0..k).map(|i| bits >> (k - 1 - i) & 1 == 1).collect())
            .collect()
    }

    pub fn expected(&self, inputs: &[bool]) -> Expected {
        match self.kind {
            GateKind::Not => Expected::Bool(!inputs[0]),
            GateKind::And => Expected::Bool(inputs[0] && inputs[1]),
            GateKind::Or => Expected::Bool(inputs[0] || inputs[1]),
            GateKind::Cond => Expected::Node(if inputs[0] {
                CondLayout::FIXED.m
            } else {
                CondLayout::FIXED.n
            }),
        }
    }

    pub fn build_fixture(&self, inputs: &[bool], seed: u64) -> GateFixture {
        assert_eq!(inputs.len(), self.arity(), "wrong number of inputs for {:?}", self.kind);
        let l = CondLayout::FIXED;
        let Some((on_true, on_false)) = self.payloads() else {
            let (state, _) = build_cond_fixture(inputs[0], seed);
            return GateFixture {
                state,
                inputs: vec![BoolCell { anchor: l.b }],
            };
        };

        let mut spec = cond_core(GATE_NODES, inputs[0]);
        let mut cells = vec![BoolCell { anchor: l.b }];
        for (anchor, (c, d), payload) in [(l.m, M_CELL, on_true), (l.n, N_CELL, on_false)] {
            let value = match payload {
                Payload::Const(v) => v,
                Payload::Input(i) => {
                    cells.push(BoolCell { anchor });
                    inputs[i]
                }
            };
            spec.set(anchor.0, Label::Zero, c)
                .set(anchor.0, Label::One, d)
                .set(c, Label::One, if value { c } else { d });
        }
        GateFixture {
            state: spec.fill(seed),
            inputs: cells,
        }
    }

    /// Reads the gadget result from a post-program state.
    pub fn read(&self, s: &GraphState) -> Outcome {
        let node = s.resolve(self.readout_origin, &self.readout_path);
        match self.kind {
            GateKind::Cond => Outcome::Node(node),
            _ => Outcome::Bool(read_bool(s, node)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Bool(TruthValue),
    Node(NodeId),
}

impl Outcome {
    pub fn matches(&self, expected: &Expected) -> bool {
        match (self, expected) {
            (Outcome::Bool(v), Expected::Bool(b)) => v.as_bool() == Some(*b),
            (Outcome::Node(n), Expected::Node(m)) => n == m,
            _ => false,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Bool(v) => write!(f, "{v}"),
            Outcome::Node(n) => write!(f, "node {n}"),
        }
    }
}

pub fn build_gate(kind: GateKind) -> GateGadget {
    GateGadget {
        kind,
        program: cond_program(),
        readout_origin: CondLayout::FIXED.e,
        readout_path: cond_readout_path(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowFailure {
    pub seed: u64,
    pub got: String,
    /// Canonical text of the fixture that failed.
    pub fixture: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowReport {
    pub inputs: Vec<bool>,
    pub expected: String,
    pub fills: usize,
    pub failures: Vec<RowFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateReport {
    pub kind: GateKind,
    pub rows: Vec<RowReport>,
}

impl GateReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.failures.is_empty())
    }

    pub fn cases_checked(&self) -> usize {
        self.rows.iter().map(|r| r.fills).sum()
    }

    /// One line per row, failing rows followed by the first failing fixture,
    /// then `PASS` or `FAIL`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let inputs: Vec<&str> = row.inputs.iter().map(|&b| if b { "1" } else { "0" }).collect();
            let status = if row.failures.is_empty() { "ok" } else { "FAILED" };
            let _ = writeln!(
                out,
                "{} inputs={} expect={} fills={} failures={} {}",
                self.kind.name(),
                inputs.join(","),
                row.expected,
                row.fills,
                row.failures.len(),
                status
            );
            if let Some(f) = row.failures.first() {
                let _ = writeln!(out, "# seed {} got {}", f.seed, f.got);
                out.push_str(&f.fixture);
            }
        }
        out.push_str(if self.passed() { "PASS\n" } else { "FAIL\n" });
        out
    }
}

/// Don't-care seeds used for `fills` random fills. Zero fills means the
/// self-loop fill only.
pub fn fill_seeds(fills: usize) -> Vec<u64> {
    if fills == 0 {
        vec![0]
    } else {
        (1..=fills as u64).collect()
    }
}

/// Runs every input row of `g` against `seeds` random don't-care fills.
pub fn verify_gate(g: &GateGadget, seeds: usize) -> GateReport {
    let seed_list = fill_seeds(seeds);
    let rows = g
        .rows()
        .into_iter()
        .map(|inputs| {
            let expected = g.expected(&inputs);
            let failures = seed_list
                .iter()
                .filter_map(|&seed| {
                    let fixture = g.build_fixture(&inputs, seed);
                    let got = match g.program.apply(&fixture.state) {
                        Ok(post) => {
                            let got = g.read(&post);
                            if got.matches(&expected) {
                                return None;
                            }
                            got.to_string()
                        }
                        Err(e) => e.to_string(),
                    };
                    Some(RowFailure {
                        seed,
                        got,
                        fixture: fixture.state.encode(),
                    })
                })
                .collect();
            RowReport {
                inputs,
                expected: expected.to_string(),
                fills: seed_list.len(),
                failures,
            }
        })
        .collect();
    GateReport { kind: g.kind, rows }
}
