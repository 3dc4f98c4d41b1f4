//! Two-successor graphs: every node has exactly one out-edge labeled `0`
//! and one labeled `1`, so a state is just a pair of total maps on `0..n`.
//!
//! Paths are stored in traversal order. The written notation `w1 w2 ... wk`
//! composes right to left (`f_w1(f_w2(...f_wk(e)...))`), so [`Path::from_written`]
//! reverses it and [`Path::to_written`] reverses it back.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Index of a node in `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(i)
    }
}

/// Edge label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Zero,
    One,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Zero, Label::One];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Label::Zero => 0,
            Label::One => 1,
        }
    }

    pub fn other(self) -> Label {
        match self {
            Label::Zero => Label::One,
            Label::One => Label::Zero,
        }
    }

    pub fn from_char(c: char) -> Option<Label> {
        match c {
            '0' => Some(Label::Zero),
            '1' => Some(Label::One),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Label::Zero => '0',
            Label::One => '1',
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A sequence of labels in traversal order (first element is followed first).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Path(pub Vec<Label>);

impl Path {
    pub fn empty() -> Self {
        Path(Vec::new())
    }

    pub fn new(steps: impl Into<Vec<Label>>) -> Self {
        Path(steps.into())
    }

    /// Builds a path from `0`/`1` digits given in traversal order.
    pub fn from_bits(bits: &[u8]) -> Self {
        Path(
            bits.iter()
                .map(|&b| if b == 0 { Label::Zero } else { Label::One })
                .collect(),
        )
    }

    /// Parses a written label string, reversing it into traversal order.
    /// Returns `None` on any character other than `0` or `1`.
    pub fn from_written(s: &str) -> Option<Self> {
        let mut steps = s.chars().map(Label::from_char).collect::<Option<Vec<_>>>()?;
        steps.reverse();
        Some(Path(steps))
    }

    /// Written form: the traversal order reversed.
    pub fn to_written(&self) -> String {
        self.0.iter().rev().map(|l| l.as_char()).collect()
    }

    pub fn steps(&self) -> &[Label] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Traversal-order concatenation: follow `self`, then `other`.
    pub fn then(&self, other: &Path) -> Path {
        let mut steps = self.0.clone();
        steps.extend_from_slice(&other.0);
        Path(steps)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph must have at least one node")]
    EmptyDomain,
    #[error("successor table for label {label} has {found} entries, expected {expected}")]
    LengthMismatch {
        label: Label,
        expected: usize,
        found: usize,
    },
    #[error("edge ({node}, {label}) points to {target}, outside 0..{nodes}")]
    OutOfRange {
        node: usize,
        label: Label,
        target: usize,
        nodes: usize,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// An element of the state space: successor tables `succ[0]` and `succ[1]`,
/// both total maps on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphState {
    succ: [Vec<NodeId>; 2],
}

impl GraphState {
    /// Validates and builds a state from its two successor tables.
    pub fn new(n: usize, succ0: Vec<NodeId>, succ1: Vec<NodeId>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyDomain);
        }
        for (label, table) in Label::ALL.into_iter().zip([&succ0, &succ1]) {
            if table.len() != n {
                return Err(GraphError::LengthMismatch {
                    label,
                    expected: n,
                    found: table.len(),
                });
            }
            if let Some((node, target)) = table.iter().enumerate().find(|(_, t)| t.0 >= n) {
                return Err(GraphError::OutOfRange {
                    node,
                    label,
                    target: target.0,
                    nodes: n,
                });
            }
        }
        Ok(GraphState { succ: [succ0, succ1] })
    }

    /// Convenience constructor from raw indices.
    pub fn from_indices(n: usize, succ0: &[usize], succ1: &[usize]) -> Result<Self, GraphError> {
        Self::new(
            n,
            succ0.iter().copied().map(NodeId).collect(),
            succ1.iter().copied().map(NodeId).collect(),
        )
    }

    /// Every edge of every node loops back to the node itself.
    pub fn self_loops(n: usize) -> Result<Self, GraphError> {
        let ids: Vec<NodeId> = (0..n).map(NodeId).collect();
        Self::new(n, ids.clone(), ids)
    }

    pub fn len(&self) -> usize {
        self.succ[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ[0].is_empty()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        node.0 < self.len()
    }

    #[inline]
    pub fn succ(&self, node: NodeId, label: Label) -> NodeId {
        self.succ[label.index()][node.0]
    }

    pub fn table(&self, label: Label) -> &[NodeId] {
        &self.succ[label.index()]
    }

    /// Redirects one edge. `target` must be a node of this state.
    pub(crate) fn set_succ(&mut self, node: NodeId, label: Label, target: NodeId) {
        debug_assert!(self.contains(node) && self.contains(target));
        self.succ[label.index()][node.0] = target;
    }

    /// Returns a copy with one edge redirected, or an error if either end is
    /// outside the state.
    pub fn with_edge(&self, node: NodeId, label: Label, target: NodeId) -> Result<Self, GraphError> {
        let n = self.len();
        if !self.contains(node) || !self.contains(target) {
            return Err(GraphError::OutOfRange {
                node: node.0,
                label,
                target: target.0,
                nodes: n,
            });
        }
        let mut next = self.clone();
        next.set_succ(node, label, target);
        Ok(next)
    }

    /// Follows `path` from `origin`. The empty path returns `origin`.
    pub fn resolve(&self, origin: NodeId, path: &Path) -> NodeId {
        path.steps()
            .iter()
            .fold(origin, |node, &label| self.succ(node, label))
    }

    /// Canonical text: `nodes N` then one `i s0 s1` row per node.
    pub fn encode(&self) -> String {
        let mut out = format!("nodes {}\n", self.len());
        for i in 0..self.len() {
            out.push_str(&format!("{} {} {}\n", i, self.succ[0][i], self.succ[1][i]));
        }
        out
    }

    /// Parses the canonical text. `#` comment lines and blank lines are
    /// skipped; rows must appear in ascending node order.
    pub fn decode(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| {
                let t = l.trim();
                !t.is_empty() && !t.starts_with('#')
            });

        let parse_err = |line: usize, message: String| GraphError::Parse { line, message };

        let (hline, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "missing `nodes N` header".into()))?;
        let n = match header.split_ascii_whitespace().collect::<Vec<_>>().as_slice() {
            ["nodes", count] => parse_decimal(count)
                .ok_or_else(|| parse_err(hline, format!("bad node count `{count}`")))?,
            _ => return Err(parse_err(hline, format!("expected `nodes N`, found `{header}`"))),
        };
        if n == 0 {
            return Err(GraphError::EmptyDomain);
        }

        let mut succ0 = Vec::with_capacity(n);
        let mut succ1 = Vec::with_capacity(n);
        let mut last_line = hline;
        for expected in 0..n {
            let (lno, row) = lines.next().ok_or_else(|| {
                parse_err(last_line + 1, format!("missing row for node {expected}"))
            })?;
            last_line = lno;
            let fields: Vec<_> = row.split_ascii_whitespace().collect();
            let [idx, s0, s1] = fields.as_slice() else {
                return Err(parse_err(lno, format!("expected `i s0 s1`, found `{row}`")));
            };
            let nums = [idx, s0, s1]
                .map(|f| parse_decimal(f).ok_or_else(|| parse_err(lno, format!("bad number `{f}`"))));
            let [idx, s0, s1] = nums;
            let idx = idx?;
            if idx != expected {
                return Err(parse_err(
                    lno,
                    format!("expected row for node {expected}, found {idx}"),
                ));
            }
            succ0.push(NodeId(s0?));
            succ1.push(NodeId(s1?));
        }
        if let Some((lno, extra)) = lines.next() {
            return Err(parse_err(lno, format!("unexpected line after last row: `{extra}`")));
        }
        GraphState::new(n, succ0, succ1)
    }

    /// FNV-1a 64 digest of the canonical encoding.
    pub fn digest(&self) -> u64 {
        fnv1a_64(self.encode().as_bytes())
    }
}

impl fmt::Display for GraphState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl FromStr for GraphState {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GraphState::decode(s)
    }
}

fn parse_decimal(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

const FNV_OFFSET_BASIS: u64 = 0xcbf29ce484222325;
const FNV_PRIME: u64 = 0x100000001b3;

pub fn fnv1a_64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(FNV_OFFSET_BASIS, |hash, &b| {
        (hash ^ u64::from(b)).wrapping_mul(FNV_PRIME)
    })
}

/// Free-function forms of the state API.
pub fn make_state(n: usize, succ0: Vec<NodeId>, succ1: Vec<NodeId>) -> Result<GraphState, GraphError> {
    GraphState::new(n, succ0, succ1)
}

pub fn resolve(s: &GraphState, origin: NodeId, path: &Path) -> NodeId {
    s.resolve(origin, path)
}

pub fn encode_state(s: &GraphState) -> String {
    s.encode()
}

pub fn decode_state(text: &str) -> Result<GraphState, GraphError> {
    GraphState::decode(text)
}

pub fn state_hash(s: &GraphState) -> u64 {
    s.digest()
}
