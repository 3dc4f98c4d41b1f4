//! Primitive edge-redirection operations and their compositions.
//!
//! The surface syntax is `e[b0 b1..bn := a1..am]`: from origin `e`, resolve
//! the written target string `b1..bn` to a node `B` and the written source
//! string `a1..am` to a node `A`, then point `B`'s `b0` edge at `A`. Both
//! resolutions read the state before the write.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{GraphState, Label, NodeId, Path};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpError {
    #[error("malformed operation `{text}`: {reason}")]
    Parse { text: String, reason: String },
    #[error("operation `{text}` has no assigned label before `:=`")]
    EmptyTarget { text: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {source}")]
pub struct ProgramError {
    pub line: usize,
    #[source]
    pub source: OpError,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApplyError {
    #[error("{} origin {origin} is outside a graph of {nodes} nodes", op_label(*.op_index))]
    OriginOutOfRange {
        op_index: Option<usize>,
        origin: NodeId,
        nodes: usize,
    },
}

fn op_label(index: Option<usize>) -> String {
    match index {
        Some(i) => format!("op #{i}:"),
        None => "op:".into(),
    }
}

/// One rewrite `origin[assigned_label target := source]`.
///
/// Both paths are in traversal order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimitiveOp {
    pub origin: NodeId,
    pub assigned_label: Label,
    pub target_path: Path,
    pub source_path: Path,
}

impl PrimitiveOp {
    pub fn new(origin: NodeId, assigned_label: Label, target_path: Path, source_path: Path) -> Self {
        PrimitiveOp {
            origin,
            assigned_label,
            target_path,
            source_path,
        }
    }

    /// Written left-hand string: `b0` followed by the written target path.
    pub fn written_target(&self) -> String {
        let mut s = String::with_capacity(self.target_path.len() + 1);
        s.push(self.assigned_label.as_char());
        s.push_str(&self.target_path.to_written());
        s
    }

    pub fn written_source(&self) -> String {
        self.source_path.to_written()
    }

    fn check_origin(&self, s: &GraphState) -> Result<(), ApplyError> {
        if s.contains(self.origin) {
            Ok(())
        } else {
            Err(ApplyError::OriginOutOfRange {
                op_index: None,
                origin: self.origin,
                nodes: s.len(),
            })
        }
    }

    /// `(B, A)`: the node whose edge is rewritten and the node it will point to.
    pub fn endpoints(&self, s: &GraphState) -> Result<(NodeId, NodeId), ApplyError> {
        self.check_origin(s)?;
        Ok((
            s.resolve(self.origin, &self.target_path),
            s.resolve(self.origin, &self.source_path),
        ))
    }

    pub fn apply(&self, s: &GraphState) -> Result<GraphState, ApplyError> {
        let mut next = s.clone();
        self.apply_in_place(&mut next)?;
        Ok(next)
    }

    /// Rewrites `s` directly. Both endpoints are read before the write.
    pub fn apply_in_place(&self, s: &mut GraphState) -> Result<(), ApplyError> {
        let (b, a) = self.endpoints(s)?;
        s.set_succ(b, self.assigned_label, a);
        Ok(())
    }

    /// Whether applying the op leaves `s` unchanged.
    pub fn is_fixed(&self, s: &GraphState) -> Result<bool, ApplyError> {
        let (b, a) = self.endpoints(s)?;
        Ok(s.succ(b, self.assigned_label) == a)
    }
}

impl fmt::Display for PrimitiveOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let source = self.written_source();
        if source.is_empty() {
            write!(f, "{}[{} :=]", self.origin, self.written_target())
        } else {
            write!(f, "{}[{} := {}]", self.origin, self.written_target(), source)
        }
    }
}

impl FromStr for PrimitiveOp {
    type Err = OpError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let fail = |reason: &str| OpError::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let t = text.trim();
        let open = t.find('[').ok_or_else(|| fail("expected `[`"))?;
        let origin_str = &t[..open];
        if origin_str.is_empty() || !origin_str.bytes().all(|b| b.is_ascii_digit()) {
            return Err(fail("origin must be a decimal node index"));
        }
        let origin: usize = origin_str
            .parse()
            .map_err(|_| fail("origin index does not fit"))?;
        let body = t[open + 1..]
            .strip_suffix(']')
            .ok_or_else(|| fail("expected trailing `]`"))?;
        let (lhs, rhs) = body.split_once(":=").ok_or_else(|| fail("expected `:=`"))?;
        let (lhs, rhs) = (lhs.trim(), rhs.trim());
        let bad_bits = |s: &str| s.chars().any(|c| c != '0' && c != '1');
        if bad_bits(lhs) || bad_bits(rhs) {
            return Err(fail("labels must be `0` or `1`"));
        }
        let mut lhs_chars = lhs.chars();
        let assigned_label = match lhs_chars.next() {
            Some(c) => Label::from_char(c).expect("validated above"),
            None => return Err(OpError::EmptyTarget { text: text.to_string() }),
        };
        let target_path = Path::from_written(lhs_chars.as_str()).expect("validated above");
        let source_path = Path::from_written(rhs).expect("validated above");
        Ok(PrimitiveOp::new(NodeId(origin), assigned_label, target_path, source_path))
    }
}

/// Ops in execution order: `ops[0]` runs first. A composition written with
/// `∘` lists its factors in the reverse of this order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Composition {
    pub ops: Vec<PrimitiveOp>,
}

impl Composition {
    pub fn new(ops: Vec<PrimitiveOp>) -> Self {
        Composition { ops }
    }

    pub fn identity() -> Self {
        Composition::default()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// One op per line; `#` comments and blank lines skipped.
    pub fn parse(text: &str) -> Result<Self, ProgramError> {
        let mut ops = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let op = t.parse().map_err(|source| ProgramError { line: i + 1, source })?;
            ops.push(op);
        }
        Ok(Composition { ops })
    }

    /// Checks every origin against `s` without applying anything.
    pub fn validate_for(&self, s: &GraphState) -> Result<(), ApplyError> {
        match self.ops.iter().position(|op| !s.contains(op.origin)) {
            Some(i) => Err(ApplyError::OriginOutOfRange {
                op_index: Some(i),
                origin: self.ops[i].origin,
                nodes: s.len(),
            }),
            None => Ok(()),
        }
    }

    pub fn apply(&self, s: &GraphState) -> Result<GraphState, ApplyError> {
        self.validate_for(s)?;
        let mut next = s.clone();
        for op in &self.ops {
            op.apply_in_place(&mut next)?;
        }
        Ok(next)
    }

    pub fn is_fixed(&self, s: &GraphState) -> Result<bool, ApplyError> {
        Ok(self.apply(s)? == *s)
    }

    /// Canonical text: one printed op per line.
    pub fn to_text(&self) -> String {
        self.ops.iter().map(|op| format!("{op}\n")).collect()
    }
}

impl FromStr for Composition {
    type Err = ProgramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Composition::parse(s)
    }
}

impl FromIterator<PrimitiveOp> for Composition {
    fn from_iter<I: IntoIterator<Item = PrimitiveOp>>(iter: I) -> Self {
        Composition::new(iter.into_iter().collect())
    }
}

pub fn parse_op(text: &str) -> Result<PrimitiveOp, OpError> {
    text.parse()
}

pub fn print_op(op: &PrimitiveOp) -> String {
    op.to_string()
}

pub fn apply_op(s: &GraphState, op: &PrimitiveOp) -> Result<GraphState, ApplyError> {
    op.apply(s)
}

pub fn is_op_fixed(s: &GraphState, op: &PrimitiveOp) -> Result<bool, ApplyError> {
    op.is_fixed(s)
}

pub fn parse_program(text: &str) -> Result<Composition, ProgramError> {
    Composition::parse(text)
}

pub fn apply_composition(s: &GraphState, t: &Composition) -> Result<GraphState, ApplyError> {
    t.apply(s)
}
