//! A "blind" graph-rewriting machine.
//!
//! A state is a finite graph in which every node has exactly two out-edges,
//! labeled `0` and `1`. The machine's only instructions are primitive
//! edge redirections `e[b0 b1..bn := a1..am]`, composed into one fixed
//! transition `T` that is applied without ever inspecting the state. The
//! machine halts when `T` no longer changes the state.
//!
//! - [`graph`]: states, label paths, the `.pg` text format and digests.
//! - [`op`]: primitive operations, compositions and the `.pop` program format.
//! - [`machine`]: iteration to a fixed point with cycle detection and traces.
//! - [`gadgets`]: boolean cells, the conditional embedding and NOT/AND/OR.
//! - [`oracle`]: brute-force checks over every small state.
//! - [`cli`]: the `blindrw` command line.

pub mod cli;
pub mod gadgets;
pub mod graph;
pub mod machine;
pub mod op;
pub mod oracle;

pub use gadgets::{build_gate, verify_gate, BoolCell, CondLayout, GateGadget, GateKind, TruthValue};
pub use graph::{GraphError, GraphState, Label, NodeId, Path};
pub use machine::{run, RunLimits, RunOutcome, Trace, TraceMode};
pub use op::{ApplyError, Composition, OpError, PrimitiveOp, ProgramError};
