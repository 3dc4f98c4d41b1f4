//! The blind machine: a fixed composition `T` applied over and over until the
//! state stops changing.
//!
//! Trajectories that revisit a state without ever reaching a fixed point are
//! reported as [`RunOutcome::Cycled`]. Visited states are remembered in full up
//! to [`RunLimits::max_tracked_states`]; past that budget detection falls back
//! to Brent's power-of-two tortoise/hare scheme, and the prefix is recovered by
//! replaying from the initial state.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::graph::GraphState;
use crate::op::{ApplyError, Composition};

pub const DEFAULT_MAX_STEPS: usize = 1_000_000;
pub const DEFAULT_MAX_TRACKED_STATES: usize = 65_536;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunLimits {
    /// Maximum number of transitions taken. Must be at least 1.
    pub max_steps: usize,
    /// How many visited states are kept for exact repeat detection.
    pub max_tracked_states: usize,
}

impl Default for RunLimits {
    fn default() -> Self {
        RunLimits {
            max_steps: DEFAULT_MAX_STEPS,
            max_tracked_states: DEFAULT_MAX_TRACKED_STATES,
        }
    }
}

impl RunLimits {
    pub fn with_max_steps(max_steps: usize) -> Self {
        RunLimits {
            max_steps: max_steps.max(1),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    /// `final_state` is the state after `steps` transitions and `T(final_state) = final_state`.
    Halted { steps: usize, final_state: GraphState },
    /// The state at index `prefix` recurs at index `prefix + period`.
    Cycled { prefix: usize, period: usize },
    /// `max_steps` transitions were taken without halting or detecting a cycle.
    StepLimit { steps: usize, last: GraphState },
}

impl fmt::Display for RunOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunOutcome::Halted { steps, .. } => write!(f, "halted steps={steps}"),
            RunOutcome::Cycled { prefix, period } => {
                write!(f, "cycled prefix={prefix} period={period}")
            }
            RunOutcome::StepLimit { steps, .. } => write!(f, "step-limit {steps}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TraceMode {
    #[default]
    None,
    Hash,
    Full,
}

impl FromStr for TraceMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(TraceMode::None),
            "hash" => Ok(TraceMode::Hash),
            "full" => Ok(TraceMode::Full),
            other => Err(format!("unknown trace mode `{other}` (expected none, hash or full)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub step: usize,
    pub digest: u64,
    pub state: Option<String>,
}

/// Entry `k` describes the state after `k` transitions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub entries: Vec<TraceEntry>,
}

impl Trace {
    fn record(&mut self, mode: TraceMode, step: usize, s: &GraphState) {
        let state = match mode {
            TraceMode::None => return,
            TraceMode::Hash => None,
            TraceMode::Full => Some(s.encode()),
        };
        self.entries.push(TraceEntry {
            step,
            digest: s.digest(),
            state,
        });
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `step=<k> hash=<hex>` per entry, with full states indented by two spaces.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let _ = writeln!(out, "step={} hash={:016x}", e.step, e.digest);
            if let Some(state) = &e.state {
                for line in state.lines() {
                    let _ = writeln!(out, "  {line}");
                }
            }
        }
        out
    }
}

pub fn is_comp_fixed(s: &GraphState, t: &Composition) -> Result<bool, ApplyError> {
    t.is_fixed(s)
}

/// Exact repeat detection over remembered states.
struct Visited {
    budget: usize,
    states: Vec<GraphState>,
    by_digest: HashMap<u64, Vec<usize>>,
}

impl Visited {
    fn new(budget: usize) -> Self {
        Visited {
            budget,
            states: Vec::new(),
            by_digest: HashMap::new(),
        }
    }

    fn lookup(&self, digest: u64, s: &GraphState) -> Option<usize> {
        self.by_digest
            .get(&digest)?
            .iter()
            .copied()
            .find(|&i| self.states[i] == *s)
    }

    fn is_full(&self) -> bool {
        self.states.len() >= self.budget
    }

    /// Remembers the state at the next trajectory index if budget remains.
    /// Indices stay aligned with trajectory positions because states are only
    /// ever appended as a prefix of the trajectory.
    fn insert(&mut self, digest: u64, s: &GraphState) {
        if self.states.len() < self.budget {
            self.by_digest.entry(digest).or_default().push(self.states.len());
            self.states.push(s.clone());
        }
    }
}

/// Brent's scheme: the tortoise jumps to the hare at powers of two.
struct Brent {
    tortoise: GraphState,
    power: usize,
    lam: usize,
}

impl Brent {
    fn new(start: GraphState) -> Self {
        Brent {
            tortoise: start,
            power: 1,
            lam: 0,
        }
    }

    /// Feeds the next state; returns the period once the hare meets the tortoise.
    fn step(&mut self, hare: &GraphState) -> Option<usize> {
        self.lam += 1;
        if *hare == self.tortoise {
            return Some(self.lam);
        }
        if self.lam == self.power {
            self.tortoise = hare.clone();
            self.power *= 2;
            self.lam = 0;
        }
        None
    }
}

/// Smallest index `mu` with `x_mu = x_{mu + period}`, by replay from `start`.
fn replay_prefix(start: &GraphState, t: &Composition, period: usize) -> Result<usize, ApplyError> {
    let mut tortoise = start.clone();
    let mut hare = start.clone();
    for _ in 0..period {
        hare = t.apply(&hare)?;
    }
    let mut mu = 0;
    while tortoise != hare {
        tortoise = t.apply(&tortoise)?;
        hare = t.apply(&hare)?;
        mu += 1;
    }
    Ok(mu)
}

/// Iterates `t` from `start` until the first fixed point, a detected cycle, or
/// the step limit.
pub fn run(
    start: &GraphState,
    t: &Composition,
    limits: RunLimits,
    mode: TraceMode,
) -> Result<(RunOutcome, Trace), ApplyError> {
    t.validate_for(start)?;
    let max_steps = limits.max_steps.max(1);

    let mut trace = Trace::default();
    let mut visited = Visited::new(limits.max_tracked_states);
    let mut brent: Option<Brent> = None;

    let mut current = start.clone();
    let digest = current.digest();
    trace.record(mode, 0, &current);
    visited.insert(digest, &current);

    let mut step = 0;
    loop {
        let next = t.apply(&current)?;
        if next == current {
            return Ok((
                RunOutcome::Halted {
                    steps: step,
                    final_state: current,
                },
                trace,
            ));
        }
        if step == max_steps {
            return Ok((
                RunOutcome::StepLimit {
                    steps: step,
                    last: current,
                },
                trace,
            ));
        }
        step += 1;
        let digest = next.digest();
        trace.record(mode, step, &next);

        if let Some(first) = visited.lookup(digest, &next) {
            return Ok((
                RunOutcome::Cycled {
                    prefix: first,
                    period: step - first,
                },
                trace,
            ));
        }
        visited.insert(digest, &next);

        match brent.as_mut() {
            Some(detector) => {
                if let Some(period) = detector.step(&next) {
                    let prefix = replay_prefix(start, t, period)?;
                    return Ok((RunOutcome::Cycled { prefix, period }, trace));
                }
            }
            None if visited.is_full() => brent = Some(Brent::new(next.clone())),
            None => {}
        }
        current = next;
    }
}
