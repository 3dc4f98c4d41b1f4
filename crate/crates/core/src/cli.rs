//! Command-line front end. [`execute`] is the whole program; `main` only wires
//! it to the process streams.
//!
//! Exit codes: 0 success, halted or pass; 1 verification failure; 2 cycled;
//! 3 step limit; 4 input or parse error.

use std::fs;
use std::io::Write;
use std::path::{Path as FsPath, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::gadgets::{build_gate, verify_gate, GateKind};
use crate::graph::{GraphError, GraphState};
use crate::machine::{run, RunLimits, RunOutcome, TraceMode, DEFAULT_MAX_STEPS};
use crate::op::Composition;
use crate::oracle::{run_all, SweepBounds};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CYCLED: i32 = 2;
pub const EXIT_STEP_LIMIT: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "blindrw", version, about = "Blind graph-rewriting machine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Iterate a program from an initial graph until it halts, cycles or hits the step limit.
    Run(RunArgs),
    /// Report whether the graph is already a fixed point of the program.
    Check(InputArgs),
    /// Print graph and/or program files in canonical form.
    Fmt(FmtArgs),
    /// Boolean and conditional gadgets.
    #[command(subcommand)]
    Gadget(GadgetCommand),
    /// Exhaustive semantic checks on small graphs.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    #[arg(long, value_name = "FILE.pg")]
    graph: PathBuf,
    #[arg(long, value_name = "FILE.pop")]
    program: PathBuf,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS as u64, value_parser = clap::value_parser!(u64).range(1..))]
    max_steps: u64,
    #[arg(long, default_value = "none", value_parser = parse_trace_mode)]
    trace: TraceMode,
}

#[derive(Debug, Args)]
struct FmtArgs {
    #[arg(long, value_name = "FILE.pg", required_unless_present = "program")]
    graph: Option<PathBuf>,
    #[arg(long, value_name = "FILE.pop")]
    program: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum GadgetCommand {
    /// Check a gadget's full truth table under random don't-care fills.
    Verify {
        #[arg(long, value_parser = parse_gate)]
        gate: GateKind,
        #[arg(long, default_value_t = 50)]
        seeds: usize,
    },
    /// Print a gadget fixture as a graph file.
    Fixture {
        #[arg(long, value_parser = parse_gate, default_value = "cond")]
        gate: GateKind,
        /// Input values as a string of 0/1 digits, first input first.
        #[arg(long)]
        inputs: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the gadget program.
    Program,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=3))]
    nodes: u64,
    /// Maximum written string length on each side of `:=`.
    #[arg(long, default_value_t = 3)]
    max_path: usize,
    #[arg(long, default_value_t = 1000)]
    programs: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Print a `case<TAB>status` line for every checked case.
    #[arg(long)]
    dump: bool,
}

fn parse_trace_mode(s: &str) -> Result<TraceMode, String> {
    s.parse()
}

fn parse_gate(s: &str) -> Result<GateKind, String> {
    s.parse()
}

/// A one-line diagnostic, exit code 4.
struct InputError(String);

fn read_file(path: &FsPath) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_graph(path: &FsPath) -> Result<GraphState, InputError> {
    let text = read_file(path)?;
    GraphState::decode(&text).map_err(|e| match e {
        GraphError::Parse { line, message } => {
            InputError(format!("{}:{line}: {message}", path.display()))
        }
        other => InputError(format!("{}: {other}", path.display())),
    })
}

fn load_program(path: &FsPath) -> Result<Composition, InputError> {
    let text = read_file(path)?;
    Composition::parse(&text)
        .map_err(|e| InputError(format!("{}:{}: {}", path.display(), e.line, e.source)))
}

fn load_pair(args: &InputArgs) -> Result<(GraphState, Composition), InputError> {
    let graph = load_graph(&args.graph)?;
    let program = load_program(&args.program)?;
    program
        .validate_for(&graph)
        .map_err(|e| InputError(format!("{}: {e}", args.program.display())))?;
    Ok((graph, program))
}

/// Runs the command line `argv` (including the program name) and returns the
/// exit code. Data goes to `out`, diagnostics to `err`.
pub fn execute<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_INPUT
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(InputError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, InputError> {
    let io = |e: std::io::Error| InputError(format!("write failed: {e}"));
    match command {
        Command::Run(args) => {
            let (graph, program) = load_pair(&args.input)?;
            let limits = RunLimits {
                max_steps: usize::try_from(args.max_steps).unwrap_or(usize::MAX),
                ..Default::default()
            };
            let (outcome, trace) = run(&graph, &program, limits, args.trace)
                .map_err(|e| InputError(e.to_string()))?;
            writeln!(out, "{outcome}").map_err(io)?;
            out.write_all(trace.render().as_bytes()).map_err(io)?;
            Ok(match outcome {
                RunOutcome::Halted { .. } => EXIT_OK,
                RunOutcome::Cycled { .. } => EXIT_CYCLED,
                RunOutcome::StepLimit { .. } => EXIT_STEP_LIMIT,
            })
        }
        Command::Check(args) => {
            let (graph, program) = load_pair(&args)?;
            let fixed = program.is_fixed(&graph).map_err(|e| InputError(e.to_string()))?;
            writeln!(out, "{}", if fixed { "fixed" } else { "not fixed" }).map_err(io)?;
            Ok(if fixed { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
        Command::Fmt(args) => {
            if let Some(path) = &args.graph {
                out.write_all(load_graph(path)?.encode().as_bytes()).map_err(io)?;
            }
            if let Some(path) = &args.program {
                out.write_all(load_program(path)?.to_text().as_bytes()).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Gadget(GadgetCommand::Verify { gate, seeds }) => {
            let report = verify_gate(&build_gate(gate), seeds);
            out.write_all(report.render().as_bytes()).map_err(io)?;
            Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
        Command::Gadget(GadgetCommand::Fixture { gate, inputs, seed }) => {
            let g = build_gate(gate);
            let values = inputs
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(InputError(format!("--inputs must be 0/1 digits, got `{inputs}`"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            if values.len() != g.arity() {
                return Err(InputError(format!(
                    "gate {} takes {} input(s), got {}",
                    gate.name(),
                    g.arity(),
                    values.len()
                )));
            }
            let fixture = g.build_fixture(&values, seed);
            out.write_all(fixture.state.encode().as_bytes()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Gadget(GadgetCommand::Program) => {
            out.write_all(build_gate(GateKind::Cond).program.to_text().as_bytes())
                .map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Oracle(args) => {
            let n = args.nodes as usize;
            let bounds = SweepBounds::with_lengths(n, args.max_path, args.max_path)
                .map_err(|e| InputError(e.to_string()))?;
            let reports = run_all(&bounds, args.programs, args.seed, args.dump);
            let mut ok = true;
            for r in &reports {
                if args.dump {
                    out.write_all(r.render_dump().as_bytes()).map_err(io)?;
                }
                write!(out, "{r}").map_err(io)?;
                ok &= r.passed();
            }
            Ok(if ok { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
    }
}
