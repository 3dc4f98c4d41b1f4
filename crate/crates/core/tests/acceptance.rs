//! Acceptance gate. Each test checks one criterion at its stated threshold
//! and prints a single `PASS`/`FAIL` line.
//!
//! Run with `cargo test --test acceptance -- --nocapture --test-threads 1`
//! to see the lines in order.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use blind_rewrite::gadgets::{
    build_cond_fixture, build_gate, cond_program, read_cond_result, verify_gate, GateKind, Outcome,
};
use blind_rewrite::graph::{GraphState, NodeId};
use blind_rewrite::machine::{run, RunLimits, RunOutcome, TraceMode};
use blind_rewrite::op::{Composition, PrimitiveOp};
use blind_rewrite::oracle::{
    check_fixed_construction, check_fixed_point_iff, check_fixed_point_iff_random, check_postconditions,
    check_postconditions_random, enumerate_states, random_state, random_written_op, SweepBounds,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn criterion(id: u32, name: &str, budget: Option<Duration>, body: impl FnOnce() -> Result<String, String>) {
    let start = Instant::now();
    let result = body();
    let elapsed = start.elapsed();
    let result = match (result, budget) {
        (Ok(_), Some(b)) if elapsed > b => Err(format!("took {elapsed:.2?}, budget {b:?}")),
        (r, _) => r,
    };
    match &result {
        Ok(detail) => println!("criterion {id} PASS {name}: {detail} ({elapsed:.2?})"),
        Err(why) => println!("criterion {id} FAIL {name}: {why} ({elapsed:.2?})"),
    }
    if let Err(why) = result {
        panic!("criterion {id} ({name}) failed: {why}");
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn blindrw(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_blindrw"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn c1_postcondition_equations() {
    criterion(1, "postcondition equations", Some(Duration::from_secs(5)), || {
        let exhaustive = check_postconditions(&SweepBounds::new(2).unwrap());
        ensure(exhaustive.cases_checked == 6720, || {
            format!("expected 6720 cases, got {}", exhaustive.cases_checked)
        })?;
        ensure(exhaustive.passed(), || exhaustive.to_string())?;
        let random = check_postconditions_random(10_000, 64, 6, 1);
        ensure(random.cases_checked == 10_000 && random.passed(), || random.to_string())?;
        Ok(format!(
            "{} exhaustive + {} random cases, 0 violations",
            exhaustive.cases_checked, random.cases_checked
        ))
    });
}

#[test]
fn c2_fixed_point_iff() {
    criterion(2, "fixed point iff", Some(Duration::from_secs(5)), || {
        let exhaustive = check_fixed_point_iff(&SweepBounds::new(2).unwrap());
        ensure(exhaustive.cases_checked == 6720 && exhaustive.passed(), || exhaustive.to_string())?;
        let random = check_fixed_point_iff_random(10_000, 3, 3, 2);
        ensure(random.cases_checked == 10_000 && random.passed(), || random.to_string())?;
        Ok(format!(
            "{} exhaustive n=2 + {} random n=3 cases",
            exhaustive.cases_checked, random.cases_checked
        ))
    });
}

#[test]
fn c3_conditional_embedding() {
    criterion(3, "conditional embedding", Some(Duration::from_secs(1)), || {
        let program = cond_program();
        let mut fixtures = 0;
        for seed in 0..=100u64 {
            for value in [true, false] {
                let (s, layout) = build_cond_fixture(value, seed);
                let post = program.apply(&s).map_err(|e| e.to_string())?;
                let want = if value { layout.m } else { layout.n };
                let got = read_cond_result(&post, &layout);
                ensure(got == want, || format!("value={value} seed={seed}: readout {got}, want {want}"))?;
                let (outcome, _) =
                    run(&s, &program, RunLimits::default(), TraceMode::None).map_err(|e| e.to_string())?;
                ensure(matches!(outcome, RunOutcome::Halted { steps: 1, .. }), || {
                    format!("value={value} seed={seed}: {outcome}")
                })?;
                fixtures += 1;
            }
        }
        ensure(fixtures == 202, || format!("checked {fixtures} fixtures"))?;
        Ok(format!("{fixtures} fixtures read m/n and halt after 1 step"))
    });
}

#[test]
fn c4_fixed_point_construction() {
    criterion(4, "fixed point construction", Some(Duration::from_secs(5)), || {
        let r = check_fixed_construction(&SweepBounds::new(3).unwrap(), 1000, 42);
        let antecedents = r.antecedent_cases.unwrap_or(0);
        ensure(r.violations.is_empty(), || r.to_string())?;
        ensure(antecedents >= 1, || "no antecedent cases".into())?;
        Ok(format!("{} cases, {antecedents} antecedent, 0 violations", r.cases_checked))
    });
}

#[test]
fn c5_cycle_detection() {
    criterion(5, "cycle detection", None, || {
        let s0 = GraphState::from_indices(3, &[1, 1, 2], &[0, 2, 1]).unwrap();
        let t = Composition::parse("0[0 := 10]").unwrap();
        let (outcome, _) = run(&s0, &t, RunLimits::default(), TraceMode::None).map_err(|e| e.to_string())?;
        ensure(outcome == RunOutcome::Cycled { prefix: 0, period: 2 }, || outcome.to_string())?;
        let o = blindrw(&["run", "--graph", &data("cycle2.pg"), "--program", &data("cycle2.pop")]);
        ensure(o.status.code() == Some(2), || format!("exit code {:?}", o.status.code()))?;
        let out = String::from_utf8_lossy(&o.stdout).into_owned();
        ensure(out == "cycled prefix=0 period=2\n", || format!("stdout {out:?}"))?;
        Ok("Cycled{prefix 0, period 2}, exit 2".into())
    });
}

#[test]
fn c6_gates() {
    criterion(6, "NOT/AND/OR gates", Some(Duration::from_secs(5)), || {
        let mut summary = Vec::new();
        for (kind, rows) in [(GateKind::Not, 2), (GateKind::And, 4), (GateKind::Or, 4)] {
            let g = build_gate(kind);
            let report = verify_gate(&g, 50);
            ensure(report.passed(), || report.render())?;
            ensure(report.rows.len() == rows, || format!("{kind:?}: {} rows", report.rows.len()))?;
            ensure(report.rows.iter().all(|r| r.fills == 50), || format!("{kind:?}: fill count"))?;
            // outputs must be valid cells, not just the right value
            for inputs in g.rows() {
                for seed in 1..=50 {
                    let fx = g.build_fixture(&inputs, seed);
                    let post = g.program.apply(&fx.state).map_err(|e| e.to_string())?;
                    let out = g.read(&post);
                    ensure(matches!(out, Outcome::Bool(v) if v.as_bool().is_some()), || {
                        format!("{kind:?} {inputs:?} seed {seed}: {out}")
                    })?;
                }
            }
            summary.push(format!("{}={}x50", kind.name(), rows));
        }
        Ok(summary.join(" "))
    });
}

#[test]
fn c7_codec_and_canonicalization() {
    criterion(7, "codec and canonicalization", None, || {
        let mut states = 0;
        for n in 1..=3 {
            for s in enumerate_states(n).map_err(|e| e.to_string())? {
                let back = GraphState::decode(&s.encode()).map_err(|e| e.to_string())?;
                ensure(back == s, || format!("round trip failed for\n{s}"))?;
                states += 1;
            }
        }
        ensure(states == 1 + 16 + 729, || format!("{states} small states"))?;

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=64);
            let s = random_state(&mut rng, n);
            let back = GraphState::decode(&s.encode()).map_err(|e| e.to_string())?;
            ensure(back == s, || format!("round trip failed for\n{s}"))?;
        }

        for _ in 0..1000 {
            let n = rng.gen_range(1..=64);
            let op = random_written_op(&mut rng, n, 8).to_op();
            let printed = op.to_string();
            let reparsed: PrimitiveOp = printed.parse().map_err(|e: blind_rewrite::OpError| e.to_string())?;
            ensure(reparsed == op, || format!("parse(print) changed {printed}"))?;
        }
        Ok(format!("{states} exhaustive + 1000 random states, 1000 ops"))
    });
}

#[test]
fn c8_determinism() {
    criterion(8, "determinism", None, || {
        let args = ["run", "--graph", &data("cond_true.pg"), "--program", &data("cond.pop"), "--trace", "full"];
        let a = blindrw(&args);
        let b = blindrw(&args);
        ensure(a.status.code() == Some(0), || format!("exit code {:?}", a.status.code()))?;
        ensure(!a.stdout.is_empty() && a.stdout == b.stdout, || "stdout differs".into())?;
        let text = String::from_utf8_lossy(&a.stdout);
        ensure(text.starts_with("halted steps=1\n"), || format!("stdout {text:?}"))?;
        Ok(format!("{} identical bytes", a.stdout.len()))
    });
}

#[test]
fn cond_fixture_file_matches_builder() {
    let text = std::fs::read_to_string(data("cond_true.pg")).unwrap();
    assert_eq!(GraphState::decode(&text).unwrap(), build_cond_fixture(true, 0).0);
    let text = std::fs::read_to_string(data("cond_false.pg")).unwrap();
    assert_eq!(GraphState::decode(&text).unwrap(), build_cond_fixture(false, 0).0);
    let (s, layout) = build_cond_fixture(true, 0);
    assert_eq!(read_cond_result(&cond_program().apply(&s).unwrap(), &layout), NodeId(3));
}
