use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn blindrw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blindrw"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn run_cond_fixture_halts() {
    for (graph, hash_lines) in [("cond_true.pg", 2), ("cond_false.pg", 2)] {
        let o = blindrw(&["run", "--graph", &data(graph), "--program", &data("cond.pop"), "--trace", "hash"]);
        assert_eq!(o.status.code(), Some(0));
        let out = stdout(&o);
        assert_eq!(out.lines().next(), Some("halted steps=1"));
        assert_eq!(out.lines().filter(|l| l.starts_with("step=")).count(), hash_lines);
    }
}

#[test]
fn run_golden_output() {
    let o = blindrw(&["run", "--graph", &data("cycle2.pg"), "--program", &data("cycle2.pop"), "--trace", "full"]);
    assert_eq!(o.status.code(), Some(2));
    let expected = "\
cycled prefix=0 period=2
step=0 hash=89f356595dfc6d27
  nodes 3
  0 1 0
  1 1 2
  2 2 1
step=1 hash=097e674086b8d450
  nodes 3
  0 2 0
  1 1 2
  2 2 1
step=2 hash=89f356595dfc6d27
  nodes 3
  0 1 0
  1 1 2
  2 2 1
";
    assert_eq!(stdout(&o), expected);
}

#[test]
fn run_step_limit_exit_code() {
    let o = blindrw(&[
        "run", "--graph", &data("cycle2.pg"), "--program", &data("cycle2.pop"), "--max-steps", "1",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout(&o), "step-limit 1\n");
}

#[test]
fn run_malformed_program_names_line() {
    let o = blindrw(&["run", "--graph", &data("cycle2.pg"), "--program", &data("bad_label.pop")]);
    assert_eq!(o.status.code(), Some(4));
    let err = stderr(&o);
    assert!(err.contains("bad_label.pop:3:"), "{err}");
    assert_eq!(err.lines().count(), 1);
    assert!(stdout(&o).is_empty());
}

#[test]
fn run_rejects_origin_outside_graph() {
    let dir = tempfile::tempdir().unwrap();
    let prog = dir.path().join("far.pop");
    std::fs::write(&prog, "9[0 :=]\n").unwrap();
    let o = blindrw(&["run", "--graph", &data("cycle2.pg"), "--program", prog.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("origin 9"));
}

#[test]
fn run_rejects_bad_graph() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("bad.pg");
    std::fs::write(&g, "nodes 2\n0 0 0\n").unwrap();
    let o = blindrw(&["run", "--graph", g.to_str().unwrap(), "--program", &data("cond.pop")]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("bad.pg:3: missing row for node 1"));
}

#[test]
fn unknown_flag_exit_code() {
    let o = blindrw(&["run", "--graph", &data("cycle2.pg"), "--program", &data("cycle2.pop"), "--verbose"]);
    assert_eq!(o.status.code(), Some(4));
    let o = blindrw(&["run", "--graph", &data("cycle2.pg"), "--program", &data("cycle2.pop"), "--trace", "all"]);
    assert_eq!(o.status.code(), Some(4));
    let o = blindrw(&["run", "--graph", &data("cycle2.pg"), "--program", &data("cycle2.pop"), "--max-steps", "0"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn check_command() {
    let o = blindrw(&["check", "--graph", &data("cond_true.pg"), "--program", &data("cond.pop")]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(1), "not fixed\n"));

    let dir = tempfile::tempdir().unwrap();
    let post = dir.path().join("post.pg");
    let mut text = std::fs::read_to_string(data("cond_true.pg")).unwrap();
    text = text.replace("5 5 5", "5 3 5").replace("6 6 6", "6 4 6");
    std::fs::write(&post, text).unwrap();
    let o = blindrw(&["check", "--graph", post.to_str().unwrap(), "--program", &data("cond.pop")]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "fixed\n"));
}

#[test]
fn fmt_command() {
    let o = blindrw(&["fmt", "--program", &data("cond.pop")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0[011 := 10]\n0[001 := 00]\n");

    let dir = tempfile::tempdir().unwrap();
    let messy = dir.path().join("messy.pop");
    std::fs::write(&messy, "# x\n\n  3[10:=]\n0[1:=0110]\n").unwrap();
    let o = blindrw(&["fmt", "--program", messy.to_str().unwrap()]);
    assert_eq!(stdout(&o), "3[10 :=]\n0[1 := 0110]\n");

    let o = blindrw(&["fmt", "--graph", &data("cycle2.pg")]);
    assert_eq!(stdout(&o), "nodes 3\n0 1 0\n1 1 2\n2 2 1\n");

    let o = blindrw(&["fmt", "--program", &data("bad_label.pop")]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn gadget_verify_command() {
    for gate in ["not", "and", "or", "cond"] {
        let o = blindrw(&["gadget", "verify", "--gate", gate, "--seeds", "10"]);
        assert_eq!(o.status.code(), Some(0), "{gate}");
        let out = stdout(&o);
        assert!(out.ends_with("PASS\n"));
        let rows = if gate == "and" || gate == "or" { 4 } else { 2 };
        assert_eq!(out.lines().count(), rows + 1);
    }
}

#[test]
fn gadget_fixture_runs_through_machine() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("and.pg");
    let o = blindrw(&["gadget", "fixture", "--gate", "and", "--inputs", "11", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    std::fs::write(&g, o.stdout).unwrap();
    let o = blindrw(&["run", "--graph", g.to_str().unwrap(), "--program", &data("cond.pop")]);
    assert_eq!(stdout(&o), "halted steps=1\n");
}

#[test]
fn oracle_command() {
    let o = blindrw(&["oracle", "--nodes", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("postconditions n=2: cases=6720 violations=0"), "{out}");
    assert_eq!(out.lines().filter(|l| *l == "PASS").count(), 3);

    let o = blindrw(&["oracle", "--nodes", "1", "--max-path", "1", "--programs", "3", "--dump"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.ends_with("\tok")));
    assert!(!out.lines().any(|l| l.ends_with("\tFAIL")));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["oracle", "--nodes", "2", "--max-path", "2", "--programs", "50", "--dump"];
    assert_eq!(blindrw(&args).stdout, blindrw(&args).stdout);
    let args = ["gadget", "verify", "--gate", "or"];
    assert_eq!(blindrw(&args).stdout, blindrw(&args).stdout);
}
