use std::io::Write;
use std::process::{Command, Output, Stdio};

fn pa2(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pa2"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn pa2");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn solve_excluded_middle_ends_in_em() {
    let o = pa2(&["solve", "Forall X:1. X(0) | ~X(0)"], "");
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("PlayerWinning\n"));
    assert!(out.contains("5. P EM(1,2)\nPlayerWins(Em)"), "{out}");
}

#[test]
fn solve_generic_atom_ends_in_drop() {
    let o = pa2(&["solve", "Forall X:1. X(0)"], "");
    let out = stdout(&o);
    assert!(out.starts_with("OpponentWinning\n1. P DROP(1)\nOpponentWins(Drop)"), "{out}");
}

#[test]
fn solve_reports_move_budget() {
    let o = pa2(&["solve", "--max-moves", "200", "exists x. x + x = 5"], "");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("Undetermined(moves)\n"));
}

#[test]
fn eval_three_values() {
    assert_eq!(stdout(&pa2(&["eval", "--budget", "10", "exists x. x+2=5"], "")), "True\n");
    assert_eq!(stdout(&pa2(&["eval", "--budget", "100", "exists x. x+x=5"], "")), "Unknown\n");
    assert_eq!(stdout(&pa2(&["eval", "-"], "1 < 0")), "False\n");
}

#[test]
fn parse_normalizes_and_flags_errors() {
    let o = pa2(&["parse", "-"], "# comment\nx=x ,  True\n\nforall x. (x < 1\n");
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "x = x, True");
    assert!(lines[1].starts_with("line 4: "), "{out}");
}

#[test]
fn dump_is_json() {
    let o = pa2(&["dump", "--depth", "2", "--branch", "2", "True & False"], "");
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["kind"], "inner");
    assert_eq!(v["mover"], "O");
    assert_eq!(v["children"].as_array().unwrap().len(), 2);
}

#[test]
fn play_stdin_rejects_and_reprompts() {
    let o = pa2(&["play", "--stdin", "forall x. x = x"], "JUST(0,1)\nNTH(1)\n");
    let out = stdout(&o);
    assert!(out.contains("rejected: illegal move JUST(0,1)"), "{out}");
    assert_eq!(out.matches("legal: NTH(0) [4]").count(), 2);
    assert!(out.ends_with("2. O NTH(1) [local 0 → 1]\n3. P STOP(1)\nPlayerWins(Stop)\n"), "{out}");
}

#[test]
fn play_random_is_deterministic() {
    let args = ["play", "--random", "--seed", "3", "forall x. exists y. x < y"];
    let a = pa2(&args, "");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&pa2(&args, "")));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(pa2(&["solve", "--bogus", "True"], "").status.code(), Some(2));
    assert_eq!(pa2(&["verify", "--suite", "nope"], "").status.code(), Some(2));
    assert_eq!(pa2(&["play", "--as", "P", "True"], "").status.code(), Some(2));
}

#[test]
fn verify_single_suite() {
    let o = pa2(&["verify", "--suite", "exh-traces"], "");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("criterion 3 exh-traces: PASS (3/3"));
}
