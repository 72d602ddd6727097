//! Runs the built binary and checks exit codes and outputs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fx(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_braidcell"))
        .args(args)
        .env_remove("BRAIDCELL_MOVE_LIMIT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn validate_prints_counts_and_genus() {
    let o = run(&["validate", p(&fx("cube.surface"))]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "F=6 E=12 V=8 g=0\n");
    let o = run(&["validate", "--canonical", "torus_grid(4,5)"]);
    assert_eq!(stdout(&o), "F=20 E=40 V=20 g=1\n");
}

#[test]
fn malformed_surfaces_exit_1_naming_the_invariant() {
    for (file, invariant) in [
        ("self_neighbor.surface", "self-neighbor"),
        ("double_adjacency.surface", "double adjacency"),
        ("broken_cycle.surface", "broken cycle"),
    ] {
        let o = run(&["validate", p(&fx(file))]);
        assert_eq!(o.status.code(), Some(1), "{file}");
        assert!(stderr(&o).contains(invariant), "{file}: {}", stderr(&o));
    }
}

#[test]
fn reduce_exit_codes() {
    let ok = run(&["reduce", "--canonical", "cube", "--curve", p(&fx("sigma.curve"))]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("e0^+1"), "{}", stdout(&ok));

    let nnh = run(&["reduce", "--canonical", "cube", "--curve", p(&fx("single_crossing.curve"))]);
    assert_eq!(nnh.status.code(), Some(2), "{}", stderr(&nnh));

    let limit = run(&["reduce", "--canonical", "cube", "--word", p(&fx("random8.word")), "--limit", "3"]);
    assert_eq!(limit.status.code(), Some(3), "{}", stderr(&limit));

    let missing = run(&["reduce", "--canonical", "cube", "--curve", "/nonexistent.curve"]);
    assert_eq!(missing.status.code(), Some(1));

    let usage = run(&["reduce", "--bogus"]);
    assert_eq!(usage.status.code(), Some(1));
}

#[test]
fn move_limit_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_braidcell"))
        .args(["reduce", "--canonical", "cube", "--word", p(&fx("random8.word"))])
        .env("BRAIDCELL_MOVE_LIMIT", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn reduce_writes_the_fixture_trace_and_check_accepts_it() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("out.trace");
    let o = run(&["reduce", "--canonical", "cube", "--word", p(&fx("random8.word")), "--trace", p(&t)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(std::fs::read_to_string(&t).unwrap(), std::fs::read_to_string(fx("random8.trace")).unwrap());

    let c = run(&["check", p(&t)]);
    assert_eq!(c.status.code(), Some(0), "{}", stdout(&c));
    assert!(stdout(&c).lines().all(|l| !l.starts_with("check ") || l.contains(" pass ")));
}

#[test]
fn tampered_trace_fails_check() {
    let text = std::fs::read_to_string(fx("random8.trace")).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    // swap two move lines: the order matters for replay
    let moves: Vec<usize> = (0..lines.len()).filter(|&i| lines[i].starts_with("move ")).collect();
    assert!(moves.len() >= 2);
    let (a, b) = (moves[0], moves[moves.len() / 2]);
    lines.swap(a, b);
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("bad.trace");
    std::fs::write(&t, lines.join("\n") + "\n").unwrap();
    let o = run(&["check", p(&t)]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    assert!(stdout(&o).contains("check replay_forward fail"));
    assert!(stdout(&o).contains("--- counterexample"));
    assert!(stderr(&o).contains("divergence at move 0"), "{}", stderr(&o));
}

#[test]
fn fuzz_is_deterministic_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["fuzz", "--canonical", "cube", "--count", "60", "--length", "20", "--seed", "3", "--out", p(dir.path())];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("pass 60\nfail 0\n"));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0, "no counterexamples on success");
}

#[test]
fn check_needs_a_surface_for_unknown_names() {
    let text = std::fs::read_to_string(fx("sigma.trace")).unwrap().replacen("trace cube", "trace mystery", 1);
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("x.trace");
    std::fs::write(&t, text).unwrap();
    let o = run(&["check", p(&t)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--surface"), "{}", stderr(&o));
}
