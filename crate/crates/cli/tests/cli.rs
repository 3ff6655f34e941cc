//! End-to-end checks of the command-line interface: output shapes, the
//! exit-code contract, and byte determinism.

use std::path::Path;
use std::process::{Command, Output};

const SAMPLE_LSD: &str = "\
base 2
dim 1
states 5
initial 0
accepting 3
direction lsd
trans 0 1 1
trans 0 0 4
trans 1 0 1
trans 1 1 2
trans 2 1 3
trans 2 0 4
trans 3 0 4
trans 3 1 4
trans 4 0 4
trans 4 1 4
";

const POW2_PLUS_1: &str = "\
base 2
dim 1
states 4
initial 0
accepting 2
direction msd
trans 0 0 3
trans 0 1 1
trans 1 0 1
trans 1 1 2
trans 2 0 3
trans 2 1 3
trans 3 0 3
trans 3 1 3
";

const POW3: &str = "\
base 3
dim 1
states 3
initial 0
accepting 1
direction msd
trans 0 0 2
trans 0 1 1
trans 0 2 2
trans 1 0 1
trans 1 1 2
trans 1 2 2
trans 2 0 2
trans 2 1 2
trans 2 2 2
";

const EVERYTHING: &str = "\
base 2
dim 1
states 1
initial 0
accepting 0
direction msd
trans 0 0 0
trans 0 1 0
";

const TERM: &str = "\
base 2
dim 1
\"11\" (\"0\")* \"1\"
";

fn write(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.to_str().unwrap().to_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_autosparse"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn member_answers_and_normalizes_direction() {
    let dir = tempfile::tempdir().unwrap();
    let aut = write(dir.path(), "sample.aut", SAMPLE_LSD);
    assert_eq!(stdout_of(&["member", &aut, "7"]), "true\n");
    assert_eq!(stdout_of(&["member", &aut, "14"]), "false\n");
    assert_eq!(stdout_of(&["member", &aut, "97"]), "true\n");
}

#[test]
fn sparsity_reports_degree() {
    let dir = tempfile::tempdir().unwrap();
    let aut = write(dir.path(), "sample.aut", SAMPLE_LSD);
    assert_eq!(stdout_of(&["sparsity", &aut]), "sparse degree=1\n");
    let full = write(dir.path(), "full.aut", EVERYTHING);
    let line = stdout_of(&["sparsity", &full]);
    assert!(line.starts_with("non-sparse state="), "got {line:?}");
}

#[test]
fn decompose_prints_terms_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let aut = write(dir.path(), "sample.aut", SAMPLE_LSD);
    assert_eq!(
        stdout_of(&["decompose", &aut, "--verify", "12"]),
        "\"11\" (\"0\")* \"1\"\nverified max-len=12\n"
    );
}

#[test]
fn decompose_rejects_non_sparse_input() {
    let dir = tempfile::tempdir().unwrap();
    let full = write(dir.path(), "full.aut", EVERYTHING);
    let out = run(&["decompose", &full]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not sparse"));
}

#[test]
fn counts_lists_cumulative_values() {
    let dir = tempfile::tempdir().unwrap();
    let aut = write(dir.path(), "sample.aut", SAMPLE_LSD);
    assert_eq!(
        stdout_of(&["counts", &aut, "--max-len", "5"]),
        "0 0\n1 0\n2 0\n3 1\n4 1\n5 1\n"
    );
}

#[test]
fn expsum_prints_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let term = write(dir.path(), "t.term", TERM);
    assert_eq!(stdout_of(&["expsum", &term]), "x1 = 1 + 6 * 2^(n1)\n");
}

#[test]
fn enumerate_lists_values_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let term = write(dir.path(), "t.term", TERM);
    assert_eq!(
        stdout_of(&["enumerate", &term, "--bound", "100"]),
        "7\n13\n25\n49\n97\n"
    );
}

#[test]
fn bound_prints_golden_exact_value() {
    assert_eq!(
        stdout_of(&["bound", "--formula", "unit-eq", "--n", "1", "--r", "1", "--exact"]),
        "formula=unit-eq n=1 r=1\nlog10=10.837080\nexact=68719476736\n"
    );
}

#[test]
fn bound_requires_formula_inputs() {
    let out = run(&["bound", "--formula", "unit-eq", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--r"));
}

#[test]
fn bound_rejects_dependent_bases() {
    let out = run(&[
        "bound", "--formula", "main", "--k", "2", "--l", "4", "--d", "1", "--Q", "2", "--Qp",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dependent"));
}

#[test]
fn intersect_finds_witnesses_with_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "x.aut", POW2_PLUS_1);
    let y = write(dir.path(), "y.aut", POW3);
    let out = stdout_of(&[
        "intersect",
        &x,
        &y,
        "--bound",
        "1000000000",
        "--diagnostics",
    ]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "3");
    assert_eq!(lines[1], "9");
    assert_eq!(lines[2], "exhaustive up-to 1000000000");
    assert!(lines[3].starts_with("count-bound log10="));
    assert_eq!(lines[4], "witness 3: 3^1 - 1 - 2 * 2^0 = 0 partition=[[0, 1, 2]]");
    assert_eq!(lines[5], "witness 9: 3^2 - 1 - 2 * 2^2 = 0 partition=[[0, 1, 2]]");
}

#[test]
fn project_output_feeds_back_into_member() {
    let dir = tempfile::tempdir().unwrap();
    let aut = write(dir.path(), "sample.aut", SAMPLE_LSD);
    let projected = stdout_of(&["project", &aut, "--coords", "1"]);
    let paut = write(dir.path(), "projected.aut", &projected);
    assert_eq!(stdout_of(&["member", &paut, "13"]), "true\n");
    assert_eq!(stdout_of(&["member", &paut, "14"]), "false\n");
}

#[test]
fn parse_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.aut", "base 2\ndim 1\nstates nope\n");
    let out = run(&["sparsity", &bad]);
    assert_eq!(out.status.code(), Some(2));
    let missing = dir.path().join("missing.aut");
    let out = run(&["sparsity", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_byte_stable_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let aut = write(dir.path(), "sample.aut", SAMPLE_LSD);
    let first = stdout_of(&["decompose", &aut]);
    let second = stdout_of(&["decompose", &aut]);
    assert_eq!(first, second);
    let first = stdout_of(&["project", &aut, "--coords", "1"]);
    let second = stdout_of(&["project", &aut, "--coords", "1"]);
    assert_eq!(first, second);
}
