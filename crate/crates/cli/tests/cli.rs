//! End-to-end tests of the `leafspace` binary: exit codes, output formats,
//! and pipeline composition.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use leafspace_core::corpus;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_leafspace"))
}

fn write_model(name: &str, builtin: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("leafspace-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    let ls = corpus::builtin(builtin).unwrap();
    std::fs::write(&path, corpus::serialize(&ls)).unwrap();
    path
}

fn write_file(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("leafspace-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn n_prints_the_integer() {
    let file = write_model("y-neg.lsp", "y-neg");
    let out = run(&["n", file.to_str().unwrap(), "X1", "X2"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "1\n");
    let out = run(&["n", file.to_str().unwrap(), "X2", "X1"]);
    assert_eq!(stdout_of(&out), "-1\n");
}

#[test]
fn path_on_figure_alpha_prints_eight_segments_seven_cusps() {
    let file = write_model("figure-alpha.lsp", "figure-alpha");
    let out = run(&["path", file.to_str().unwrap(), "v:t1", "v:t16"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("seg ")).count(), 8);
    assert_eq!(text.lines().filter(|l| l.starts_with("cusp ")).count(), 7);
    assert!(text.contains("trivial=1"));
}

#[test]
fn end_order_lists_one_end_per_line() {
    let file = write_model("y3.lsp", "y3");
    let out = run(&["end-order", file.to_str().unwrap()]);
    assert_eq!(stdout_of(&out), "X3\nX2\nX1\n");
}

#[test]
fn gen_pipes_into_check() {
    let gen = bin()
        .args(["gen", "--seed", "7", "--junctions", "10"])
        .output()
        .unwrap();
    assert!(gen.status.success());
    let mut check = bin()
        .args(["check", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    check
        .stdin
        .take()
        .unwrap()
        .write_all(&gen.stdout)
        .unwrap();
    let out = check.wait_with_output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.trim_end().ends_with("PASS"));
    assert!(text.lines().filter(|l| l.starts_with("PASS ")).count() >= 6);
    // Nonzero pair and triple counts on this seed.
    let count_of = |name: &str| -> u64 {
        text.lines()
            .find(|l| l.contains(name))
            .and_then(|l| l.rsplit("checks=").next())
            .and_then(|c| c.trim().parse().ok())
            .unwrap_or(0)
    };
    assert!(count_of("antisymmetry-and-parity") > 0);
    assert!(count_of("triangle-and-transitivity") > 0);
}

#[test]
fn deterministic_output() {
    let a = run(&["gen", "--seed", "42", "--junctions", "8", "--bias", "1/3"]);
    let b = run(&["gen", "--seed", "42", "--junctions", "8", "--bias", "1/3"]);
    assert_eq!(a.stdout, b.stdout);
    let file = write_model("two-sided.lsp", "two-sided");
    let a = run(&["check", file.to_str().unwrap()]);
    let b = run(&["check", file.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes_and_error_reporting() {
    // Domain error: violations to stderr, one per line, exit 1.
    let bad = write_file("bad.lsp", "vertex u\nvertex v\nedge e0 v:u v:v\n");
    let out = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(err.lines().count() >= 2, "one violation per line: {err}");
    assert!(stdout_of(&out).is_empty());
    // Usage error: exit 2.
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
    // Success: exit 0.
    let good = write_model("ok.lsp", "line");
    let out = run(&["validate", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out), "ok\n");
    // Unicusp on the line model is a domain error.
    let out = run(&["unicusp", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn json_reports_carry_format_version() {
    let file = write_model("y-neg-json.lsp", "y-neg");
    for args in [
        vec!["validate", file.to_str().unwrap()],
        vec!["cataclysms", file.to_str().unwrap()],
        vec!["n", file.to_str().unwrap(), "X1", "X2"],
        vec!["end-order", file.to_str().unwrap()],
        vec!["check", file.to_str().unwrap()],
        vec!["unicusp", file.to_str().unwrap()],
    ] {
        let mut full = args.clone();
        full.push("--json");
        let out = run(&full);
        let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
        assert_eq!(value["format"], 1, "args {args:?}");
    }
}

#[test]
fn equiv_ok_and_forced_counterexample() {
    let file = write_model("y-neg-equiv.lsp", "y-neg");
    let identity = write_file("id.map", "v w w\nv u u\nv v v\n");
    let out = run(&[
        "equiv",
        file.to_str().unwrap(),
        file.to_str().unwrap(),
        identity.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "ok\n");

    let swap = write_file("swap.map", "v w w\nv u v\nv v u\nend X1 X2\nend X2 X1\nend n0 n0\n");
    let out = run(&[
        "equiv",
        file.to_str().unwrap(),
        file.to_str().unwrap(),
        swap.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(err.contains("NotAdmissible"), "stderr: {err}");

    let out = run(&[
        "equiv",
        file.to_str().unwrap(),
        file.to_str().unwrap(),
        swap.to_str().unwrap(),
        "--force",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(
        stdout_of(&out),
        "counterexample x1=X1 x2=X2 n_source=1 n_target=-1\n"
    );
}

#[test]
fn triangle_prints_counts_delta_and_case() {
    let file = write_model("y3-tri.lsp", "y3");
    let out = run(&["triangle", file.to_str().unwrap(), "X1", "X2", "X3"]);
    assert!(out.status.success());
    assert_eq!(
        stdout_of(&out),
        "n12=1 n23=1 n13=1 delta=-1 case=Case3 turn=both\n"
    );
}

#[test]
fn export_emits_dot() {
    let file = write_model("y3-dot.lsp", "y3");
    let out = run(&["export", file.to_str().unwrap()]);
    let text = stdout_of(&out);
    assert!(text.starts_with("digraph leafspace {"));
    assert!(text.contains("label=\"- [u1<u2<u3]\""));
}
