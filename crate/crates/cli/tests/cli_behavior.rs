//! Black-box tests of the installed binary: exit codes, output shape,
//! and byte-level determinism of repeated invocations.

use std::path::Path;
use std::process::{Command, Output};

use cspar_core::fixtures;
use cspar_core::relation::ValuedRelation;
use tempfile::TempDir;

fn cspar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cspar"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn analyze_prints_the_full_report_in_both_formats() {
    let dir = TempDir::new().unwrap();
    let rel = write(dir.path(), "r2.rel", &fixtures::r2_nonmonotone().to_text());

    let human = cspar(&["analyze", "--relation", &rel]);
    assert_eq!(human.status.code(), Some(0));
    let text = stdout(&human);
    assert!(text.contains("case: tuple-skewed"));
    assert!(text.contains("plentifulness: 2"));
    assert!(text.contains("violation: s=0022 t=1022"));

    let machine = cspar(&["analyze", "--relation", &rel, "--machine"]);
    assert_eq!(machine.status.code(), Some(0));
    let lines = stdout(&machine);
    assert!(lines.contains("case=tuple-skewed"));
    assert!(lines.contains("k=2"));
    assert!(lines.contains("exponent=2"));
    assert!(lines.lines().all(|l| l.contains('=')), "machine lines are key=value");
}

#[test]
fn parse_errors_exit_2_with_a_line_number() {
    let dir = TempDir::new().unwrap();
    let rel = write(dir.path(), "broken.rel", "r=2 domains=2,2\n0 1\nbad line here\n");
    let out = cspar(&["analyze", "--relation", &rel]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "got: {}", stderr(&out));
}

#[test]
fn empty_support_exits_3() {
    let dir = TempDir::new().unwrap();
    let rel = write(dir.path(), "empty.rel", "r=2 domains=2,2\n");
    let out = cspar(&["analyze", "--relation", &rel]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("empty support"));
}

#[test]
fn usage_errors_exit_2() {
    let out = cspar(&["analyze"]);
    assert_eq!(out.status.code(), Some(2), "missing required flag");
    let out = cspar(&["sparsify", "--relation", "x", "--instance", "y", "--eps", "1/0"]);
    assert_eq!(out.status.code(), Some(2), "zero denominator");
    let out = cspar(&["gen", "--relation", "x", "--kind", "circular", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2), "unknown kind");
    let out = cspar(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("sparsify"));
}

#[test]
fn missing_input_files_exit_2_and_name_the_path() {
    let out = cspar(&["analyze", "--relation", "/definitely/not/here.rel"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("/definitely/not/here.rel"));
}

#[test]
fn pipeline_round_trips_through_files() {
    let dir = TempDir::new().unwrap();
    let rel = write(dir.path(), "cut.rel", &fixtures::cut().to_text());
    let inst = dir.path().join("cut.inst");
    let inst = inst.to_str().unwrap();
    let sp = dir.path().join("cut.sp");
    let sp = sp.to_str().unwrap();

    let gen = cspar(&[
        "gen", "--relation", &rel, "--kind", "uniform", "--n", "8", "--out", inst,
    ]);
    assert_eq!(gen.status.code(), Some(0));

    let plan = cspar(&[
        "sparsify", "--relation", &rel, "--instance", inst, "--eps", "1/4", "--out", sp,
    ]);
    assert_eq!(plan.status.code(), Some(0));
    assert!(stdout(&plan).contains("plan: mode=keep-all"));

    let verdict = cspar(&[
        "verify", "--relation", &rel, "--instance", inst, "--sparsifier", sp, "--eps", "1/4",
    ]);
    assert_eq!(verdict.status.code(), Some(0));
    assert!(stdout(&verdict).contains("verdict: pass"));

    // An undersized random instance loses assignments entirely, so
    // verification must fail with exit 1.
    let bad = dir.path().join("bad.inst");
    let bad = bad.to_str().unwrap();
    cspar(&[
        "gen", "--relation", &rel, "--kind", "uniform", "--n", "8", "--m", "3", "--seed", "1",
        "--out", bad,
    ]);
    let failing = cspar(&[
        "verify", "--relation", &rel, "--instance", inst, "--sparsifier", bad, "--eps", "1/4",
    ]);
    assert_eq!(failing.status.code(), Some(1));
    assert!(stdout(&failing).contains("verdict: fail"));
}

#[test]
fn census_runs_on_complete_instances_only() {
    let dir = TempDir::new().unwrap();
    let rel = write(
        dir.path(),
        "dec.rel",
        &ValuedRelation::from_bitstrings(&["00", "01"]).unwrap().to_text(),
    );
    let inst = dir.path().join("dec.inst");
    let inst = inst.to_str().unwrap();
    cspar(&["gen", "--relation", &rel, "--kind", "uniform", "--n", "6", "--out", inst]);

    let table = cspar(&[
        "census", "--relation", &rel, "--instance", inst, "--thresholds", "2,6",
    ]);
    assert_eq!(table.status.code(), Some(0));
    let text = stdout(&table);
    assert!(text.contains("threshold  count"));
    assert!(text.contains("distinct nonzero codewords"));

    let machine = cspar(&[
        "census", "--relation", &rel, "--instance", inst, "--thresholds", "2,6", "--machine",
    ]);
    assert!(stdout(&machine).contains("count[6]=6"));

    let partial = dir.path().join("partial.inst");
    let partial = partial.to_str().unwrap();
    cspar(&[
        "gen", "--relation", &rel, "--kind", "uniform", "--n", "6", "--m", "4", "--out", partial,
    ]);
    let refused = cspar(&[
        "census", "--relation", &rel, "--instance", partial, "--thresholds", "2",
    ]);
    assert_eq!(refused.status.code(), Some(3));
    assert!(stderr(&refused).contains("complete"));
}

#[test]
fn witness_reports_the_disjoint_family() {
    let dir = TempDir::new().unwrap();
    let rel = write(
        dir.path(),
        "ends.rel",
        &ValuedRelation::from_bitstrings(&["000", "001"]).unwrap().to_text(),
    );
    let out = cspar(&["witness", "--relation", &rel, "--n", "5", "--kind", "rpartite"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("members: 25"));
    assert!(text.contains("satisfied clauses per member: 5..=5"));
    assert!(text.contains("pairwise disjoint: yes"));

    let machine = cspar(&[
        "witness", "--relation", &rel, "--n", "5", "--kind", "rpartite", "--machine",
    ]);
    assert!(stdout(&machine).contains("implied_bound=25"));

    let refused = cspar(&["witness", "--relation", &rel, "--n", "5", "--kind", "symset"]);
    assert_eq!(refused.status.code(), Some(3));
}

#[test]
fn demos_run_and_unknown_names_list_the_menu() {
    let cut = cspar(&["demo", "cut"]);
    assert_eq!(cut.status.code(), Some(0));
    assert!(stdout(&cut).contains("mode=keep-all"));
    assert!(stdout(&cut).contains("verdict: pass"));

    let full = cspar(&["demo", "full-relation"]);
    assert_eq!(full.status.code(), Some(0));
    assert!(stdout(&full).contains("mode=single-constraint"));
    assert!(stdout(&full).contains("max relative deviation: 0"));

    let unknown = cspar(&["demo", "does-not-exist"]);
    assert_eq!(unknown.status.code(), Some(2));
    let listing = stderr(&unknown);
    for name in ["cut", "full-relation", "r2-nonmonotone"] {
        assert!(listing.contains(name), "menu should offer {name}");
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let rel = write(dir.path(), "r2.rel", &fixtures::r2_nonmonotone().to_text());
    let inst = dir.path().join("dense.inst");
    let inst = inst.to_str().unwrap();
    cspar(&[
        "gen", "--relation", &rel, "--kind", "uniform", "--n", "6", "--m", "7000", "--seed", "9",
        "--out", inst,
    ]);

    let args = ["sparsify", "--relation", &rel, "--instance", inst, "--eps", "1/2", "--seed", "3"];
    let first = cspar(&args);
    let second = cspar(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stderr, second.stderr);
    assert!(stderr(&first).contains("mode=bundled"));

    // Thread count must not change any output byte.
    let pinned = cspar(&[
        "--threads", "1", "sparsify", "--relation", &rel, "--instance", inst, "--eps", "1/2",
        "--seed", "3",
    ]);
    assert_eq!(first.stdout, pinned.stdout);
    assert_eq!(first.stderr, pinned.stderr);
}
