// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bench(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../benchmarks")
        .join(name)
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn xtalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xtalk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn synth_full_adder_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let fa = bench("full_adder.eqn");
    let o = xtalk(&[
        "synth",
        fa.to_str().unwrap(),
        "--check",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report = fs::read_to_string(dir.path().join("full_adder.report.txt")).unwrap();
    assert!(report.contains("transistors: 10"), "{report}");
    assert!(report.contains("gates:       2"), "{report}");

    let expr = fs::read_to_string(dir.path().join("full_adder.expr")).unwrap();
    assert!(expr.contains("X_wmaj(") && expr.contains("X_min("), "{expr}");

    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("full_adder.json")).unwrap()).unwrap();
    assert_eq!(json["gates"].as_array().unwrap().len(), 2);
    assert_eq!(json["inputs"].as_array().unwrap().len(), 3);
}

#[test]
fn synth_emits_only_what_was_asked() {
    let dir = tempfile::tempdir().unwrap();
    let fa = bench("full_adder.eqn");
    let o = xtalk(&[
        "synth",
        fa.to_str().unwrap(),
        "--emit",
        "expr",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(dir.path().join("full_adder.expr").exists());
    assert!(!dir.path().join("full_adder.json").exists());
}

#[test]
fn synth_output_is_deterministic() {
    let m = bench("mult2.eqn");
    let a = xtalk(&["synth", m.to_str().unwrap()]);
    let b = xtalk(&["synth", m.to_str().unwrap()]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn malformed_input_exits_2_with_position() {
    let o = xtalk(&["synth", data("malformed.eqn").to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("3:14"), "{}", stderr(&o));
}

#[test]
fn missing_input_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let o = xtalk(&["synth", dir.path().join("absent.eqn").to_str().unwrap()]);
    assert_eq!(code(&o), 4);
}

#[test]
fn bad_cost_table_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("costs.toml");
    fs::write(&p, "CT_MAJ3 = -1\n").unwrap();
    let fa = bench("full_adder.eqn");
    let o = xtalk(&["synth", fa.to_str().unwrap(), "--cost-table", p.to_str().unwrap()]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn cost_table_override_changes_the_count() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("costs.toml");
    fs::write(&p, "INV = 4\n").unwrap();
    let fa = bench("full_adder.eqn");
    let o = xtalk(&[
        "synth",
        fa.to_str().unwrap(),
        "--emit",
        "expr",
        "--cost-table",
        p.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("transistors: 12"), "{}", stdout(&o));
}

#[test]
fn mult2_synth_check_passes() {
    let m = bench("mult2.eqn");
    let o = xtalk(&["synth", m.to_str().unwrap(), "--check"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn check_file_against_itself() {
    let m = bench("mult2.eqn");
    let o = xtalk(&["check", m.to_str().unwrap(), m.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("equivalent"));
}

#[test]
fn check_full_adder_forms_agree() {
    let a = bench("full_adder.eqn");
    let b = bench("full_adder_majxor.eqn");
    let o = xtalk(&["check", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn check_reports_lowest_counterexample() {
    // the two files differ at (1,0,1,0) and (1,1,1,0) over A1 A0 B1 B0;
    // the lower row index is reported
    let a = bench("mult2.eqn");
    let b = bench("mult2_printed_decomposition.eqn");
    let o = xtalk(&["check", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    let err = stderr(&o);
    assert!(err.contains("(A1,A0,B1,B0) = (1,0,1,0)"), "{err}");
}

#[test]
fn empty_manifest_gives_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("empty.toml");
    fs::write(&p, "").unwrap();
    let out = dir.path().join("out");
    let o = xtalk(&["bench", p.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = fs::read_to_string(out.join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1);
}

#[test]
fn missing_required_manifest_entry_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("m.toml");
    fs::write(&p, "[[bench]]\nname = \"gone\"\npath = \"gone.eqn\"\n").unwrap();
    let o = xtalk(&["bench", p.to_str().unwrap()]);
    assert_eq!(code(&o), 4, "{}", stderr(&o));
}

#[test]
fn suite_bench_has_every_row() {
    let dir = tempfile::tempdir().unwrap();
    let o = xtalk(&[
        "bench",
        bench("suite.toml").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let mut rd = csv::Reader::from_path(dir.path().join("report.csv")).unwrap();
    let headers = rd.headers().unwrap().clone();
    let col = |h: &str| headers.iter().position(|x| x == h).unwrap();
    let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| &r[col("equivalent")] == "yes"));

    let fa = rows.iter().find(|r| &r[col("name")] == "full_adder").unwrap();
    assert_eq!(&fa[col("cmos_t")], "18");
    assert_eq!(&fa[col("ours_t")], "10");
    // (18 - 10) / 18 = 44.4%
    assert_eq!(&fa[col("r_cmos_t_pct")], "44");

    let txt = fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert_eq!(txt, stdout(&o));
}

#[test]
fn fuzz_small_run_is_clean() {
    let o = xtalk(&["fuzz", "--seed", "3", "--count", "50"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("0 failed"));
}
