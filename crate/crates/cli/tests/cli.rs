use std::path::PathBuf;
use std::process::Command;

use chowtool_cli::main_with;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("chowtool").chain(args.iter().copied()).map(String::from).collect();
    let code = main_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert!(code == 0 || code == 2, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("chowtool-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn analyze_reports_the_apex_inequality() {
    let v = json(&["analyze", "catalog:D_X9", "--kmax", "5", "--json"]);
    assert_eq!(v["status"], "Polystable");
    let details: Vec<&str> = v["checks"].as_array().unwrap().iter().filter_map(|c| c["detail"].as_str()).collect();
    assert!(details.contains(&"apex inequality 45/2 < 24"), "{details:?}");
    let (code, text, _) = run(&["analyze", "catalog:D_X9", "--kmax", "5"]);
    assert_eq!(code, 0);
    assert!(text.starts_with("D_X9: Polystable\n"));
}

#[test]
fn analyze_double_cone_over_cube6() {
    let v = json(&["analyze", "catalog:cube6_doublecone", "--kmax", "2", "--json"]);
    assert_eq!(v["status"], "NotSemistable");
    let c = &v["certificate"];
    assert_eq!(c["kind"], "function");
    assert_eq!(c["gap"], "-715/5848");
    assert_eq!(c["k"], 1);
}

#[test]
fn inconclusive_exits_with_two() {
    let (code, text, _) = run(&["analyze", "catalog:P3_blowup4", "--kmax", "3"]);
    assert_eq!(code, 2);
    assert!(text.starts_with("P3_blowup4: Inconclusive"));
}

#[test]
fn ehrhart_table_for_x3() {
    let (code, text, _) = run(&["ehrhart", "catalog:X3", "--kmax", "4"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows, ["0\t1", "1\t4", "2\t10", "3\t19", "4\t31"]);
    let v = json(&["ehrhart", "X3", "--kmax", "2", "--json"]);
    assert_eq!(v["volume"], "3/2");
    assert_eq!(v["table"][2], serde_json::json!([2, "10"]));
}

#[test]
fn input_errors_exit_with_one() {
    let (code, _, err) = run(&["analyze", "catalog:nope"]);
    assert_eq!(code, 1);
    assert!(!err.is_empty());
    assert_eq!(run(&["analyze", "no-such-name-or-file"]).0, 1);
    assert_eq!(run(&["analyze", "catalog:X3", "--bogus"]).0, 1);
    assert_eq!(run(&["analyze", "catalog:X3", "--kmax", "0"]).0, 1);
    assert_eq!(run(&["frobnicate"]).0, 1);
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{\"dim\": 2, \"vertices\": [[0, 0], [1, 0], [2, 0]]}").unwrap();
    assert_eq!(run(&["ehrhart", bad.to_str().unwrap()]).0, 1);
    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(run(&["ehrhart", bad.to_str().unwrap()]).0, 1);
    let off = scratch("off.json");
    std::fs::write(&off, "{\"dim\": 2, \"vertices\": [[1, 1], [2, 1], [1, 2]]}").unwrap();
    assert_eq!(run(&["equations", off.to_str().unwrap()]).0, 1);
}

#[test]
fn help_and_version_exit_cleanly() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("analyze"));
}

#[test]
fn json_output_is_deterministic() {
    for args in [
        &["analyze", "catalog:X6", "--kmax", "4", "--json"][..],
        &["symmetry", "catalog:cuboctahedron", "--json"],
        &["triangulate", "catalog:X4", "--k", "2", "--json"],
        &["falsify", "catalog:X4", "--kmax", "2", "--json"],
    ] {
        assert_eq!(run(args).1, run(args).1, "{args:?}");
    }
}

#[test]
fn catalog_round_trip_through_a_file() {
    let v = json(&["catalog", "show", "D_X8", "--json"]);
    assert_eq!(v["expected"]["special"], false);
    let path = scratch("d_x8.json");
    std::fs::write(&path, serde_json::to_string(&v["polytope"]).unwrap()).unwrap();
    let from_file = json(&["ehrhart", path.to_str().unwrap(), "--kmax", "3", "--json"]);
    let from_catalog = json(&["ehrhart", "catalog:D_X8", "--kmax", "3", "--json"]);
    assert_eq!(from_file, from_catalog);
    let names = json(&["catalog", "list", "--json"]);
    assert_eq!(names.as_array().unwrap().len(), 40);
}

#[test]
fn svg_output() {
    let path = scratch("x6.svg");
    let (code, _, err) = run(&["triangulate", "catalog:X6", "--k", "2", "--svg", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let doc = std::fs::read_to_string(&path).unwrap();
    assert!(doc.starts_with("<svg"));
    assert_eq!(doc.matches("<circle").count(), 19);
    let path = scratch("d4.svg");
    let (code, _, err) = run(&["symmetry", "catalog:D4", "--svg", path.to_str().unwrap()]);
    assert_ne!(code, 0);
    assert!(err.contains("dimension"));
}

#[test]
fn triangulate_reports() {
    let v = json(&["triangulate", "catalog:X3", "--k", "2", "--json"]);
    assert_eq!(v["triangulation"]["simplices"].as_array().unwrap().len(), 12);
    let (code, text, _) = run(&["triangulate", "catalog:cube3", "--boundary"]);
    assert_eq!(code, 0);
    assert!(text.contains("simplices of dimension"));
}

#[test]
fn equations_output() {
    let (code, text, _) = run(&["equations", "catalog:X3"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], format!("# {}", chowtool_core::toricgen::HEADER));
    assert_eq!(lines[1], "z0 = [0, 0]");
    assert_eq!(lines.last(), Some(&"z1 z2 z3 = z0^3"));
}

#[test]
fn symmetry_and_falsify_text() {
    let (_, text, _) = run(&["symmetry", "catalog:X6"]);
    assert!(text.contains("linear automorphisms: 12"));
    assert!(text.contains("symmetric: true"));
    let (_, text, _) = run(&["symmetry", "--json", "catalog:X3"]);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["group"]["order"], 6);
    let (code, text, _) = run(&["falsify", "catalog:cube2", "--kmax", "2"]);
    assert_eq!(code, 0);
    assert_eq!(text.lines().filter(|l| l.ends_with(", none")).count(), 2);
}

#[test]
fn binary_honours_thread_count() {
    let bin = env!("CARGO_BIN_EXE_chowtool");
    let single = Command::new(bin).args(["falsify", "catalog:X4", "--kmax", "2", "--json"]).env("CHOWTOOL_THREADS", "1").output().unwrap();
    let many = Command::new(bin).args(["falsify", "catalog:X4", "--kmax", "2", "--json"]).env("CHOWTOOL_THREADS", "4").output().unwrap();
    let junk = Command::new(bin).args(["falsify", "catalog:X4", "--kmax", "2", "--json"]).env("CHOWTOOL_THREADS", "lots").output().unwrap();
    assert!(single.status.success() && many.status.success() && junk.status.success());
    assert_eq!(single.stdout, many.stdout);
    assert_eq!(single.stdout, junk.stdout);
    let bad = Command::new(bin).args(["ehrhart", "catalog:nope"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
