use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;

const FIXTURE: &str = "S,V,B\n1,5,2\n5,10,6\n10,12,7\n12,17,13\n17,1,18\n";

fn pairrank(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pairrank"))
        .args(args)
        .current_dir(dir)
        .env_remove("PAIRRANK_THREADS")
        .output()
        .unwrap()
}

fn ok_json(args: &[&str], dir: &Path) -> Value {
    let out = pairrank(args, dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn with_file(name: &str, contents: &str) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join(name), contents).unwrap();
    dir
}

#[test]
fn aggregate_bt_orders_fixture() {
    let dir = with_file("scores.csv", FIXTURE);
    let v = ok_json(&["aggregate", "--input", "scores.csv", "--mechanism", "bt", "--json"], dir.path());
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["run_config"]["seed"], 0);
    let lambda = &v["result"]["results"][0]["values"];
    let (s, vv, b) = (lambda["S"].as_f64().unwrap(), lambda["V"].as_f64().unwrap(), lambda["B"].as_f64().unwrap());
    assert!(vv > b && b > s, "{lambda}");
}

#[test]
fn aggregate_all_gives_five_blocks_and_disagreement() {
    let dir = with_file("scores.csv", FIXTURE);
    let v = ok_json(&["aggregate", "-i", "scores.csv", "--mechanism", "all", "--format", "json"], dir.path());
    let results = v["result"]["results"].as_array().unwrap();
    let names: Vec<&str> = results.iter().map(|r| r["mechanism"].as_str().unwrap()).collect();
    assert_eq!(names, ["mean", "median", "bt", "elo", "trueskill"]);
    assert_eq!(v["result"]["disagreement"].as_array().unwrap().len(), 10);
}

#[test]
fn missing_input_exits_2_and_names_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = pairrank(&["aggregate", "--input", "no_such_scores.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no_such_scores.csv"));
}

#[test]
fn malformed_input_exits_2() {
    let dir = with_file("bad.csv", "A,B\n1,x\n");
    let out = pairrank(&["aggregate", "--input", "bad.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.csv") && err.contains("non-numeric"), "{err}");
}

#[test]
fn conflicting_format_flags_exit_2() {
    let dir = with_file("scores.csv", FIXTURE);
    let out = pairrank(&["aggregate", "-i", "scores.csv", "--json", "--format", "csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = pairrank(&["aggregate", "-i", "scores.csv", "--format", "svg"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_convergence_exits_1() {
    let dir = with_file("scores.csv", FIXTURE);
    let out = pairrank(&["aggregate", "-i", "scores.csv", "-m", "bt", "--bt-max-iterations", "1"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn compare_fixture_sign_test() {
    let dir = with_file("scores.csv", FIXTURE);
    let v = ok_json(
        &["compare", "-i", "scores.csv", "--mechanism", "bt", "--alpha", "0.05", "--pair", "S,B", "--json"],
        dir.path(),
    );
    let d = &v["result"][0]["decisions"][0];
    assert_eq!(d["decision"], "inconclusive");
    assert!((d["p_value"].as_f64().unwrap() - 0.375).abs() < 1e-12);
    assert_eq!(v["run_config"]["alpha"], 0.05);
}

#[test]
fn compare_rejects_alpha_out_of_range() {
    let dir = with_file("scores.csv", FIXTURE);
    let out = pairrank(&["compare", "-i", "scores.csv", "--alpha", "1.5"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compare_identical_systems_is_inconclusive() {
    let dir = with_file("same.csv", "a,b\n1,1\n3,3\n2,2\n7,7\n5,5\n");
    let v = ok_json(&["compare", "-i", "same.csv", "--tests", "all", "--json"], dir.path());
    let pair = &v["result"][0];
    let decisions = pair["decisions"].as_array().unwrap();
    assert_eq!(decisions.len(), 3);
    assert!(decisions.iter().all(|d| d["decision"] == "inconclusive"));
    assert_eq!(pair["tests"].as_array().unwrap().len(), 4);
}

#[test]
fn compare_csv_has_run_config_line() {
    let dir = with_file("scores.csv", FIXTURE);
    let out = pairrank(&["compare", "-i", "scores.csv", "--format", "csv", "--seed", "5"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let first = text.lines().next().unwrap();
    let config: Value = serde_json::from_str(first.strip_prefix("# run_config: ").unwrap()).unwrap();
    assert_eq!(config["run_config"]["seed"], 5);
    assert_eq!(text.lines().nth(1).unwrap(), "first,second,kind,name,statistic,p_value,decision");
}

#[test]
fn simulate_is_reproducible_and_artifacts_are_readable() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str| {
        vec!["simulate", "--out", out, "--seed", "3", "--types", "1,3", "--outliers", "0,0.1", "--systems", "4",
             "--instances", "20", "--replicates", "4"]
    };
    let start = Instant::now();
    for out in ["a", "b"] {
        let o = pairrank(&args(out), dir.path());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert!(start.elapsed() < Duration::from_secs(60));
    let read = |p: &str| std::fs::read(dir.path().join(p)).unwrap();
    // The out directory name is part of the run config, so compare bodies.
    let body = |bytes: Vec<u8>| String::from_utf8(bytes).unwrap().lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(body(read("a/report.csv")), body(read("b/report.csv")));

    let manifest: Value = serde_json::from_slice(&read("a/manifest.json")).unwrap();
    assert_eq!(manifest["result"]["count"], 16);
    let first = &manifest["result"]["setups"][0];
    assert_eq!(first["file"], "setups/setup_00000.csv");
    assert!(first["latent"].as_object().unwrap().len() == 4);

    // A generated setup, run-config comment and all, feeds back into the tool.
    let v = ok_json(&["aggregate", "-i", "a/setups/setup_00000.csv", "-m", "mean", "--json"], dir.path());
    assert_eq!(v["result"]["n_instances"], 20);
}

#[test]
fn simulate_same_out_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["simulate", "--out", "o", "--seed", "9", "--replicates", "3", "--no-setups"];
    assert!(pairrank(&args, dir.path()).status.success());
    let first = std::fs::read(dir.path().join("o/report.csv")).unwrap();
    assert!(pairrank(&args, dir.path()).status.success());
    assert_eq!(first, std::fs::read(dir.path().join("o/report.csv")).unwrap());
}

#[test]
fn simulate_unwritable_out_exits_2() {
    let dir = with_file("blocker", "not a directory");
    let out = pairrank(&["simulate", "--out", "blocker/sub", "--replicates", "1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("blocker/sub"));
}

#[test]
fn simulate_rejects_bad_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = pairrank(&["simulate", "--out", "o", "--outliers", "1.5"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = pairrank(&["simulate", "--out", "o", "--paper-grid", "--types", "1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn plot_fixture_pair() {
    let dir = with_file("scores.csv", FIXTURE);
    let out = pairrank(&["plot", "-i", "scores.csv", "--pair", "S,B", "--out", "plots"], dir.path());
    assert!(out.status.success());
    let svg = std::fs::read_to_string(dir.path().join("plots/plot_S__B.svg")).unwrap();
    assert!(svg.contains("<svg") && svg.trim_end().ends_with("</svg>"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("plots/plot_S__B.json")).unwrap()).unwrap();
    assert_eq!(v["result"]["mass_above_diagonal"], 0.8);
    assert_eq!(v["result"]["geometric_criterion"]["median"], "S");

    let all = ok_json(&["plot", "-i", "scores.csv", "--json"], dir.path());
    assert_eq!(all["result"].as_array().unwrap().len(), 3);
    let out = pairrank(&["plot", "-i", "scores.csv", "--format", "svg"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_two_systems_is_empty() {
    let dir = with_file("two.csv", "A,B\n1,2\n2,3\n4,1\n");
    let v = ok_json(&["scan", "-i", "two.csv", "--json"], dir.path());
    assert_eq!(v["result"]["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn scan_cyclic_triple_reports_one() {
    let dir = with_file("cyc.json", r#"{"systems": ["A", "B", "C"], "scores": [[1, 2, 3], [2, 3, 1], [3, 1, 2]]}"#);
    let v = ok_json(&["scan", "-i", "cyc.json", "--json"], dir.path());
    let violations = v["result"]["violations"].as_array().unwrap();
    assert_eq!(violations.len(), 1);
    assert_eq!(violations[0]["triple"], serde_json::json!(["A", "B", "C"]));
}

#[test]
fn threads_env_is_accepted() {
    let dir = with_file("scores.csv", FIXTURE);
    let out = Command::new(env!("CARGO_BIN_EXE_pairrank"))
        .args(["aggregate", "-i", "scores.csv"])
        .current_dir(dir.path())
        .env("PAIRRANK_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = pairrank(&["--threads", "0", "aggregate", "-i", "scores.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}
