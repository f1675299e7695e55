use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn wsnlife(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wsnlife")).args(args).output().expect("binary runs")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data").join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_exit_codes() {
    let inst = data("figure1_instance.json");
    let ok = wsnlife(&["validate", "--instance", s(&inst), "--solution", s(&data("figure1_solution.json")), "--rows"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert!(text.contains("L = 2"));
    assert!(text.contains("row substitution: 0 violated"));

    let dir = tempfile::tempdir().unwrap();
    let mut sol: serde_json::Value = serde_json::from_str(&fs::read_to_string(data("figure1_solution.json")).unwrap()).unwrap();
    sol["x"].as_array_mut().unwrap().remove(0);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, sol.to_string()).unwrap();
    let out = wsnlife(&["validate", "--instance", s(&inst), "--solution", s(&bad), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["feasible"], serde_json::json!(false));

    let missing = wsnlife(&["validate", "--instance", "/nonexistent.json", "--solution", s(&bad)]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn generate_solve_and_export() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let sol = dir.path().join("sol.json");
    let out = wsnlife(&["generate", "--nodes", "9", "--sinks", "1", "--horizon", "3", "--seed", "4", "--out", s(&inst)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = wsnlife(&["solve", "--instance", s(&inst), "--algo", "dh", "--sinks", "5", "--out", s(&sol)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(wsnlife(&["validate", "--instance", s(&inst), "--solution", s(&sol)]).status.code(), Some(0));

    let out = wsnlife(&["export-milp", "--instance", s(&inst), "--solution", s(&sol), "--out", s(dir.path())]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let lp = fs::read_to_string(dir.path().join("spsrc_N9_K2_T3.lp")).unwrap();
    assert!(lp.starts_with("\\ spsrc N=9 K=2 T=3"));
    assert!(lp.trim_end().ends_with("End"));
    let values = dir.path().join("spsrc_N9_K2_T3.values");
    let out = wsnlife(&["validate", "--instance", s(&inst), "--values", s(&values), "--rows"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));

    let capped = wsnlife(&["export-milp", "--instance", s(&inst), "--row-cap", "10", "--out", s(dir.path())]);
    assert_eq!(capped.status.code(), Some(2));
    let bad_sink = wsnlife(&["solve", "--instance", s(&inst), "--algo", "ch", "--sinks", "10"]);
    assert_eq!(bad_sink.status.code(), Some(2));
}

#[test]
fn bench_reports_are_reproducible() {
    let args = [
        "bench", "--algos", "ch,dh", "--sinks", "2", "--budgets", "low", "--energies", "low", "--sizes", "16",
        "--replications", "2", "--horizon", "60", "--no-timing",
    ];
    let a = wsnlife(&args);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let b = wsnlife(&seq);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let csv = String::from_utf8(a.stdout).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "algorithm,S,budget_level,energy_level,N,seed,L,cpu_seconds");
    assert_eq!(lines.len(), 1 + 2 * 3);
    assert!(lines[3].starts_with("CH,2,low,low,16,mean,"));

    let empty = wsnlife(&["bench", "--algos", "", "--no-timing"]);
    assert!(empty.status.success());
    assert_eq!(String::from_utf8(empty.stdout).unwrap().lines().count(), 1);
}

#[test]
fn oracle_on_a_tiny_instance() {
    let out = wsnlife(&["oracle", "--tiny", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let l: usize = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!(l <= 3);
}
