use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn all_specs() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    v.sort();
    v
}

fn syzygy(args: &[&str], specs: &[PathBuf]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syzygy"))
        .args(args)
        .args(specs)
        .output()
        .unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_reports_constant_invariants() {
    let out = syzygy(&["analyze", "--steps", "10"], &[corpus("x2y2_ax2.toml")]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let theorem = |name: &str| {
        r["theorems"]
            .as_array()
            .unwrap()
            .iter()
            .find(|t| t["theorem"] == name)
            .unwrap()
            .clone()
    };
    assert_eq!(theorem("e0-degree")["fit"]["degree"], 0);
    assert_eq!(theorem("e1-degree")["fit"]["degree"], 0);
    assert_eq!(theorem("inequality")["equality"], true);
    for t in r["theorems"].as_array().unwrap() {
        assert_eq!(t["window_relative"], true);
    }
}

#[test]
fn oracle_passes_on_the_corpus() {
    let out = syzygy(&["oracle", "--steps", "10", "--max-degree", "12"], &all_specs());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let docs = json(&out);
    assert!(docs.as_array().unwrap().len() >= 6);
    for d in docs.as_array().unwrap() {
        assert_eq!(d["mismatches"].as_array().unwrap().len(), 0);
        assert_eq!(d["checked"], 11 * 13);
    }
}

#[test]
fn zero_module_gives_a_trivial_resolution() {
    let out = syzygy(&["resolve"], &[corpus("empty-module.toml")]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["zero_module"], true);
    assert!(r["betti"].as_array().unwrap().iter().all(|b| b == 0));
}

#[test]
fn bad_specs_are_usage_errors_with_locations() {
    let dir = tempfile::tempdir().unwrap();
    let good = std::fs::read_to_string(corpus("x2y2_ax2.toml")).unwrap();
    let cases = [
        ("p4.toml", good.replace("p = 101", "p = 4"), "not a prime"),
        ("inh.toml", good.replace(r#"[["x^2"]]"#, r#"[["x^2 + y"]]"#), "homogeneous"),
        ("syn.toml", good.replace(r#"[["x^2"]]"#, r#"[["x^^2"]]"#), ":"),
    ];
    for (file, text, needle) in cases {
        let path = dir.path().join(file);
        std::fs::write(&path, text).unwrap();
        let out = syzygy(&["resolve"], std::slice::from_ref(&path));
        assert_eq!(out.status.code(), Some(2), "{file}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "{file}: {err}");
        let located = format!("{}:", path.display());
        assert!(err.contains(&located), "{file}: {err}");
    }
}

#[test]
fn zero_trials_is_a_usage_error() {
    let out = syzygy(&["operators", "--trials", "0"], &[corpus("x3_ax.toml")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn runs_are_deterministic() {
    let specs = all_specs();
    let a = syzygy(&["analyze", "--seed", "7"], &specs);
    let b = syzygy(&["analyze", "--seed", "7"], &specs);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn reports_from_the_cache_are_identical() {
    let cache = tempfile::tempdir().unwrap();
    let c = cache.path().to_str().unwrap();
    let spec = [corpus("ci_x2y2_axy.toml")];
    let fresh = syzygy(&["analyze", "--steps", "8"], &spec);
    let first = syzygy(&["analyze", "--steps", "8", "--cache-dir", c], &spec);
    let second = syzygy(&["analyze", "--steps", "8", "--cache-dir", c], &spec);
    assert_eq!(fresh.stdout, first.stdout);
    assert_eq!(first.stdout, second.stdout);
    let files: Vec<_> = std::fs::read_dir(cache.path()).unwrap().collect();
    assert_eq!(files.len(), 1);
}

#[test]
fn cached_resolutions_are_extended() {
    let cache = tempfile::tempdir().unwrap();
    let c = cache.path().to_str().unwrap();
    let spec = [corpus("x2y2_k.toml")];
    syzygy(&["resolve", "--steps", "3", "--cache-dir", c], &spec);
    let out = syzygy(&["resolve", "--steps", "7", "--cache-dir", c], &spec);
    assert!(String::from_utf8_lossy(&out.stderr).contains("extending"));
    let direct = syzygy(&["resolve", "--steps", "7"], &spec);
    assert_eq!(out.stdout, direct.stdout);
    let shorter = syzygy(&["resolve", "--steps", "5", "--cache-dir", c], &spec);
    assert_eq!(json(&shorter)["betti"].as_array().unwrap().len(), 6);
}

#[test]
fn stale_cache_is_recomputed_with_a_warning() {
    let cache = tempfile::tempdir().unwrap();
    let c = cache.path().to_str().unwrap();
    let spec = [corpus("xy2_ax.toml")];
    let before = syzygy(&["resolve", "--steps", "4", "--cache-dir", c], &spec);
    let file = std::fs::read_dir(cache.path()).unwrap().next().unwrap().unwrap().path();
    let text = std::fs::read_to_string(&file).unwrap();
    std::fs::write(&file, text.replacen("\"version\": 1", "\"version\": 99", 1)).unwrap();
    let after = syzygy(&["resolve", "--steps", "4", "--cache-dir", c], &spec);
    assert_eq!(after.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&after.stderr).contains("version 99"));
    assert_eq!(before.stdout, after.stdout);
    assert!(std::fs::read_to_string(&file).unwrap().contains("\"version\": 1"));
}

#[test]
fn exhausted_budget_gives_partial_output() {
    let out = syzygy(&["resolve", "--time-limit", "0"], &[corpus("ci_x2y2_k.toml")]);
    assert_eq!(out.status.code(), Some(3));
    let r = json(&out);
    assert_eq!(r["truncated"], true);
    assert_eq!(r["steps"], 0);
}

#[test]
fn report_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = syzygy(
        &["report", "--steps", "6", "--out-dir", dir.path().to_str().unwrap()],
        &[corpus("xy2_ax.toml")],
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("xy2_ax.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("i,beta,e0,e1,reg,mu"));
    assert_eq!(csv.lines().filter(|l| l.starts_with("fit:")).count(), 3);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("xy2_ax.json")).unwrap()).unwrap();
    assert_eq!(report["steps"].as_array().unwrap().len(), 7);
    assert_eq!(report["provenance"]["seed"], 0);
}

#[test]
fn hilbert_and_operators_commands() {
    let out = syzygy(&["hilbert", "--steps", "4"], &[corpus("x3_ax.toml")]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let e0: Vec<i64> = r["steps"].as_array().unwrap().iter().map(|s| s["e0"].as_i64().unwrap()).collect();
    assert_eq!(e0, vec![1, 2, 1, 2, 1]);
    let out = syzygy(&["operators", "--steps", "6"], &[corpus("x2y2_ax2.toml")]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["identity"]["ok"], true);
    assert!(r["matrix_factorizations"].as_array().unwrap().iter().all(|m| m["ok"] == true));
}
