use std::path::Path;
use std::process::{Command, Output};

fn facloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_facloc")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn gen_then_solve_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let inst = inst.to_str().unwrap();
    let g = facloc(&["gen", "--n", "7", "--seed", "11", "--equal-cost", "0.3", "--out", inst]);
    assert_eq!(g.status.code(), Some(0), "{}", String::from_utf8_lossy(&g.stderr));
    let from_file = facloc(&["solve", "--instance", inst]);
    let direct = facloc(&["solve", "--n", "7", "--seed", "11", "--equal-cost", "0.3"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(from_file.stdout, direct.stdout);
}

#[test]
fn three_vertex_example() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "ex.json",
        r#"{"n": 3, "distances": [[0, 1, 2], [1, 0, 1.5], [2, 1.5, 0]], "costs": [1.0, 0.4, 0.8]}"#,
    );
    let o = facloc(&["solve", "--instance", &p, "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["alg"]["total"].as_f64().unwrap() - 2.7).abs() < 1e-12);
    assert!((v["opt"]["total"].as_f64().unwrap() - 2.2).abs() < 1e-12);
    assert_eq!(v["opt_k"]["open"], serde_json::json!([0, 2]));
    assert_eq!(v["kappa"], 2);
}

#[test]
fn bad_instances_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let asym = write(
        dir.path(),
        "asym.json",
        r#"{"n": 3, "distances": [[0, 1, 2], [1.5, 0, 1.5], [2, 1.5, 0]], "costs": [1, 1, 1]}"#,
    );
    let o = facloc(&["solve", "--instance", &asym]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("distances"));

    let short = write(dir.path(), "short.json", r#"{"n": 5, "weights": [1,1,1,1,1,1,1,1,1], "costs": [1,1,1,1,1]}"#);
    let o = facloc(&["solve", "--instance", &short]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("expected 10"));

    let o = facloc(&["solve", "--instance", "/nonexistent/file.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(facloc(&["gen"]).status.code(), Some(2));
    assert_eq!(facloc(&["gen", "--n", "4"]).status.code(), Some(2));
    assert_eq!(facloc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(facloc(&["experiment", "--n", "21", "--equal-cost", "0.3", "--reps", "2"]).status.code(), Some(2));
    assert_eq!(facloc(&["verify", "--n", "5", "--equal-cost", "0.3", "--alpha", "0.1"]).status.code(), Some(2));
    assert_eq!(facloc(&["bounds", "--n", "5", "--equal-cost", "0.3", "--z-grid", "2:1:5"]).status.code(), Some(2));
}

#[test]
fn costs_file_forms() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "0.5 0.2, 0.9\n0.4");
    let b = write(dir.path(), "b.json", "[0.2, 0.4, 0.5, 0.9]");
    let x = facloc(&["solve", "--n", "4", "--seed", "3", "--costs", &a]);
    let y = facloc(&["solve", "--n", "4", "--seed", "3", "--costs", &b]);
    assert_eq!(x.status.code(), Some(0));
    assert_eq!(x.stdout, y.stdout);
    let wrong = facloc(&["solve", "--n", "5", "--seed", "3", "--costs", &b]);
    assert_eq!(wrong.status.code(), Some(2));
}

fn verdicts(stdout: &[u8]) -> Vec<(String, bool)> {
    let v: serde_json::Value = serde_json::from_slice(stdout).unwrap();
    v["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| (x["name"].as_str().unwrap().to_string(), x["pass"].as_bool().unwrap()))
        .collect()
}

#[test]
fn verify_exit_code_follows_verdicts() {
    let o = facloc(&["verify", "--n", "10", "--equal-cost", "0.3", "--reps", "20000", "--seed", "7"]);
    let vs = verdicts(&o.stdout);
    let all = vs.iter().all(|v| v.1);
    assert_eq!(o.status.code(), Some(if all { 0 } else { 1 }));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let d = v["ks"][0]["statistic"].as_f64().unwrap();
    assert!(d <= 1.628 / 20000f64.sqrt(), "{d}");
    assert!(vs.iter().any(|(name, pass)| name == "mean ALG" && *pass));
}

/// Each KS verdict is a level-0.01 test, so under the true model about 1% of
/// them fail; across 20 seeds (220 tests) seven or more failures has
/// probability below 0.5%.
#[test]
fn verify_false_alarm_rate_matches_alpha() {
    let mut tests = 0;
    let mut fails = 0;
    for seed in 1..=20 {
        let s = seed.to_string();
        let o = facloc(&["verify", "--n", "10", "--equal-cost", "0.3", "--reps", "20000", "--seed", &s]);
        for (name, pass) in verdicts(&o.stdout) {
            if name.starts_with("ks:") {
                tests += 1;
                fails += usize::from(!pass);
            }
        }
    }
    assert_eq!(tests, 220);
    assert!(fails <= 6, "{fails} of {tests} KS verdicts failed");
}

#[test]
fn bounds_csv_and_json() {
    let o = facloc(&["bounds", "--n", "12", "--equal-cost", "0.0833333"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["report"]["theorem2_value"].as_f64().unwrap().is_finite());
    assert_eq!(v["tail_grid"].as_array().unwrap().len(), 20);
    let c = facloc(&["bounds", "--n", "12", "--equal-cost", "0.0833333", "--format", "csv"]);
    assert_eq!(String::from_utf8_lossy(&c.stdout).lines().count(), 12);
}

#[test]
fn experiment_csv_rows() {
    let o = facloc(&["experiment", "--n", "6", "--equal-cost", "0.3", "--reps", "25", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("rep,seed,ALG,OPT,ratio"));
    assert_eq!(text.lines().count(), 26);
}

#[test]
fn reruns_are_byte_identical() {
    let commands: [&[&str]; 6] = [
        &["gen", "--n", "9", "--seed", "4", "--equal-cost", "0.2"],
        &["solve", "--n", "10", "--equal-cost", "0.3", "--seed", "42"],
        &["verify", "--n", "6", "--equal-cost", "0.3", "--reps", "200", "--seed", "1"],
        &["bounds", "--n", "9", "--equal-cost", "0.1"],
        &["experiment", "--kind", "bounds", "--n", "6", "--equal-cost", "0.3", "--reps", "100"],
        &["sweep", "--n", "5,7", "--equal-cost", "1", "--reps", "50", "--seed", "9"],
    ];
    for args in commands {
        let a = facloc(args);
        let b = facloc(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}
