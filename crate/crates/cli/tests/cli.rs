use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).display().to_string()
}

fn schur(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schur")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = schur(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn exit_code(args: &[&str]) -> i32 {
    schur(args).status.code().expect("exit code")
}

#[test]
fn qubit_table_reproduces_published_columns() {
    let expect = [
        (7, 9),
        (9, 12),
        (11, 14),
        (13, 15),
        (17, 18),
        (20, 21),
        (23, 23),
        (26, 24),
        (29, 25),
        (32, 26),
        (35, 27),
        (38, 28),
    ];
    let rows = json(&["qubit-table", "--max-n", "15"]);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 12);
    for (row, (o, m)) in rows.iter().zip(expect) {
        assert_eq!((row["original"].as_u64().unwrap(), row["modified"].as_u64().unwrap()), (o, m));
    }
    let measured = json(&["qubit-table", "--min-n", "4", "--max-n", "7", "--measured"]);
    for row in measured.as_array().unwrap() {
        assert_eq!(row["original"], row["measured_original"]);
        assert_eq!(row["modified"], row["measured_modified"]);
    }
}

#[test]
fn six_qubit_local_census() {
    let doc = json(&["blocks", "--tree", &data("six_qubit_tree.json"), "--family", "Q"]);
    let census = &doc["census"];
    assert_eq!(census["7"], 1);
    assert_eq!(census["5"], 5);
    assert_eq!(census["3"], 9);
    assert_eq!(census["1"], 5);
    let sub = json(&["blocks", "--tree", &data("six_qubit_tree.json"), "--family", "subgroup", "--subset", "1,2,3,4"]);
    assert!(sub["blocks"].as_array().unwrap().len() > 20);
}

#[test]
fn coefficients_are_exact() {
    let zero = json(&["coeff", "cg", "1/2,1/2,1/2,1/2,1,0"]);
    assert_eq!(zero["value"]["sign"], 0);
    let half = json(&["coeff", "cg", "1/2,1/2,1/2,-1/2,1,0"]);
    assert_eq!(half["exact"], "1*sqrt(1/2)");
    assert_eq!((half["value"]["num"].as_u64(), half["value"]["den"].as_u64()), (Some(1), Some(2)));
    let six = json(&["coeff", "6j", "1/2,1/2,0,1/2,1/2,0"]);
    assert_eq!(six["value"]["sign"], -1);
    assert_eq!(json(&["coeff", "delta", "1,1,3"])["delta"], 0);
    assert_eq!(exit_code(&["coeff", "cg", "1/2,1/2"]), 64);
}

#[test]
fn exit_codes() {
    assert_eq!(exit_code(&["frobnicate"]), 64);
    assert_eq!(exit_code(&["amplitude", "--tree", "/no/such/file.json", "--x", "10"]), 65);
    assert_eq!(exit_code(&["gt", "patterns", "--label", "6,3,1,0", "--cap", "10"]), 70);
    assert_eq!(exit_code(&["gt", "dim", "--label", "0,2"]), 65);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(exit_code(&["amplitude", "--tree", bad.to_str().unwrap(), "--x", "10"]), 65);
    assert_eq!(exit_code(&["counts", bad.to_str().unwrap()]), 65);
    let out = schur(&["frobnicate"]);
    let err: Value = serde_json::from_slice(out.stderr.split(|&b| b == b'\n').next().unwrap()).unwrap();
    assert_eq!(err["error"], "unknown-subcommand");
    assert_eq!(err["exit"], 64);
    assert_eq!(exit_code(&["--help"]), 0);
}

#[test]
fn singlet_amplitudes_and_sampling() {
    let tree = data("singlet.json");
    let a = json(&["amplitude", "--tree", &tree, "--x", "10"]);
    assert_eq!(a["exact"], "1*sqrt(1/2)");
    let b = json(&["amplitude", "--tree", &tree, "--x", "-1/2,1/2"]);
    assert_eq!(b["exact"], "-1*sqrt(1/2)");
    let s = json(&["sample", "--tree", &tree, "-n", "200", "--seed", "3"]);
    let counts = s["counts"].as_object().unwrap();
    assert_eq!(counts.len(), 2);
    assert!(counts.keys().all(|k| k == "1/2,-1/2" || k == "-1/2,1/2"));
}

#[test]
fn seeded_runs_repeat_exactly() {
    let tree = data("four_qubit_state.json");
    let dir = tempfile::tempdir().unwrap();
    let m1 = dir.path().join("m1.json");
    let m2 = dir.path().join("m2.json");
    let run = |m: &PathBuf| {
        schur(&["sample", "--tree", &tree, "-n", "50", "--seed", "99", "--manifest", m.to_str().unwrap()])
    };
    let (a, b) = (run(&m1), run(&m2));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let (m1, m2): (Value, Value) = (
        serde_json::from_str(&std::fs::read_to_string(m1).unwrap()).unwrap(),
        serde_json::from_str(&std::fs::read_to_string(m2).unwrap()).unwrap(),
    );
    assert_eq!(m1["outputs"], m2["outputs"]);
    assert_eq!(m1["seed"], 99);
    assert_eq!(m1["command"], "sample");
    assert_eq!(m1["outputs"]["stdout"].as_str().unwrap().len(), 64);

    let fresh = schur(&["sample", "--tree", &tree, "-n", "50"]);
    let stderr = String::from_utf8(fresh.stderr).unwrap();
    let seed = stderr.lines().find_map(|l| l.strip_prefix("seed: ")).expect("drawn seed is printed");
    let again = schur(&["sample", "--tree", &tree, "-n", "50", "--seed", seed]);
    assert_eq!(fresh.stdout, again.stdout);
}

#[test]
fn synth_counts_simulate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.json");
    let p = plan.to_str().unwrap();
    assert!(schur(&["synth", "schur", "--n", "3", "--out", p]).status.success());
    let counts = json(&["counts", p]);
    assert_eq!(counts["bound_violations"], 0);
    assert!(counts["max_reconstruction_error"].as_f64().unwrap() < 1e-10);
    assert!(counts["two_level_total"].as_u64().unwrap() > 0);
    let sim = json(&["simulate", p, "--input", "000"]);
    let amps = sim["amplitudes"].as_array().unwrap();
    assert_eq!(amps.len(), 1);
    assert!((amps[0]["amplitude"]["re"].as_f64().unwrap().abs() - 1.0).abs() < 1e-12);

    assert!(schur(&["synth", "pqc", "--balanced", "4", "--out", p]).status.success());
    let sim = json(&["simulate", p, "--input", "5"]);
    let norm: f64 = sim["amplitudes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["amplitude"]["re"].as_f64().unwrap().powi(2) + e["amplitude"]["im"].as_f64().unwrap().powi(2))
        .sum();
    assert!((norm - 1.0).abs() < 1e-12);

    assert!(schur(&["synth", "prep", "--tree", &data("four_qubit_state.json"), "--out", p]).status.success());
    let counts = json(&["counts", p]);
    assert_eq!(counts["bound_violations"], 0);
    assert_eq!(exit_code(&["simulate", p, "--input", "zz"]), 65);
}

#[test]
fn text_and_csv_formats() {
    let out = schur(&["--format", "csv", "qubit-table", "--max-n", "5"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "n,original,modified\n4,7,9\n5,9,12\n");
    let out = schur(&["qubit-table", "--max-n", "5", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("n  original  modified\n"), "{text}");
}

#[test]
fn pqc_subcommands() {
    let e = json(&["pqc", "enumerate", "--schur", "4"]);
    assert_eq!(e["labellings"].as_array().unwrap().len(), 16);
    let c = json(&["pqc", "check-claim1", "--tree", &data("six_qubit_tree.json")]);
    assert_eq!(c["all_commute"], true);
    let s = json(&["pqc", "state", "--schur", "2", "--js", "0", "--m", "0"]);
    assert_eq!(s["amplitudes"].as_array().unwrap().len(), 2);

    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("state.json");
    let t = tree.to_str().unwrap();
    assert!(schur(&["pqc", "state", "--balanced", "4", "--js", "1,1,1", "--m", "0", "--emit-tree", "--out", t])
        .status
        .success());
    // <1 0; 1 0 | 1 0> vanishes while <1 1; 1 -1 | 1 0> = 1/sqrt(2).
    assert_eq!(json(&["amplitude", "--tree", t, "--x", "1010"])["value"]["sign"], 0);
    assert_eq!(json(&["amplitude", "--tree", t, "--x", "1100"])["exact"], "1*sqrt(1/2)");
}

#[test]
fn gt_subcommands() {
    assert_eq!(json(&["gt", "dim", "--label", "2,1,0"])["dim"], "8");
    let p = json(&["gt", "patterns", "--label", "2,1,0"]);
    let zero = p["patterns"].as_array().unwrap().iter().filter(|q| q["weight"] == "(0, 0)").count();
    assert_eq!(zero, 2);
    let demo = json(&["gt", "su3-demo"]);
    assert_eq!(demo["orthonormal"], true);
    assert_eq!(demo["violations"].as_array().unwrap().len(), 2);
}

#[test]
fn validate_axioms_reports_violations() {
    let clean = json(&["validate-axioms", "--provider", "cg", "--bound", "2"]);
    assert!(clean["violations"].as_array().unwrap().is_empty());
    let six = json(&["validate-axioms", "--provider", "six-j:1/2", "--bound", "1"]);
    assert!(six["violations"].as_array().unwrap().iter().any(|v| v["axiom"] == "Gc4"));
    assert_eq!(exit_code(&["validate-axioms", "--provider", "nonsense"]), 65);
}

#[test]
fn ct_commands() {
    let dir = tempfile::tempdir().unwrap();
    let gates = dir.path().join("gates.json");
    let g = gates.to_str().unwrap();
    std::fs::write(&gates, r#"[{"op": "h", "qubit": 1}, {"op": "h", "qubit": 1}]"#).unwrap();
    let tree = data("singlet.json");
    let a = json(&["ct", "amplitude", "--state", &tree, "--gates", g, "--x", "10"]);
    assert!((a["amplitude"]["re"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-10);
    assert_eq!(a["cost_factor"], 4);
    assert_eq!(exit_code(&["ct", "amplitude", "--state", &tree, "--gates", g, "--x", "10", "--budget", "2"]), 70);

    std::fs::write(&gates, r#"[{"op": "h", "qubit": 2}]"#).unwrap();
    let d = json(&["ct", "distribution", "--state", &tree, "--gates", g]);
    let dist = d["distribution"].as_object().unwrap();
    assert_eq!(dist.len(), 4);
    for p in dist.values() {
        assert!((p.as_f64().unwrap() - 0.25).abs() < 1e-12);
    }
    let s1 = json(&["ct", "sample", "--state", &tree, "--gates", g, "-n", "20", "--seed", "5"]);
    let s2 = json(&["ct", "sample", "--state", &tree, "--gates", g, "-n", "20", "--seed", "5"]);
    assert_eq!(s1, s2);

    std::fs::write(&gates, r#"[{"op": "warp", "qubit": 2}]"#).unwrap();
    assert_eq!(exit_code(&["ct", "distribution", "--state", &tree, "--gates", g]), 65);
}
