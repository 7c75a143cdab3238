//! End-to-end CLI tests: the exit-code contract, input diagnostics, and the
//! stated example values.

use std::path::PathBuf;
use std::process::{Command, Output};

fn divkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divkit"))
        .args(args)
        .env_remove("DIVKIT_SEED")
        .output()
        .expect("binary runs")
}

fn write(name: &str, contents: &str) -> String {
    let mut path = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    path.push(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn compute_delta_on_the_swapped_pair() {
    let a = write("a.json", "[0.75, 0.25]");
    let b = write("b.json", "[0.25, 0.75]");
    let out = divkit(&["compute", "--measure", "delta", "--p", &a, "--q", &b]);
    let v = stdout_json(&out);
    assert_eq!(v["value"].as_f64().unwrap(), 0.5);
    assert_eq!(v["dims"].as_u64().unwrap(), 2);
}

#[test]
fn compute_k1_equals_b1() {
    let a = write("k1a.json", "[0.6, 0.3, 0.1]");
    let b = write("k1b.json", "[0.2, 0.5, 0.3]");
    let k = divkit(&["compute", "--measure", "k_t:1", "--p", &a, "--q", &b]);
    let bb = divkit(&["compute", "--measure", "b1", "--p", &a, "--q", &b]);
    let (kv, bv) = (stdout_json(&k), stdout_json(&bb));
    assert_eq!(kv["value"].as_f64().unwrap(), bv["value"].as_f64().unwrap());
}

#[test]
fn compute_on_equal_inputs_is_zero() {
    let a = write("same.csv", "0.4\n0.6\n");
    let out = divkit(&["compute", "--measure", "psi", "--p", &a, "--q", &a]);
    assert_eq!(stdout_json(&out)["value"].as_f64().unwrap(), 0.0);
}

#[test]
fn counts_mode_applies_smoothing() {
    let a = write("counts_a.csv", "9\n0\n");
    let b = write("counts_b.csv", "5\n5\n");
    let out = divkit(&[
        "compute", "--measure", "hellinger", "--p", &a, "--q", &b, "--counts", "--alpha", "0.5",
    ]);
    // smoothed a = (0.95, 0.05); h = 1/2 sum (sqrt p - sqrt q)^2
    let expect = 0.5
        * ((0.95f64.sqrt() - 0.5f64.sqrt()).powi(2) + (0.05f64.sqrt() - 0.5f64.sqrt()).powi(2));
    let got = stdout_json(&out)["value"].as_f64().unwrap();
    assert!((got - expect).abs() < 1e-15);
}

#[test]
fn parse_failure_exits_2_and_names_file_and_line() {
    let bad = write("bad.csv", "0.5\nnot-a-number\n");
    let good = write("good.csv", "0.5\n0.5\n");
    let out = divkit(&["compute", "--measure", "delta", "--p", &bad, "--q", &good]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.csv:2"), "{err}");
}

#[test]
fn zero_probability_exits_2_in_strict_mode() {
    let z = write("zero.json", "[0.5, 0.0, 0.5]");
    let good = write("good3.json", "[0.2, 0.3, 0.5]");
    let out = divkit(&["compute", "--measure", "delta", "--p", &z, "--q", &good]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dimension_mismatch_exits_3() {
    let a = write("d2.json", "[0.5, 0.5]");
    let b = write("d3.json", "[0.2, 0.3, 0.5]");
    let out = divkit(&["compute", "--measure", "delta", "--p", &a, "--q", &b]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unknown_selectors_exit_2() {
    let a = write("sel.json", "[0.5, 0.5]");
    let out = divkit(&["compute", "--measure", "kl", "--p", &a, "--q", &a]);
    assert_eq!(out.status.code(), Some(2));
    let out = divkit(&["verify", "--chain", "eq99", "--trials", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let out = divkit(&["beta", "--ratio", "delta/"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_clean_chain_exits_0_and_violated_chain_exits_1() {
    let ok = divkit(&[
        "verify", "--chain", "eq28", "--trials", "3000", "--dims", "2..6", "--seed", "5",
    ]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let bad = divkit(&[
        "verify", "--chain", "eq29", "--trials", "3000", "--dims", "2..6", "--seed", "5",
    ]);
    assert_eq!(bad.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert!(v["violations"].as_u64().unwrap() > 0);
}

#[test]
fn verify_eq33_runs_in_identity_mode() {
    let out = divkit(&[
        "verify", "--chain", "eq33", "--trials", "2000", "--dims", "2..8", "--seed", "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert!(checks[0]["name"].as_str().unwrap().starts_with("eq33"));
}

#[test]
fn identities_command_and_selectors_pass() {
    let out = divkit(&["identities", "--trials", "1500", "--dims", "2..6", "--seed", "9"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["pass"].as_bool().unwrap());
    let out = divkit(&[
        "verify", "--chain", "remark21", "--trials", "1500", "--dims", "2..6", "--seed", "9",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["checks"].as_array().unwrap().len(), 6);
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let a = write("outflag.json", "[0.6, 0.4]");
    let dest = format!("{}/profile_out.json", env!("CARGO_TARGET_TMPDIR"));
    let out = divkit(&["report", "--p", &a, "--q", &a, "--out", &dest]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&dest).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["dims"].as_u64().unwrap(), 2);
}

#[test]
fn beta_single_ratio_reports_the_known_constant() {
    let out = divkit(&["beta", "--ratio", "d:t-delta/d:k0-delta"]);
    let v = stdout_json(&out);
    assert!((v["beta_hat"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!(v["monotone_ok"].as_bool().unwrap());
    // same-generator ratio is identically 1
    let out = divkit(&["beta", "--ratio", "psi/psi"]);
    let v = stdout_json(&out);
    assert!((v["beta_hat"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn env_seed_fallback_matches_explicit_seed() {
    let with_flag = divkit(&[
        "verify", "--chain", "eq26", "--trials", "500", "--dims", "2..4", "--seed", "123",
    ]);
    let with_env = Command::new(env!("CARGO_BIN_EXE_divkit"))
        .args(["verify", "--chain", "eq26", "--trials", "500", "--dims", "2..4"])
        .env("DIVKIT_SEED", "123")
        .output()
        .unwrap();
    assert_eq!(with_flag.stdout, with_env.stdout);
}

#[test]
fn report_on_identical_inputs_is_all_zero_and_fixed_order() {
    let a = write("rep.json", "[0.3, 0.3, 0.4]");
    let out = divkit(&["report", "--p", &a, "--q", &a]);
    let v = stdout_json(&out);
    let rows = v["rows"].as_array().unwrap();
    // catalog (71 ids) plus six partial sums
    assert_eq!(rows.len(), 71 + 6);
    assert_eq!(rows[0]["measure"].as_str().unwrap(), "delta");
    for row in rows {
        let val = row["value"].as_f64().unwrap();
        assert!(val.abs() <= 1e-12, "{row}");
    }
    let csv = divkit(&["report", "--p", &a, "--q", &a, "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("measure,value,dims,inputs_hash\n"));
    assert_eq!(text.lines().count(), 1 + 71 + 6);
}

#[test]
fn report_profile_respects_the_base_chain_ordering() {
    let a = write("ord_a.json", "[0.7, 0.2, 0.1]");
    let b = write("ord_b.json", "[0.1, 0.45, 0.45]");
    let out = divkit(&["report", "--p", &a, "--q", &b]);
    let v = stdout_json(&out);
    let get = |name: &str| -> f64 {
        v["rows"]
            .as_array()
            .unwrap()
            .iter()
            .find(|r| r["measure"] == name)
            .unwrap_or_else(|| panic!("{name} missing"))["value"]
            .as_f64()
            .unwrap()
    };
    let chain = [
        0.25 * get("delta"),
        get("i"),
        get("hellinger"),
        get("j") / 8.0,
        get("t"),
        get("k0") / 8.0,
        get("psi") / 16.0,
        get("f") / 16.0,
    ];
    for w in chain.windows(2) {
        assert!(w[0] <= w[1] * (1.0 + 1e-12), "profile violates the base chain: {chain:?}");
    }
}
