use std::process::{Command, Output};

use resonax_core::{AdmissibilityCertificate, QuasiResonanceReport, ResonanceReport};
use serde_json::Value;

fn resonax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resonax"))
        .args(args)
        .env_remove("RESONAX_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const SHEAR3: &str =
    r#"[[{"exp":[1,0],"re":"1"}],[{"exp":[0,1],"re":"1"},{"exp":[3,0],"re":"1"}]]"#;
const BALL2: &str = r#"{"kind":"unit-ball","n":2}"#;

#[test]
fn quasi_resonance_example() {
    let out = resonax(&[
        "quasi-resonance",
        "--rho",
        "[[1],[2]]",
        "--rhop",
        "[[1],[2]]",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r: QuasiResonanceReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.orders, vec![2, 4]);
    assert_eq!(r.order, 4);
    assert!(stderr(&out).contains("order 4"));
}

#[test]
fn inadmissible_check_exits_one_with_witness() {
    let out = resonax(&["check", "--rho", "[[1],[-1]]"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let cert: AdmissibilityCertificate = serde_json::from_value(v["certificate"].clone()).unwrap();
    assert_eq!(cert.witness.unwrap().exponents(), &[1, 1]);
}

#[test]
fn inadmissible_resonance_is_a_mathematical_failure() {
    let out = resonax(&["resonance", "--rho", "[[1],[-1]]"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["witness"], serde_json::json!([1, 1]));
}

#[test]
fn malformed_json_exits_two_with_position() {
    let out = resonax(&["check", "--rho", "[[1],[2]"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 1 column 8"), "{}", stderr(&out));
    assert!(json(&out)["error"].is_string());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(resonax(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(resonax(&["check"]).status.code(), Some(2));
    assert_eq!(
        resonax(&["check", "--rho", "[[1],[1,2]]"]).status.code(),
        Some(2)
    );
    assert_eq!(
        resonax(&["reproduce", "--criterion", "9"]).status.code(),
        Some(2)
    );
}

#[test]
fn weights_from_file_and_output_file() {
    let dir = std::env::temp_dir().join(format!("resonax-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("rho.json");
    let output = dir.join("report.json");
    std::fs::write(&input, r#"{"rows": [[1],[2]]}"#).unwrap();
    let out = resonax(&[
        "resonance",
        "--rho",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: ResonanceReport =
        serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(r.orders, vec![1, 2]);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn weight_space_basis() {
    let out = resonax(&["weight-space", "--rho", "[[1],[2]]", "--k", "[3]"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["basis"], serde_json::json!([[1, 1], [3, 0]]));
    let empty = resonax(&["weight-space", "--rho", "[[1],[2]]", "--k", "[-1]"]);
    assert_eq!(empty.status.code(), Some(0));
    assert_eq!(json(&empty)["dimension"], 0);
}

#[test]
fn bounds() {
    let q = json(&resonax(&[
        "bound",
        "--rho",
        "[1,2]",
        "--rhop",
        "[[1],[2]]",
    ]));
    assert_eq!(q["kind"], "quasi-circular");
    assert_eq!(q["report"]["coarse_bound"], "4");
    assert_eq!(q["report"]["exact_order"], 4);
    let n = json(&resonax(&["bound", "--rho", "[[2],[3]]"]));
    assert_eq!(n["kind"], "nonnegative");
    assert_eq!(n["report"]["global_bound"], "9/4");
    assert_eq!(n["report"]["exact_order"], 1);
}

#[test]
fn verify_map_pass_and_fail() {
    let ok = resonax(&[
        "verify-map",
        "--map",
        SHEAR3,
        "--rho",
        "[[1],[1]]",
        "--rhop",
        "[[1],[3]]",
    ]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["passed"], true);
    let bad = resonax(&["verify-map", "--map", SHEAR3, "--rho", "[[1],[1]]"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["passed"], false);
}

#[test]
fn seed_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_resonax"))
        .args([
            "mc",
            "invariance",
            "--domain",
            BALL2,
            "--rho",
            "[[1,0],[0,1]]",
            "--count",
            "2000",
        ])
        .env("RESONAX_SEED", "1234")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["seed"], 1234);
    let default = resonax(&[
        "mc",
        "invariance",
        "--domain",
        BALL2,
        "--rho",
        "[[1,0],[0,1]]",
        "--count",
        "2000",
    ]);
    assert_eq!(json(&default)["seed"], 42);
}

#[test]
fn mc_orthogonality_and_change_of_variables() {
    let orth = resonax(&[
        "mc",
        "orthogonality",
        "--domain",
        BALL2,
        "--rho",
        "[[1],[1]]",
        "--max-degree",
        "2",
        "--count",
        "50000",
    ]);
    assert_eq!(orth.status.code(), Some(0), "{}", stderr(&orth));
    assert_eq!(json(&orth)["threshold_sigmas"], 4.0);

    let cov = resonax(&[
        "mc",
        "change-of-variables",
        "--map",
        SHEAR3,
        "--domain",
        BALL2,
        "--phi",
        r#"[{"exp":[3,0],"re":"1"}]"#,
        "--psi",
        r#"[{"exp":[0,1],"re":"1"}]"#,
        "--count",
        "50000",
    ]);
    assert_eq!(cov.status.code(), Some(0), "{}", stderr(&cov));
    let v = json(&cov);
    assert_eq!(v["lhs"]["samples"], 50000);
    assert!(v["rhs"]["candidates"].as_u64().unwrap() > 50000);
}

#[test]
fn wrong_weights_break_invariance() {
    let domain = format!(r#"{{"kind":"shear-image","base":{BALL2},"map":{SHEAR3}}}"#);
    let out = resonax(&[
        "mc",
        "invariance",
        "--domain",
        &domain,
        "--rho",
        "[[1],[2]]",
        "--count",
        "5000",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["witness"]["image_value"].as_f64().unwrap() >= 1.0);
}

#[test]
fn reproduce_selected_criteria() {
    let out = resonax(&["reproduce", "--criterion", "1", "--criterion", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 2);
    assert_eq!(v["passed"], true);
    assert!(stderr(&out).contains("[PASS] criterion 3"));
}
