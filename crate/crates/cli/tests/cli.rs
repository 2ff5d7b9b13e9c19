//! End-to-end tests of the hhl binary: report shapes, output formats, exit
//! codes, the column guard, and the perturbation negative control.

use std::process::{Command, Output};

fn hhl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hhl"))
        .args(args)
        .env_remove("HHL_GUARD")
        .output()
        .expect("the hhl binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON document")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn homology_report_matches_the_hand_checked_case() {
    let out = hhl(&["homology", "--complex", "Dpm", "--n", "2", "--q", "2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let doc = stdout_json(&out);
    assert_eq!(doc["format_version"], 1);
    assert_eq!(doc["command"], "homology");
    assert_eq!(doc["betti"]["-1"], 0);
    assert_eq!(doc["betti"]["0"], 0);
    assert_eq!(doc["betti"]["1"], 5);
    assert_eq!(doc["dims"]["1"], 8);
    assert_eq!(doc["q"], "2");
    assert_eq!(doc["acyclic"], true);
    assert!(doc.get("elapsed_ms").is_none(), "timings are opt-in");
}

#[test]
fn csv_homology_is_exact() {
    let out = hhl(&["homology", "--complex", "C", "--n", "3", "--format", "csv"]);
    assert!(out.status.success());
    let got = String::from_utf8_lossy(&out.stdout);
    assert_eq!(
        got,
        "degree,dim,rank,betti\n-1,1,0,0\n0,3,1,0\n1,6,2,0\n2,6,4,2\n"
    );
}

#[test]
fn assert_acyclic_succeeds_on_the_theorem_range() {
    let out = hhl(&[
        "homology",
        "--complex",
        "Dpm",
        "--n",
        "3",
        "--q",
        "1/3",
        "--assert-acyclic",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    // restricting the range with --d keeps it passing
    let out = hhl(&[
        "homology",
        "--complex",
        "Cpm",
        "--n",
        "3",
        "--d",
        "0",
        "--assert-acyclic",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout_json(&out)["acyclic_through"], 0);
}

#[test]
fn float_and_zero_q_are_rejected() {
    let out = hhl(&["homology", "--complex", "Dpm", "--n", "2", "--q", "0.5"]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("0.5"));

    let out = hhl(&["homology", "--complex", "Dpm", "--n", "2", "--q", "0"]);
    assert_eq!(out.status.code(), Some(2));

    // C never evaluates q, but a garbage literal is still rejected.
    let out = hhl(&["homology", "--complex", "C", "--n", "2", "--q", "0.5"]);
    assert_eq!(out.status.code(), Some(2));

    let out = hhl(&["identities", "--field", "Fp:4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("4"));
}

#[test]
fn negative_q_parses_as_a_value() {
    let out = hhl(&["homology", "--complex", "Dpm", "--n", "2", "--q", "-1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout_json(&out)["q"], "-1");
}

#[test]
fn guard_refuses_from_the_environment_and_the_flag_wins() {
    let out = Command::new(env!("CARGO_BIN_EXE_hhl"))
        .args(["homology", "--complex", "Dpm", "--n", "3"])
        .env("HHL_GUARD", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("basis columns"), "{}", stderr(&out));

    let out = Command::new(env!("CARGO_BIN_EXE_hhl"))
        .args(["homology", "--complex", "Dpm", "--n", "3", "--guard", "100000"])
        .env("HHL_GUARD", "10")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));

    let out = Command::new(env!("CARGO_BIN_EXE_hhl"))
        .args(["stability", "--n", "6", "--d", "3"])
        .env_remove("HHL_GUARD")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("guard exceeded"), "{}", stderr(&out));
}

#[test]
fn perturbed_xi_is_the_negative_control() {
    let out = hhl(&["identities", "--n-max", "3", "--perturb-xi", "--q", "1/3"]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
    let doc = stdout_json(&out);
    assert_eq!(doc["passed"], false);
    let suites = doc["runs"][0]["suites"].as_array().unwrap();
    let ladder = suites
        .iter()
        .find(|s| s["name"] == "xi-ladder")
        .expect("ladder suite present");
    assert!(ladder["failed"].as_u64().unwrap() > 0);
}

#[test]
fn identities_and_filtration_pass_with_default_suites() {
    let out = hhl(&["identities", "--n-max", "3"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let doc = stdout_json(&out);
    assert_eq!(doc["failures_total"], 0);
    assert_eq!(doc["runs"].as_array().unwrap().len(), 4);

    let out = hhl(&["filtration", "--n", "2", "--format", "csv"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let got = String::from_utf8_lossy(&out.stdout);
    assert!(got.starts_with("q,suite,cases,failed\n"));
    assert!(got.contains("betti-decomposition"));
}

#[test]
fn out_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let args = ["homology", "--complex", "Cpm", "--n", "3", "--q", "2"];
    let direct = hhl(&args);
    assert!(direct.status.success());
    let out = hhl(&[
        &args[..],
        &["--out", path.to_str().unwrap()],
    ]
    .concat());
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn stability_reports_the_out_of_range_map() {
    let out = hhl(&["stability", "--n", "2", "--d", "1", "--q", "-1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let doc = stdout_json(&out);
    assert_eq!(doc["tor_small"], 1);
    assert_eq!(doc["tor_big"], 2);
    assert_eq!(doc["stable_range"], false);
    assert_ne!(doc["verdict"], "isomorphism");
}

#[test]
fn export_complex_writes_the_complex_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("complex.json");
    let out = hhl(&[
        "homology",
        "--complex",
        "C",
        "--n",
        "2",
        "--export-complex",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let doc: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&path).unwrap()).expect("export is JSON");
    assert_eq!(doc["kind"], "C");
    assert_eq!(doc["format_version"], 1);
    // degrees -1, 0, 1 with the two one-letter and two two-letter words
    assert_eq!(doc["dims"], serde_json::json!([1, 2, 2]));
    assert_eq!(doc["basis"]["1"], serde_json::json!(["[1,2]", "[2,1]"]));
}
