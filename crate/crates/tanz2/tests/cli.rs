//! End-to-end checks of the tanz2 binary: exit codes, output formats,
//! and run-to-run determinism.

use std::path::Path;
use std::process::{Command, Output};

fn tanz2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tanz2"))
        .args(args)
        .output()
        .expect("binary spawns")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_reports_origin_only_for_the_cantor_parameter() {
    let doc = stdout_json(&tanz2(&["classify", "--lambda", "0.85+0i"]));
    assert_eq!(doc["format"], "tanz2.classify.v1");
    assert_eq!(doc["verdict"], "OriginOnly");
    assert!(doc["period"].is_null());
    assert_eq!(doc["singular_orbit"]["fate"], "ConvergedToPoint");
    assert_eq!(doc["settings"]["used"]["budget"], 2000);
}

#[test]
fn classify_finds_the_two_cycle() {
    let doc = stdout_json(&tanz2(&["classify", "--lambda", "0.02+1.38i"]));
    assert_eq!(doc["verdict"]["AttractingCycle"], 2);
    assert_eq!(doc["period"], 2);
    assert_eq!(doc["cycle"]["period"], 2);
    assert_eq!(doc["cycle"]["kind"], "Attracting");
    let mult = doc["cycle"]["multiplier"].as_array().unwrap();
    let norm = mult[0].as_f64().unwrap().hypot(mult[1].as_f64().unwrap());
    assert!(norm < 1.0, "multiplier {mult:?} is not attracting");
}

#[test]
fn usage_and_config_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["classify"],                                         // missing --lambda
        &["classify", "--lambda", "nonsense"],                 // bad literal
        &["classify", "--lambda", "0+0i"],                     // zero lambda
        &["classify", "--lambda", "0.85+0i", "--format", "ppm"],
        &["dynplane", "--lambda", "0.85+0i"],                  // ppm needs --out
        &["dynplane", "--lambda", "0.85+0i", "--window", "1,0,-1,2"],
        &["dynplane", "--lambda", "0.85+0i", "--budget", "10", "--format", "json"],
        &["cantor", "--lambda", "0.85+0i", "--kappa", "1"],
        &["cantor", "--lambda", "0.85+0i", "--words", "0"],
    ];
    for args in cases {
        let out = tanz2(args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
        assert!(!out.stderr.is_empty(), "args {args:?} gave no diagnostics");
    }
}

#[test]
fn cantor_outside_its_regime_exits_3() {
    // This parameter carries an attracting two-cycle, so the cylinder
    // diagnostics have no Cantor repeller to measure.
    let out = tanz2(&["cantor", "--lambda", "0.02+1.38i", "--words", "5"]);
    assert_eq!(out.status.code(), Some(3));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("AttractingCycle"), "stderr: {msg}");
}

#[test]
fn dynplane_writes_a_valid_ppm() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plane.ppm");
    let out = tanz2(&[
        "dynplane",
        "--lambda",
        "0.85+0i",
        "--res",
        "24",
        "--budget",
        "200",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let bytes = std::fs::read(&path).unwrap();
    let header = b"P6\n24 24\n255\n";
    assert!(bytes.starts_with(header));
    assert_eq!(bytes.len(), header.len() + 24 * 24 * 3);
}

#[test]
fn dynplane_json_report_carries_the_grid_and_the_basin_heuristic() {
    let doc = stdout_json(&tanz2(&[
        "dynplane",
        "--lambda",
        "0.85+0i",
        "--res",
        "32",
        "--budget",
        "300",
        "--format",
        "json",
    ]));
    assert_eq!(doc["format"], "tanz2.dynplane.v1");
    assert_eq!(doc["grid"]["format"], "tanz2.grid.v1");
    assert_eq!(doc["grid"]["spec"]["cols"], 32);
    assert_eq!(doc["immediate_basin"]["both_in_origin_component"], true);
    assert!(doc["immediate_basin"]["label"]
        .as_str()
        .unwrap()
        .contains("heuristic"));
    // Tolerances ride along so a report is interpretable on its own.
    assert_eq!(doc["settings"]["tolerances"]["pole_epsilon"], 1e-8);
}

#[test]
fn paramplane_json_counts_every_pixel() {
    let doc = stdout_json(&tanz2(&[
        "paramplane",
        "--res",
        "16",
        "--budget",
        "150",
        "--window",
        "-1.5,-1.5,1.5,1.5",
        "--format",
        "json",
    ]));
    assert_eq!(doc["format"], "tanz2.paramplane.v1");
    let counts = doc["class_counts"].as_object().unwrap();
    let total: u64 = counts.values().map(|v| v.as_u64().unwrap()).sum();
    assert_eq!(total, 16 * 16);
}

#[test]
fn cantor_diagnostics_cover_the_requested_words() {
    let doc = stdout_json(&tanz2(&[
        "cantor",
        "--lambda",
        "0.85+0i",
        "--words",
        "12",
        "--depth",
        "6",
    ]));
    assert_eq!(doc["format"], "tanz2.cantor.v1");
    let report = &doc["report"];
    assert_eq!(report["sampled_words"], 12);
    assert_eq!(report["all_words_strictly_decreasing"], true);
    assert_eq!(report["words"].as_array().unwrap().len(), 12);
    assert!(report["min_pairwise_center_distance"].as_f64().unwrap() > 0.0);
}

#[test]
fn selftest_passes_every_suite() {
    let doc = stdout_json(&tanz2(&["selftest"]));
    assert_eq!(doc["format"], "tanz2.selftest.v1");
    assert_eq!(doc["failed"], 0);
    let checks = doc["checks"].as_array().unwrap();
    assert!(checks.len() >= 7);
    assert!(checks.iter().all(|c| c["passed"] == true));
}

#[test]
fn repeated_runs_emit_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let args = |path: &Path| {
        vec![
            "dynplane".to_string(),
            "--lambda".into(),
            "0.3+0.4i".into(),
            "--res".into(),
            "48".into(),
            "--budget".into(),
            "400".into(),
            "--out".into(),
            path.to_str().unwrap().into(),
        ]
    };
    let a = dir.path().join("a.ppm");
    let b = dir.path().join("b.ppm");
    assert!(tanz2(&args(&a).iter().map(String::as_str).collect::<Vec<_>>()).status.success());
    assert!(tanz2(&args(&b).iter().map(String::as_str).collect::<Vec<_>>()).status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let j1 = tanz2(&["classify", "--lambda", "1.1-0.7i"]);
    let j2 = tanz2(&["classify", "--lambda", "1.1-0.7i"]);
    assert_eq!(j1.stdout, j2.stdout);
}

#[test]
fn json_reports_can_be_written_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = tanz2(&[
        "classify",
        "--lambda",
        "0.85+0i",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty(), "file output must not echo to stdout");
    let doc: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(doc["format"], "tanz2.classify.v1");
}
