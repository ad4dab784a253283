use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn qg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qg")).args(args).env_remove("QG_TOLERANCE").output().expect("qg runs")
}

fn qg_report(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let mut full: Vec<&str> = args.to_vec();
    let out_str = out.to_str().unwrap().to_string();
    full.extend(["--out", &out_str]);
    let output = qg(&full);
    let code = output.status.code().unwrap();
    assert!(out.exists(), "no report: {}", String::from_utf8_lossy(&output.stderr));
    (code, serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap())
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn check_values(report: &Value) -> Vec<(String, f64, bool)> {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["name"].as_str().unwrap().to_string(), c["value"].as_f64().unwrap(), c["passed"].as_bool().unwrap()))
        .collect()
}

#[test]
fn check_hopf_on_c_z2() {
    let (code, report) = qg_report(&["check-hopf", path(&corpus("c_z2.qg"))]);
    assert_eq!(code, 0);
    let checks = check_values(&report);
    assert_eq!(checks.len(), 17);
    for (name, value, passed) in checks {
        assert!(passed, "{name}");
        assert!(value.abs() < 1e-15, "{name} = {value}");
    }
    assert_eq!(report["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn cbnorm_of_the_z2_multiplier_is_three() {
    let (code, report) = qg_report(&["cbnorm", path(&corpus("z2_mult_1_3.map")), "--lower", "2", "--seed", "5"]);
    assert_eq!(code, 0);
    let value = report["outputs"]["value"].as_f64().unwrap();
    assert!((value - 3.0).abs() <= 1e-6, "{value}");
    assert!(report["outputs"]["lower"].as_f64().unwrap() <= value + 1e-6);
    assert!(report["outputs"]["upper"].as_f64().unwrap() >= value - 1e-9);
    assert_eq!(report["seed"].as_u64(), Some(5));
    let (_, transpose) = qg_report(&["cbnorm", path(&corpus("transpose_m2.map"))]);
    assert!((transpose["outputs"]["value"].as_f64().unwrap() - 2.0).abs() <= 1e-6);
}

#[test]
fn report_all_on_the_corpus_passes() {
    let output = qg(&["report-all", path(&corpus(""))]);
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert_eq!(output.status.code(), Some(0), "{stdout}");
    for id in 1..=10 {
        assert!(stdout.contains(&format!("criterion {id:>2} PASS")), "criterion {id} missing:\n{stdout}");
    }
}

#[test]
fn reports_are_deterministic() {
    let matching = corpus("trivial_z3.matching");
    let args = ["double", "build", "--matching", path(&matching)];
    let (_, mut first) = qg_report(&args);
    let (_, mut second) = qg_report(&args);
    for r in [&mut first, &mut second] {
        r.as_object_mut().unwrap().remove("wall_time_s");
        r.as_object_mut().unwrap().remove("command");
    }
    assert_eq!(first, second);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(qg(&["check-hopf", path(&dir.path().join("missing.qg"))]).status.code(), Some(2));

    let garbled = dir.path().join("garbled.qg");
    fs::write(&garbled, "{ \"format_version\": 1,").unwrap();
    let output = qg(&["check-hopf", path(&garbled)]);
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("line"));

    // Breaking the counit keeps the file well formed but fails the axioms.
    let text = fs::read_to_string(corpus("c_z2.qg")).unwrap();
    let broken = dir.path().join("broken.qg");
    fs::write(&broken, text.replacen("\"counit\": [[1.0, 0.0], [0.0, 0.0]]", "\"counit\": [[1.0, 0.0], [0.5, 0.0]]", 1)).unwrap();
    let output = qg(&["check-hopf", path(&broken)]);
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stdout).contains("[FAIL] axiom Counit"));

    assert_eq!(qg(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn tolerance_comes_from_the_environment() {
    let with_tolerance = |tol: &str| {
        Command::new(env!("CARGO_BIN_EXE_qg"))
            .args(["w", path(&corpus("kac_paljutkin.qg"))])
            .env("QG_TOLERANCE", tol)
            .output()
            .unwrap()
    };
    let strict = with_tolerance("1e-30");
    assert_eq!(strict.status.code(), Some(1), "rounding in the unitary exceeds 1e-30");
    assert!(String::from_utf8_lossy(&strict.stdout).contains("tolerance: 1e-30"));
    assert_eq!(with_tolerance("1e-12").status.code(), Some(0));
}

#[test]
fn dual_emits_valid_hopf_data() {
    let dir = tempfile::tempdir().unwrap();
    let emitted = dir.path().join("dual.qg");
    let (code, report) = qg_report(&["dual", path(&corpus("c_s3.qg")), "--emit", path(&emitted)]);
    assert_eq!(code, 0);
    assert_eq!(report["outputs"]["dual_block_sizes"], serde_json::json!([1, 1, 2]));
    assert_eq!(qg(&["check-hopf", path(&emitted)]).status.code(), Some(0));
}

#[test]
fn mult_commands_emit_element_files() {
    let dir = tempfile::tempdir().unwrap();
    let applied = dir.path().join("applied.elem");
    let (code, _) = qg_report(&[
        "mult",
        "apply",
        path(&corpus("s3_multiplier.elem")),
        path(&corpus("s3_polynomial.elem")),
        "--emit",
        path(&applied),
    ]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(&applied).unwrap();
    assert!(text.contains("\"space\": \"pol\""));

    let averaged = dir.path().join("averaged.elem");
    for op in ["involute", "average", "symmetrize"] {
        let (code, report) = qg_report(&["mult", op, path(&corpus("s3_multiplier.elem")), "--emit", path(&averaged)]);
        assert_eq!(code, 0, "{op}: {report}");
    }
    // The emitted file refers back to the corpus table and can be fed to another command.
    let (code, report) = qg_report(&["mult", "average", path(&averaged)]);
    assert_eq!(code, 0, "{report}");

    // An element of the wrong space is a schema error.
    assert_eq!(qg(&["mult", "involute", path(&corpus("s3_polynomial.elem"))]).status.code(), Some(2));
}

#[test]
fn freeprod_commands() {
    let words = corpus("s3_z3.words");
    let (code, report) = qg_report(&["freeprod", "enum", path(&words), "--max-len", "4"]);
    assert_eq!(code, 0);
    // Two nontrivial labels in each factor: 1, 4, 8, 16, 32.
    assert_eq!(report["outputs"]["counts"], serde_json::json!([1, 4, 8, 16, 32]));
    assert_eq!(qg_report(&["freeprod", "fuse", path(&words)]).0, 0);
    let (code, report) = qg_report(&["freeprod", "pd", path(&words), "--max-len", "2"]);
    assert_eq!(code, 0);
    assert_eq!(report["outputs"]["bounds"][2]["psi_d_cb_upper_bound"].as_f64(), Some(40.0));
    let (code, report) = qg_report(&["freeprod", "tn", path(&words), "--max-len", "4", "--n", "4"]);
    assert_eq!(code, 0);
    assert_eq!(report["outputs"]["coefficients"][2]["coefficient"].as_f64(), Some(0.25));
}

#[test]
fn fusion_and_double_commands() {
    for ring in ["rep_z2.fusion", "rep_s3.fusion", "temperley_lieb_0.8.fusion"] {
        assert_eq!(qg_report(&["fusion", "verify", path(&corpus(ring))]).0, 0, "{ring}");
    }
    assert_eq!(qg_report(&["fusion", "pair", path(&corpus("rep_s3.values"))]).0, 0);
    assert_eq!(qg_report(&["fusion", "corner", path(&corpus("rep_s3.values"))]).0, 0);
    let (code, report) = qg_report(&["double", "check", "--matching", path(&corpus("drinfeld_z2.double"))]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(report["outputs"]["dim"].as_u64(), Some(4));
}

#[test]
fn a_broken_matching_fails_its_checks() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["c_z3.qg", "group_algebra_z3.qg"] {
        fs::copy(corpus(name), dir.path().join(name)).unwrap();
    }
    // Swapping two basis vectors of H₁ ⊗ H₂ moves the first leg.
    let text = fs::read_to_string(corpus("trivial_z3.matching")).unwrap();
    let mut file: Value = serde_json::from_str(&text).unwrap();
    let z = file["z"].as_array_mut().unwrap();
    z.swap(0, 4);
    let matching = dir.path().join("swapped.matching");
    fs::write(&matching, serde_json::to_string(&file).unwrap()).unwrap();
    let output = qg(&["double", "build", "--matching", path(&matching)]);
    assert_eq!(output.status.code(), Some(1), "{}", String::from_utf8_lossy(&output.stdout));
}
