//! End-to-end checks of the binary: JSON round trips, documented exit
//! codes, and byte-identical output under a fixed configuration.

use std::io::Write;
use std::process::{Command, Stdio};

fn run(args: &[&str], stdin: Option<&str>) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sjspace"));
    cmd.args(args);
    cmd.stdin(Stdio::piped());
    cmd.stdout(Stdio::piped());
    cmd.stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("binary spawns");
    if let Some(input) = stdin {
        child
            .stdin
            .as_mut()
            .unwrap()
            .write_all(input.as_bytes())
            .unwrap();
    }
    drop(child.stdin.take());
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn volume_closed_formula_matches_pinned_value() {
    // the documented value is pi/3 = 1.0471975511965976; the zeta-series
    // evaluation must reproduce it well beyond the 12-digit contract
    let (code, stdout, _) = run(&["volume", "--n", "1"], None);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let got = v["value"].as_f64().unwrap();
    let expect = std::f64::consts::PI / 3.0;
    assert!(
        (got - expect).abs() < 1e-14 * expect,
        "got {got}, expected {expect}"
    );
}

#[test]
fn identity_element_echoes_the_point() {
    let input = r#"{
        "element": {"A": [[1.0]], "B": [[0.0]], "C": [[0.0]], "D": [[1.0]],
                     "lambda": [[0.0]], "mu": [[0.0]], "kappa": [[0.0]]},
        "point": {"X": [[0.3]], "Y": [[0.8]], "U": [[0.1]], "V": [[-0.2]]}
    }"#;
    let (code, stdout, _) = run(&["act", "--space", "hnm"], Some(input));
    assert_eq!(code, 0, "stdout: {stdout}");
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["point"]["X"][0][0], 0.3);
    assert_eq!(v["point"]["Y"][0][0], 0.8);
    assert_eq!(v["point"]["U"][0][0], 0.1);
    assert_eq!(v["point"]["V"][0][0], -0.2);
}

#[test]
fn unknown_subcommand_exits_64() {
    let (code, _, _) = run(&["frobnicate"], None);
    assert_eq!(code, 64);
}

#[test]
fn malformed_json_exits_65() {
    let (code, stdout, _) = run(&["volume-density"], Some("{not json"));
    assert_eq!(code, 65);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["error"]["code"], "malformed_json");
}

#[test]
fn invalid_point_exits_2_with_machine_readable_error() {
    // Y is indefinite: eigenvalues 3 and -1
    let input = r#"{"X": [[0.0, 0.0],[0.0, 0.0]], "Y": [[1.0, 2.0],[2.0, 1.0]],
                     "U": [[0.0, 0.0]], "V": [[0.0, 0.0]]}"#;
    let (code, stdout, _) = run(&["volume-density"], Some(input));
    assert_eq!(code, 2, "stdout: {stdout}");
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["error"]["code"], "not_positive_definite");
    assert!(v["error"]["message"].as_str().unwrap().contains("positive"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = [
        "volume",
        "--n",
        "1",
        "--estimate",
        "--samples",
        "200000",
        "--seed",
        "7",
    ];
    let (c1, out1, _) = run(&args, None);
    let (c2, out2, _) = run(&args, None);
    assert_eq!(c1, 0);
    assert_eq!(c2, 0);
    assert_eq!(out1, out2);
    // worker count must not change the bytes either
    let mut args4 = args.to_vec();
    args4.extend(["--workers", "4"]);
    let (c3, out3, _) = run(&args4, None);
    assert_eq!(c3, 0);
    assert_eq!(out1, out3);
}

#[test]
fn cayley_subcommand_round_trips() {
    let point = r#"{"W": {"re": [[0.2]], "im": [[-0.1]]}, "eta": {"re": [[0.4]], "im": [[0.3]]}}"#;
    let (code, stdout, _) = run(&["cayley", "--to-space"], Some(point));
    assert_eq!(code, 0, "{stdout}");
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let back_input = v["point"].to_string();
    let (code, stdout, _) = run(&["cayley", "--to-disk"], Some(&back_input));
    assert_eq!(code, 0);
    let w: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let re = w["point"]["W"]["re"][0][0].as_f64().unwrap();
    let im = w["point"]["W"]["im"][0][0].as_f64().unwrap();
    assert!((re - 0.2).abs() < 1e-12 && (im + 0.1).abs() < 1e-12);
}

#[test]
fn bessel_matches_half_order_closed_form() {
    let (code, stdout, _) = run(&["bessel", "--s-re", "0.5", "--z", "1.0"], None);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let expect = (std::f64::consts::PI / 2.0f64).sqrt() * (-1.0f64).exp();
    let got = v["value"]["re"].as_f64().unwrap();
    assert!((got - expect).abs() < 1e-10);
}

#[test]
fn reduce_emits_word_and_membership() {
    let input = r#"{"X": [[5.0]], "Y": [[1.0]]}"#;
    let (code, stdout, _) = run(&["reduce", "--space", "hn"], Some(input));
    assert_eq!(code, 0, "{stdout}");
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert!(v["word"].as_array().unwrap().len() >= 1);
    assert_eq!(v["membership"]["s3"]["holds"], true);
    assert!((v["reduced"]["X"][0][0].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn disk_action_accepts_conjugated_elements() {
    // a Jacobi element supplied for the disk space is conjugated in
    let input = r#"{
        "element": {"A": [[1.0]], "B": [[0.5]], "C": [[0.0]], "D": [[1.0]],
                     "lambda": [[0.3]], "mu": [[0.1]], "kappa": [[0.0]]},
        "point": {"W": {"re": [[0.1]], "im": [[0.2]]},
                   "eta": {"re": [[0.4]], "im": [[-0.3]]}}
    }"#;
    let (code, stdout, _) = run(&["act", "--space", "disk"], Some(input));
    assert_eq!(code, 0, "{stdout}");
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    // image must stay strictly inside the disk
    let re = v["point"]["W"]["re"][0][0].as_f64().unwrap();
    let im = v["point"]["W"]["im"][0][0].as_f64().unwrap();
    assert!(re * re + im * im < 1.0);
}

#[test]
fn tolerance_file_overrides_are_honored() {
    // with a loosened symmetry tolerance, a slightly asymmetric X passes
    let dir = std::env::temp_dir().join("sjspace_tol_test");
    std::fs::create_dir_all(&dir).unwrap();
    let tol_path = dir.join("tol.json");
    std::fs::write(&tol_path, r#"{"sym_tol": 1e-6}"#).unwrap();
    let input = r#"{"X": [[0.0, 1e-8], [0.0, 0.0]], "Y": [[1.0, 0.0], [0.0, 1.0]],
                     "U": [[0.0, 0.0]], "V": [[0.0, 0.0]]}"#;
    let (code_strict, _, _) = run(&["volume-density"], Some(input));
    assert_eq!(code_strict, 2, "strict tolerances must reject");
    let (code_loose, stdout, _) = run(
        &["volume-density", "--tol-file", tol_path.to_str().unwrap()],
        Some(input),
    );
    assert_eq!(code_loose, 0, "{stdout}");
}
