//! End-to-end tests of the command-line surface: exit-code contract
//! (0 pass / 1 checked-property failure / 2 usage error), report and CSV
//! emission, seed handling, and operator files.

use std::path::Path;
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_logpencil")
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

/// A custom copy of the two-string family with one entry broken; fails
/// flatness with a witness.
const PERTURBED_SPEC: &str = r#"{"custom": {
  "base_dim": 3, "fiber_dim": 3,
  "param_names": ["s1", "s2", "s3"],
  "coord_names": ["x1", "x2", "x3"],
  "hyperplanes": [
    {"normal": ["1", "-1", "0"], "offset": "0", "label": "x1=x2",
     "residue": {"constant": [["1","0","0"],["0","0","0"],["0","0","0"]],
                 "linear": {"s1": [["0","0","0"],["1","-1","0"],["0","0","0"]],
                            "s2": [["-1","1","0"],["0","0","0"],["0","0","0"]]}}},
    {"normal": ["1", "0", "-1"], "offset": "0", "label": "x1=x3",
     "residue": {"constant": [["0","0","0"],["0","0","0"],["0","0","0"]],
                 "linear": {"s1": [["0","0","0"],["0","0","0"],["1","0","-1"]],
                            "s3": [["-1","0","1"],["0","0","0"],["0","0","0"]]}}},
    {"normal": ["0", "1", "-1"], "offset": "0", "label": "x2=x3",
     "residue": {"constant": [["0","0","0"],["0","0","0"],["0","0","0"]],
                 "linear": {"s2": [["0","0","0"],["0","0","0"],["0","1","-1"]],
                            "s3": [["0","0","0"],["0","-1","1"],["0","0","0"]]}}}
  ]}}"#;

#[test]
fn flatness_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.json", r#"{"family": "verma_kz", "params": {"r": 3}}"#);
    let report = dir.path().join("report.json");
    let out = Command::new(bin())
        .args(["flatness", good.to_str().unwrap(), "--report"])
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.contains("\"pass\": true"));
    assert!(text.contains("\"flats_checked\""));

    // perturbed fixture: exit 1, witness in the report
    let bad = write(dir.path(), "bad.json", PERTURBED_SPEC);
    let report_bad = dir.path().join("report-bad.json");
    let out = Command::new(bin())
        .args(["flatness", bad.to_str().unwrap(), "--report"])
        .arg(&report_bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = std::fs::read_to_string(&report_bad).unwrap();
    assert!(text.contains("\"failures\""));
    assert!(text.contains("x1=x2"), "witness names the flat: {text}");

    // missing file: exit 2
    let out = Command::new(bin())
        .args(["flatness", dir.path().join("nope.json").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn monodromy_generator_and_rtol_contract() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "ex.json", r#"{"family": "exshift"}"#);
    let report = dir.path().join("mono.json");
    let out = Command::new(bin())
        .args([
            "monodromy",
            spec.to_str().unwrap(),
            "--s",
            "0.25",
            "--seed",
            "3",
            "--report",
        ])
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    // single generator with eigenvalues {i, 1}: check det law result and
    // the recorded fixed space
    assert_eq!(json["results"]["fixed_space_dim"], 1);
    assert_eq!(json["results"]["det_law"][0]["pass"], true);
    assert_eq!(json["results"]["eigen_law"][0]["pass"], true);
    // every numeric check carries its tolerance
    assert!(json["results"]["det_law"][0]["tolerance"].is_f64());
    assert!(json["meta"]["tolerances"]["eigen_law"].is_f64());

    // rtol below the supported window: integrator contract, exit 1
    let out = Command::new(bin())
        .args([
            "monodromy",
            spec.to_str().unwrap(),
            "--s",
            "0.25",
            "--rtol",
            "1e-20",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn shift_verify_builtin_and_file() {
    let dir = tempfile::tempdir().unwrap();
    let ex = write(dir.path(), "ex.json", r#"{"family": "exshift"}"#);
    let out = Command::new(bin())
        .args(["shift-verify", ex.to_str().unwrap(), "--operator", "builtin"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    let verma = write(dir.path(), "verma.json", r#"{"family": "verma_kz", "params": {"r": 2}}"#);
    let out = Command::new(bin())
        .args(["shift-verify", verma.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    // operator from a file: the model family's operator written by hand
    let op = write(
        dir.path(),
        "op.json",
        r#"{"entries": [["x", "x/s - 1/(s+1)"], ["0", "1"]], "shift_index": 1}"#,
    );
    let out = Command::new(bin())
        .args([
            "shift-verify",
            ex.to_str().unwrap(),
            "--operator",
            op.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));

    // broken operator: exit 1 and a witness
    let opbad = write(
        dir.path(),
        "opbad.json",
        r#"{"entries": [["x + 1", "x/s - 1/(s+1)"], ["0", "1"]]}"#,
    );
    let report = dir.path().join("sv.json");
    let out = Command::new(bin())
        .args([
            "shift-verify",
            ex.to_str().unwrap(),
            "--operator",
            opbad.to_str().unwrap(),
            "--report",
        ])
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.contains("witness"));

    // no builtin operator for tensor_kz: usage error
    let tensor = write(dir.path(), "t.json", r#"{"family": "tensor_kz", "params": {"n": 2}}"#);
    let out = Command::new(bin())
        .args(["shift-verify", tensor.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_emits_csv_and_fit() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "ex.json", r#"{"family": "exshift"}"#);
    let csv = dir.path().join("scan.csv");
    let report = dir.path().join("scan.json");
    let out = Command::new(bin())
        .args([
            "scan",
            spec.to_str().unwrap(),
            "--from",
            "-2.5",
            "--to",
            "2.5",
            "--samples",
            "51",
            "--fit",
            "--seed",
            "9",
            "--csv",
        ])
        .arg(&csv)
        .arg("--report")
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let csv_text = std::fs::read_to_string(&csv).unwrap();
    assert!(csv_text.starts_with("s_re,s_im,value"));
    assert_eq!(csv_text.lines().count(), 52);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["results"]["baseline"], 1);
    assert_eq!(json["results"]["fits"][0]["normal"][0], 1);
    assert_eq!(json["results"]["fits"][0]["support"], 4);
}

#[test]
fn periodicity_command_and_env_seed() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "ex.json", r#"{"family": "exshift"}"#);
    let report = dir.path().join("p.json");
    let out = Command::new(bin())
        .args([
            "periodicity",
            spec.to_str().unwrap(),
            "--s",
            "0.3",
            "--shift",
            "1",
            "--seed",
            "4",
            "--report",
        ])
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.contains("\"pass\": true"));
    assert!(text.contains("\"seed\": 4"));

    // PENCIL_SEED overrides --seed
    let out = Command::new(bin())
        .env("PENCIL_SEED", "123")
        .args([
            "periodicity",
            spec.to_str().unwrap(),
            "--s",
            "0.3",
            "--shift",
            "1",
            "--seed",
            "4",
            "--report",
        ])
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.contains("\"seed\": 123"));

    // malformed shift arity: usage error
    let out = Command::new(bin())
        .args([
            "periodicity",
            spec.to_str().unwrap(),
            "--s",
            "0.3",
            "--shift",
            "1,0",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn custom_pencils_must_be_flat_for_monodromy() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", PERTURBED_SPEC);
    let out = Command::new(bin())
        .args(["monodromy", bad.to_str().unwrap(), "--s", "0.2,0.3,0.4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stdout));
}
