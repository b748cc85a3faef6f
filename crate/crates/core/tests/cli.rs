//! End-to-end runs of the `optomech` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_optomech"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn optomech")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const STABILITY: &str = r#"{
  "schema": "optomech.run/v1",
  "pipeline": "stability",
  "drive": { "omega": 1.0, "lambda": 20.0, "kappa": 0.08, "gamma_m": 0.01,
             "coupling": { "effective": { "g_a": 2.5, "g_b": 2.5 } } },
  "delta": { "min": -2.0, "max": 2.0, "n": 5 }
}"#;

fn sweep_config(g: f64) -> String {
    format!(
        r#"{{
  "schema": "optomech.run/v1",
  "pipeline": "steady-sweep",
  "drive": {{ "omega": 1.0, "lambda": 20.0, "kappa": 0.08, "gamma_m": 0.01,
             "coupling": {{ "effective": {{ "g_a": {g}, "g_b": {g} }} }} }},
  "delta": {{ "min": -3.0, "max": 3.0, "n": 7 }},
  "nbar": {{ "values": [0.0, 5.0] }}
}}"#
    )
}

fn header(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

#[test]
fn shipped_configs_validate() {
    for name in ["fig1.json", "fig2.json", "fig3.json", "stability.json"] {
        let out = run(&["validate", "--config", configs().join(name).to_str().unwrap()]);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn headers_are_exact() {
    let dir = tempfile::tempdir().unwrap();
    let unitary = write(
        dir.path(),
        "u.json",
        r#"{"schema":"optomech.run/v1","pipeline":"bo-unitary",
            "bo":{"omega":1.0,"g":0.01,"lambda":0.1,"alpha_a":4.0,"alpha_b":1.0},
            "time":{"t_max":5.0,"n_steps":5}}"#,
    );
    let dissipative = write(
        dir.path(),
        "d.json",
        r#"{"schema":"optomech.run/v1","pipeline":"bo-dissipative",
            "bo":{"omega":1.0,"g":0.01,"lambda":0.1,"alpha_a":1.0,"alpha_b":1.0},
            "dissipation":{"kappa":0.001,"gamma":0.0001},
            "time":{"t_max":5.0,"n_steps":5}}"#,
    );
    let sweep = write(dir.path(), "s.json", &sweep_config(2.5));
    let stab = write(dir.path(), "st.json", STABILITY);
    let cases = [
        ("bo-unitary", &unitary, "t,n_thermal,negativity"),
        ("bo-dissipative", &dissipative, "t,negativity"),
        ("steady-sweep", &sweep, "delta,nbar,stable,neg_m1m2,neg_m1ca,neg_m1cb"),
        ("stability", &stab, "delta,abscissa,stable"),
    ];
    for (cmd, cfg, expect) in cases {
        let csv = dir.path().join(format!("{cmd}.csv"));
        let out = run(&[cmd, "--config", cfg.to_str().unwrap(), "--out", csv.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(header(&csv), expect);
    }
}

#[test]
fn unknown_key_is_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", &STABILITY.replacen("\"delta\"", "\"detla\": 1, \"delta\"", 1));
    let out = run(&["validate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("detla"));
}

#[test]
fn wrong_schema_is_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", &STABILITY.replace("optomech.run/v1", "optomech.run/v0"));
    assert_eq!(run(&["validate", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn pipeline_mismatch_is_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "st.json", STABILITY);
    let csv = dir.path().join("x.csv");
    let out = run(&["steady-sweep", "--config", cfg.to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!csv.exists());
}

#[test]
fn unstable_points_give_partial_exit() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.json", &sweep_config(40.0));
    let csv = dir.path().join("s.csv");
    let out = run(&["steady-sweep", "--config", cfg.to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 14);
    assert!(text.lines().skip(1).any(|l| l.ends_with(",false,,,")));
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.json", &sweep_config(2.5));
    let mut outputs = Vec::new();
    for threads in ["1", "3", "1"] {
        let csv = dir.path().join(format!("s{}.csv", outputs.len()));
        let out = run(&[
            "steady-sweep",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            csv.to_str().unwrap(),
            "--threads",
            threads,
        ]);
        assert!(out.status.code() == Some(0) || out.status.code() == Some(2));
        outputs.push(std::fs::read(&csv).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn missing_output_is_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "st.json", STABILITY);
    assert_eq!(run(&["stability", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn missing_config_is_fatal() {
    assert_eq!(run(&["validate", "--config", "/nonexistent/x.json"]).status.code(), Some(1));
}

#[test]
fn published_schemas_match_writer() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas/csv.json");
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let tables = doc["tables"].as_object().unwrap();
    assert_eq!(tables.len(), optomech::Pipeline::ALL.len());
    for p in optomech::Pipeline::ALL {
        assert_eq!(tables[p.name()]["header"].as_str(), Some(p.csv_header()), "{p}");
    }
}
