//! The `verify` binary: arguments, exit codes, documents.

use std::path::Path;
use std::process::{Command, Output};

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(args)
        .env_remove("VERIFY_SEED")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

const CONTACT_DOC: &str = r#"{
  "chart": {"id": "contact-doc", "coords": ["x", "y", "z"], "box": [[-1, 1], [-1, 1], [-1, 1]]},
  "structures": {
    "eta": {"kind": "one_form", "components": {"dx": "-y", "dz": "1"}},
    "xi": {"kind": "vector", "components": {"z": "1"}}
  },
  "claims": ["contact"]
}"#;

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn list_names_builtins_and_suites() {
    let o = verify(&["list"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    for n in ["poisson-r2", "nonclosed-theta-r4", "conformal-kahler", "all"] {
        assert!(text.contains(n), "{n}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(code(&verify(&["check", "jacobi", "--builtin", "contact-r3"])), 0);
    assert_eq!(code(&verify(&["check", "jacobi", "--builtin", "jacobi-violate-r3"])), 1);
    assert_eq!(code(&verify(&["check", "frobnicate", "--builtin", "contact-r3"])), 2);
    assert_eq!(code(&verify(&["check", "jacobi", "--builtin", "nope"])), 2);
    assert_eq!(code(&verify(&["check", "kenmotsu", "--builtin", "poisson-r2"])), 2);
    assert_eq!(code(&verify(&["check", "jacobi"])), 2);
    assert_eq!(
        code(&verify(&["check", "jacobi", "--builtin", "contact-r3", "--chart", "x.json"])),
        2
    );
    assert_eq!(code(&verify(&["check", "jacobi", "--builtin", "contact-r3", "--points", "0"])), 2);
    assert_eq!(code(&verify(&["check", "jacobi", "--builtin", "contact-r3", "--tol-abs", "-1"])), 2);
    assert_eq!(code(&verify(&["frobnicate"])), 2);
    assert_eq!(code(&verify(&["--help"])), 0);
}

#[test]
fn json_report_header() {
    let o = verify(&["check", "jacobi", "--builtin", "contact-r3", "--points", "8", "--seed", "3"]);
    let v = json(&o);
    assert_eq!(v["chart_id"], "builtin:contact-r3");
    assert_eq!(v["suite"], "jacobi");
    assert_eq!(v["points"], 8);
    assert_eq!(v["seed"], 3);
    assert_eq!(v["tol_abs"], 1e-9);
    assert_eq!(v["overall"], true);
    let ids: Vec<_> = v["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["jacobi.schouten", "jacobi.lie_xi_pi", "jacobi.calibration"]);
}

#[test]
fn seed_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(["check", "jacobi", "--builtin", "poisson-r2"])
        .env("VERIFY_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(json(&o)["seed"], 99);
    let o = Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(["check", "jacobi", "--builtin", "poisson-r2", "--seed", "5"])
        .env("VERIFY_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(json(&o)["seed"], 5);
    let o = Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(["check", "jacobi", "--builtin", "poisson-r2"])
        .env("VERIFY_SEED", "many")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    assert_eq!(json(&verify(&["check", "jacobi", "--builtin", "poisson-r2"]))["seed"], 42);
}

#[test]
fn text_format_and_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.txt");
    let o = verify(&[
        "check",
        "jacobi",
        "--builtin",
        "jacobi-violate-r3",
        "--format",
        "text",
        "--report",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("FAIL jacobi.schouten"), "{text}");
    assert!(text.ends_with("overall: FAIL\n"));
}

#[test]
fn documents() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "contact.json", CONTACT_DOC);
    let o = verify(&["check", "contact", "--chart", &good]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["chart_id"], "contact-doc");

    let o = verify(&["check", "all", "--chart", &good]);
    assert_eq!(code(&o), 0);
    let skipped: Vec<_> = json(&o)["skipped"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["suite"].as_str().unwrap().to_string())
        .collect();
    assert!(skipped.contains(&"kenmotsu".to_string()));

    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"chart": {"coords": ["x", "y"]}, "structures": {"omega": {"kind": "two_form", "components": {"dx^dz": "1"}}}}"#,
    );
    let o = verify(&["check", "lcs", "--chart", &bad]);
    assert_eq!(code(&o), 2);
    assert!(!o.stderr.is_empty());

    let broken = write(dir.path(), "broken.json", "{\"chart\": ");
    assert_eq!(code(&verify(&["check", "lcs", "--chart", &broken])), 2);
    let missing = dir.path().join("absent.json");
    assert_eq!(code(&verify(&["check", "lcs", "--chart", missing.to_str().unwrap()])), 2);
}
