use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_symcoerce"));
    c.env_remove("SYMCOERCE_SEED");
    c
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = run(&full);
    let v: Value = serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\nstdout: {}\nstderr: {}", stdout(&o), String::from_utf8_lossy(&o.stderr)));
    (v, o.status.code().unwrap())
}

fn validator() -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

#[test]
fn malgrange_text_report() {
    let o = run(&["coercive2d", "(D1+i)*(D2+i)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("WEAKLY COERCIVE (not elliptic)"));
}

#[test]
fn existence_text_report() {
    let o = run(&["exists", "--weights", "1,1,1", "--N", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "NO l-quasielliptic system exists (3 odd > 2N−1=1)");
}

#[test]
fn wave_operator_text_report() {
    let o = run(&["classify", "D1^2+D2^2-D3^2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("NOT weakly coercive (rule R3, de Leeuw–Mirkil)"));
}

#[test]
fn inconclusive_exit_code() {
    let f = fixture("split5.ops");
    let o = run(&["classify", "--file", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("INCONCLUSIVE"));
}

#[test]
fn input_errors_exit_two_with_diagnostics() {
    let o = run(&["classify", "D1^2+"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("1:5"), "{err}");
    assert!(err.contains('^'));

    let f = fixture("broken.ops");
    let o = run(&["classify", "--file", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["coercive2d", "D1*D2*D3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["exists", "--weights", "1,1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["classify"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["witness", "D1^2+D2^2", "--alpha", "1,0", "--direction", "1,0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["classify", "--dump", "csv:/dev/null", "D1^2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn seed_from_environment() {
    let a = bin().args(["--json", "classify", "D1^2+D2^2+D3^2"]).env("SYMCOERCE_SEED", "42").output().unwrap();
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seeds"], serde_json::json!([42]));
    let b = bin().args(["--json", "--seed", "7", "classify", "D1^2+D2^2+D3^2"]).env("SYMCOERCE_SEED", "42").output().unwrap();
    let v: Value = serde_json::from_slice(&b.stdout).unwrap();
    assert_eq!(v["seeds"], serde_json::json!([7]));
    let c = bin().args(["classify", "D1^2"]).env("SYMCOERCE_SEED", "nope").output().unwrap();
    assert_eq!(c.status.code(), Some(2));
}

fn corpus() -> Vec<Vec<String>> {
    let f = |n: &str| fixture(n).to_str().unwrap().to_string();
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    vec![
        s(&["classify", "--file", &f("malgrange.ops")]),
        s(&["classify", "--file", &f("laplace3.ops")]),
        s(&["classify", "--file", &f("wave3.ops")]),
        s(&["classify", "--file", &f("split5.ops")]),
        s(&["elliptic", "--file", &f("laplace3.ops")]),
        s(&["elliptic", "--file", &f("dalembert.ops")]),
        s(&["elliptic", "--file", &f("anisotropic.ops"), "--weights", "2,3"]),
        s(&["coercive2d", "--normal-form", "--file", &f("malgrange.ops")]),
        s(&["coercive2d", "--file", &f("dalembert.ops")]),
        s(&["resultant2d", "--file", &f("malgrange.ops")]),
        s(&["resultant2d", "D1^2+D2"]),
        s(&["exists", "--weights", "1,1,1", "--N", "1"]),
        s(&["exists", "--weights", "2,4,6", "--N", "1"]),
        s(&["construct", "--weights", "1,2,2", "--N", "1"]),
        s(&["subordinate", "--file", &f("laplace3.ops"), "--Q", "D1*D2"]),
        s(&["subordinate", "--file", &f("dalembert.ops"), "--Q", "D1^2"]),
        s(&["s-system", "--file", &f("laplace3.ops")]),
        s(&["minimality", "--file", &f("laplace3.ops"), "--drop", "2,1"]),
        s(&["multiplier-check", "--file", &f("malgrange.ops")]),
        s(&["multiplier-check", "1", "--denominator", "(D1+i)*(D2+i)", "--delta", "1/2"]),
        s(&["multiplier-check", "--file", &f("laplace3.ops"), "--gamma", "1,0,0", "--delta", "1/6"]),
        s(&["witness", "--file", &f("dalembert.ops"), "--alpha", "1,0", "--direction", "1,1", "--steps", "6"]),
        s(&["witness", "--file", &f("malgrange.ops"), "--alpha", "1,0", "--direction", "1,0", "--steps", "6"]),
        s(&["restrict", "--file", &f("wave3.ops"), "--keep", "1,3"]),
    ]
}

#[test]
fn json_reports_validate_and_are_deterministic() {
    let v = validator();
    let mut seen = std::collections::BTreeSet::new();
    for args in corpus() {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        let (mut first, code) = json(&a);
        assert!(code == 0 || code == 1, "{args:?} exited {code}");
        let errors: Vec<String> = v.iter_errors(&first).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
        assert_eq!(first["outcome"] == "verdict", code == 0, "{args:?}");
        seen.insert(first["command"].as_str().unwrap().to_string());
        let (mut second, _) = json(&a);
        first["timing_ms"] = Value::Null;
        second["timing_ms"] = Value::Null;
        assert_eq!(first, second, "{args:?} is not deterministic");
    }
    assert_eq!(seen.len(), 12, "{seen:?}");
}

#[test]
fn json_report_fields() {
    let (v, _) = json(&["classify", "D1^2+D2^2-D3^2"]);
    assert_eq!(v["schema"], "symcoerce-report/1");
    assert_eq!(v["input"], serde_json::json!(["D1^2 + D2^2 - D3^2"]));
    assert_eq!(v["payload"]["status"]["status"], "NotWeaklyCoercive");
    let rules = v["rules"].as_array().unwrap();
    let r3 = rules.iter().find(|r| r["rule"] == "R3").unwrap();
    assert!(r3["citation"].as_str().unwrap().starts_with("deLeu-Mir"));
}

#[test]
fn construct_output_round_trips_through_file() {
    let o = run(&["construct", "--weights", "2,2,3", "--N", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text: String = stdout(&o).lines().skip(1).map(|l| format!("{}\n", l.trim())).collect();
    assert!(text.starts_with("weights: 2 2 3\n"), "{text}");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("built.ops");
    std::fs::write(&path, text).unwrap();
    let o = run(&["elliptic", "--file", path.to_str().unwrap(), "--weights", "2,2,3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("QUASIELLIPTIC"), "{}", stdout(&o));
}

#[test]
fn csv_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("witness.csv");
    let spec = format!("csv:{}", w.display());
    let o = run(&["witness", "D1^2-D2^2", "--alpha", "1,0", "--direction", "1,1", "--steps", "5", "--dump", &spec]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&w).unwrap();
    assert_eq!(text.lines().next(), Some("t,lower,upper,ratio"));
    assert_eq!(text.lines().count(), 6);

    let m = dir.path().join("mult.csv");
    let spec = format!("csv:{}", m.display());
    let o = run(&["multiplier-check", "D1+i", "--dump", &spec]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&m).unwrap();
    assert_eq!(text.lines().next(), Some("point,condition,value"));
    assert!(text.lines().count() > 100);
}
