//! Checked-in reference outputs. Set `FTQEC_BLESS=1` to rewrite them.

use std::path::PathBuf;

use ftqec::code5::build_c0;
use ftqec::network::build_schedule;
use ftqec::report::{to_json, Render};
use ftqec::verify::{demo_naive_failure, reproduce_table1, FIDELITY_TOL};
use serde_json::Value;

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn check_text(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("FTQEC_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap();
    assert_eq!(actual, expected, "{name} differs");
}

/// Same structure, same strings, numbers within 1e-9.
fn same_json(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => (x.as_f64().unwrap() - y.as_f64().unwrap()).abs() < 1e-9,
        (Value::Array(x), Value::Array(y)) => x.len() == y.len() && x.iter().zip(y).all(|(p, q)| same_json(p, q)),
        (Value::Object(x), Value::Object(y)) => {
            x.len() == y.len() && x.iter().all(|(k, v)| y.get(k).is_some_and(|w| same_json(v, w)))
        }
        _ => a == b,
    }
}

fn check_json(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("FTQEC_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let actual: Value = serde_json::from_str(actual).unwrap();
    assert!(same_json(&actual, &expected), "{name} differs:\n{actual:#}");
}

#[test]
fn codeword_terms() {
    let text = std::fs::read_to_string(golden("codeword_c0.txt")).unwrap();
    let c0 = build_c0();
    let mut seen = 0;
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let (bits, amp) = line.split_once(' ').unwrap();
        let amp: f64 = amp.parse().unwrap();
        let got = c0.amplitude(bits).unwrap();
        assert!((got.re - amp).abs() < 1e-15 && got.im == 0.0, "{bits}");
        seen += 1;
    }
    assert_eq!(seen, 16);
    let support = c0.amplitudes().iter().filter(|a| a.norm() > 0.0).count();
    assert_eq!(support, 16);
}

#[test]
fn table1_report() {
    let r = reproduce_table1(&build_schedule(), 0).unwrap();
    check_json("table1.json", &to_json(&r).unwrap());
}

#[test]
fn demo_report() {
    let r = demo_naive_failure(&build_schedule(), 0, FIDELITY_TOL).unwrap();
    check_json("demo.json", &to_json(&r).unwrap());
    check_text("demo.txt", &r.human());
}

#[test]
fn schedule_export() {
    check_text("schedule.csv", &build_schedule().export());
}
