//! Text renderings of the verification reports: JSON, CSV and a short human
//! summary. Every float is rounded to 12 significant digits first, so reports
//! are stable across platforms and a JSON report re-serializes byte for byte.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::network::Schedule;
use crate::verify::{DemoLeg, DemoReport, LeakReport, SweepReport, Table1Report};

pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Human,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "human" => Ok(Format::Human),
            _ => Err(Error::Parse(format!("unknown format {s:?}"))),
        }
    }
}

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("formatted float parses")
}

/// Shortest form of `round_sig(x)`, in exponent notation outside
/// `[1e-4, 1e12)`; `-0` prints as `0`.
pub fn fmt_sig(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 {
        "0".into()
    } else if r.abs() < 1e-4 || r.abs() >= 1e12 {
        format!("{r:e}")
    } else {
        r.to_string()
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let r = round_sig(n.as_f64().expect("f64 number"));
            *v = serde_json::Number::from_f64(if r == 0.0 { 0.0 } else { r })
                .map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with rounded floats and a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value).map_err(|e| Error::Output(e.to_string()))?;
    round_value(&mut v);
    let mut text = serde_json::to_string_pretty(&v).map_err(|e| Error::Output(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

/// Parses a JSON report and writes it back out; the identity on anything
/// produced by [`to_json`].
pub fn reformat_json(text: &str) -> Result<String> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    to_json(&v)
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| Error::Output(e.to_string());
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.write_record(&row).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Output(e.to_string()))
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

/// A report that can be written in every [`Format`].
pub trait Render: Serialize {
    fn csv(&self) -> Result<String>;
    fn human(&self) -> String;

    fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => to_json(self),
            Format::Csv => self.csv(),
            Format::Human => Ok(self.human()),
        }
    }
}

impl Render for Table1Report {
    fn csv(&self) -> Result<String> {
        csv_text(
            &["error", "expected", "simulated", "match"],
            self.rows.iter().map(|r| {
                vec![r.error.to_string(), r.expected.to_string(), r.simulated.to_string(), r.matches.to_string()]
            }),
        )
    }

    fn human(&self) -> String {
        let mut out = String::from("error  expected  simulated  match\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<6} {:<9} {:<10} {}",
                r.error.to_string(),
                r.expected.to_string(),
                r.simulated.to_string(),
                if r.matches { "yes" } else { "NO" }
            );
        }
        let _ = writeln!(out, "{}/{} syndromes match", self.matched, self.rows.len());
        out
    }
}

fn leg_line(leg: &DemoLeg) -> String {
    let mut line = format!("{:<12} S1={}", format!("{}:", leg.protocol), leg.syndrome_1);
    if let Some(s2) = leg.syndrome_2 {
        let _ = write!(line, " S2={s2}");
    }
    let _ = write!(
        line,
        "  correction {}  weight {}  best fidelity {}",
        leg.correction,
        leg.verdict.weight,
        fmt_sig(leg.verdict.best_fidelity)
    );
    if !leg.restoring_pairs.is_empty() {
        let _ = write!(line, "  restored by {}", leg.restoring_pairs.join(" | "));
    }
    line
}

impl Render for DemoReport {
    fn csv(&self) -> Result<String> {
        csv_text(
            &["protocol", "syndrome_1", "syndrome_2", "correction", "weight", "best_fidelity", "restoring_pairs"],
            [&self.naive, &self.conditional].into_iter().map(|l| {
                vec![
                    l.protocol.to_string(),
                    l.syndrome_1.to_string(),
                    opt(l.syndrome_2),
                    l.correction.to_string(),
                    l.verdict.weight.to_string(),
                    fmt_sig(l.verdict.best_fidelity),
                    l.restoring_pairs.join(" | "),
                ]
            }),
        )
    }

    fn human(&self) -> String {
        let mut out = format!("fault {} on logical {}\n", self.case_id, self.logical);
        let _ = writeln!(out, "{}", leg_line(&self.naive));
        let _ = writeln!(out, "{}", leg_line(&self.conditional));
        let _ = writeln!(
            out,
            "corrections applied: {} (naive) then {} (conditional, second syndrome)",
            self.naive.correction, self.conditional.correction
        );
        let _ = writeln!(out, "{}", if self.reproduced { "reproduced" } else { "NOT reproduced" });
        out
    }
}

impl Render for SweepReport {
    fn csv(&self) -> Result<String> {
        csv_text(
            &[
                "case_id",
                "syndrome_1",
                "syndrome_2",
                "correction",
                "rounds_used",
                "weight",
                "best_correction",
                "best_fidelity",
                "correctable_fraction",
                "pass",
            ],
            self.records.iter().map(|r| {
                vec![
                    r.case_id.clone(),
                    r.syndrome_1.to_string(),
                    opt(r.syndrome_2),
                    r.correction.to_string(),
                    r.rounds_used.to_string(),
                    r.weight.to_string(),
                    opt(r.best_correction),
                    fmt_sig(r.best_fidelity),
                    fmt_sig(r.correctable_fraction),
                    r.pass.to_string(),
                ]
            }),
        )
    }

    fn human(&self) -> String {
        let s = &self.summary;
        let mut out = format!(
            "protocol {}  input {}  logical {}  seed {}\n",
            self.protocol, self.input, self.logical, self.seed
        );
        let _ = writeln!(out, "{}/{} cases pass", s.passed, s.cases);
        let _ = writeln!(out, "weight 0: {}  weight 1: {}  weight many: {}", s.weight_0, s.weight_1, s.weight_many);
        let _ = writeln!(out, "worst best fidelity: {}", fmt_sig(s.worst_best_fidelity));
        if !s.failing_cases.is_empty() {
            let _ = writeln!(out, "failing cases:");
            for id in &s.failing_cases {
                let _ = writeln!(out, "  {id}");
            }
        }
        out
    }
}

impl Render for LeakReport {
    fn csv(&self) -> Result<String> {
        let rows = [&self.even_parity, &self.all_zeros].into_iter().flat_map(|leg| {
            leg.entries.iter().map(move |e| {
                vec![
                    serde_json::to_value(leg.preparation)
                        .ok()
                        .and_then(|v| v.as_str().map(str::to_string))
                        .unwrap_or_default(),
                    e.logical.clone(),
                    fmt_sig(e.data_fidelity),
                    fmt_sig(e.silent_probability),
                    fmt_sig(leg.max_distribution_gap),
                ]
            })
        });
        csv_text(
            &["preparation", "logical", "data_fidelity", "silent_probability", "max_distribution_gap"],
            rows,
        )
    }

    fn human(&self) -> String {
        let mut out = String::new();
        for (name, leg) in [("even-parity registers", &self.even_parity), ("all-zeros registers", &self.all_zeros)] {
            let _ = writeln!(out, "{name}: max distribution gap {}", fmt_sig(leg.max_distribution_gap));
            for e in &leg.entries {
                let _ = writeln!(
                    out,
                    "  {:<5} data fidelity {}  P(syndrome 0000) {}",
                    e.logical,
                    fmt_sig(e.data_fidelity),
                    fmt_sig(e.silent_probability)
                );
            }
        }
        let _ = writeln!(out, "{}", if self.reproduced { "reproduced" } else { "NOT reproduced" });
        out
    }
}

impl Render for Schedule {
    fn csv(&self) -> Result<String> {
        Ok(self.export())
    }

    fn human(&self) -> String {
        let mut out = String::new();
        for g in self.ordered() {
            let ops: Vec<String> = g.operands.iter().map(ToString::to_string).collect();
            let _ = writeln!(
                out,
                "{:>3}  col {:>2}  {:<4} {:<6} {}",
                g.serial,
                g.column,
                g.kind.to_string(),
                ops.join(" "),
                g.location_id
            );
        }
        let _ = writeln!(out, "{} gates ({} CNOT, {} R)", self.gates.len(), self.cnot_count(), self.r_count());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(round_sig(1.0000000000000002), 1.0);
        assert_eq!(fmt_sig(0.1234567890123456), "0.123456789012");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(3.0e-17), "3e-17");
        assert_eq!(fmt_sig(2.359264181873e-33), "2.35926418187e-33");
    }

    #[test]
    fn json_rounds_and_round_trips() {
        let v = serde_json::json!({"a": 0.30000000000000004, "b": [1.0000000000000002, 2], "c": "x"});
        let text = to_json(&v).unwrap();
        assert!(text.contains("0.3,"));
        assert_eq!(reformat_json(&text).unwrap(), text);
    }
}
