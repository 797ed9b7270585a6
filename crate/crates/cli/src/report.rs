//! Defect reports and their serialization.
//!
//! JSON output is byte-stable: keys are sorted and every float is written
//! with 17 significant digits. Non-finite values become `null`.

use std::fmt::Write as _;
use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "confirmed")]
    Confirmed,
    #[serde(rename = "hypothesis-not-met")]
    HypothesisNotMet,
    #[serde(rename = "VIOLATED")]
    Violated,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Confirmed => "confirmed",
            Status::HypothesisNotMet => "hypothesis-not-met",
            Status::Violated => "VIOLATED",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    /// `suite.name`.
    pub id: String,
    /// The identity being measured, in formula form.
    pub anchor: String,
    pub max_abs_defect: f64,
    pub scale: f64,
    pub pass: bool,
    pub status: Status,
    /// Informational checks never affect `overall`.
    pub informational: bool,
    /// Largest hypothesis defect, for conditional checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Skipped {
    pub suite: String,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DefectReport {
    pub tool_version: String,
    pub chart_id: String,
    pub suite: String,
    pub seed: u64,
    pub points: usize,
    pub tol_abs: f64,
    pub tol_rel: f64,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<Skipped>,
    pub overall: bool,
}

impl DefectReport {
    pub fn new(chart_id: &str, suite: &str, seed: u64, points: usize, tol_abs: f64, tol_rel: f64) -> Self {
        DefectReport {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            chart_id: chart_id.to_string(),
            suite: suite.to_string(),
            seed,
            points,
            tol_abs,
            tol_rel,
            checks: Vec::new(),
            skipped: Vec::new(),
            overall: true,
        }
    }

    pub fn push(&mut self, c: CheckRecord) {
        self.checks.push(c);
        self.recompute();
    }

    /// `overall` is the conjunction of `pass` over non-informational checks.
    pub fn recompute(&mut self) {
        self.overall = self.checks.iter().all(|c| c.informational || c.pass);
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        // Going through `Value` sorts the keys.
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloat(PrettyFormatter::new()));
        value.serialize(&mut ser).expect("writing to memory");
        out.push(b'\n');
        String::from_utf8(out).expect("JSON is UTF-8")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "verify {} suite={} chart={}", self.tool_version, self.suite, self.chart_id);
        let _ = writeln!(
            s,
            "seed={} points={} tol_abs={:e} tol_rel={:e}",
            self.seed, self.points, self.tol_abs, self.tol_rel
        );
        for c in &self.checks {
            let flag = match (c.pass, c.informational) {
                (_, true) => "info",
                (true, false) => "PASS",
                (false, false) => "FAIL",
            };
            let _ = write!(
                s,
                "{flag:<5}{:<40} defect={} scale={} [{}]",
                c.id,
                fmt_float(c.max_abs_defect),
                fmt_float(c.scale),
                c.status.as_str()
            );
            if let Some(h) = c.hypothesis_defect {
                let _ = write!(s, " hypothesis={}", fmt_float(h));
            }
            let _ = writeln!(s, "\n     {}", c.anchor);
            if let Some(n) = &c.note {
                let _ = writeln!(s, "     note: {n}");
            }
        }
        for k in &self.skipped {
            let _ = writeln!(s, "skip {}: {}", k.suite, k.reason);
        }
        let _ = writeln!(s, "overall: {}", if self.overall { "PASS" } else { "FAIL" });
        s
    }
}

fn fmt_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.3e}")
    } else {
        "n/a".to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl Format {
    pub fn render(self, r: &DefectReport) -> String {
        match self {
            Format::Json => r.to_json(),
            Format::Text => r.to_text(),
        }
    }
}

/// Writes the report to `path`, or to stdout when `path` is `None`.
pub fn emit_report(r: &DefectReport, format: Format, path: Option<&std::path::Path>) -> io::Result<()> {
    let text = format.render(r);
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

/// Pretty printer with floats in `{:.16e}`.
struct FixedFloat(PrettyFormatter<'static>);

impl Formatter for FixedFloat {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }
    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(pass: bool, informational: bool) -> CheckRecord {
        CheckRecord {
            id: "x.y".into(),
            anchor: "a = b".into(),
            max_abs_defect: 0.1,
            scale: f64::NAN,
            pass,
            status: if pass { Status::Pass } else { Status::Fail },
            informational,
            hypothesis_defect: None,
            note: None,
        }
    }

    #[test]
    fn empty_report_passes() {
        let r = DefectReport::new("c", "jacobi", 1, 32, 1e-9, 1e-9);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["overall"], true);
        assert_eq!(v["checks"], serde_json::json!([]));
        assert!(v.get("skipped").is_none());
    }

    #[test]
    fn failure_flips_overall_unless_informational() {
        let mut r = DefectReport::new("c", "jacobi", 1, 32, 1e-9, 1e-9);
        r.push(record(false, true));
        assert!(r.overall);
        r.push(record(false, false));
        assert!(!r.overall);
    }

    #[test]
    fn json_is_sorted_and_fixed_width() {
        let mut r = DefectReport::new("c", "jacobi", 1, 32, 1e-9, 1e-9);
        r.push(record(true, false));
        let text = r.to_json();
        assert!(text.contains("\"max_abs_defect\": 1.0000000000000001e-1"), "{text}");
        assert!(text.contains("\"scale\": null"));
        assert!(text.find("\"anchor\"").unwrap() < text.find("\"id\"").unwrap());
        assert!(text.find("\"checks\"").unwrap() < text.find("\"tool_version\"").unwrap());
        assert_eq!(text, r.clone().to_json());
    }

    #[test]
    fn text_lists_checks() {
        let mut r = DefectReport::new("c", "jacobi", 1, 32, 1e-9, 1e-9);
        r.push(record(false, false));
        let t = r.to_text();
        assert!(t.contains("FAIL x.y") && t.ends_with("overall: FAIL\n"), "{t}");
    }
}
