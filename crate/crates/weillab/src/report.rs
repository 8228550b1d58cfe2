//! Report documents and flat tables.

use serde::Serialize;
use serde_json::{Map, Value};

/// How a verdict was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Interval,
    Float,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// Advisory checks are reported but do not affect the verdict.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub advisory: bool,
    pub detail: Value,
}

impl Check {
    pub fn exact(name: &str, holds: bool, detail: Value) -> Self {
        Check { name: name.to_owned(), holds, mode: Mode::Exact, tolerance: None, advisory: false, detail }
    }

    pub fn float(name: &str, holds: bool, tolerance: f64, detail: Value) -> Self {
        Check { name: name.to_owned(), holds, mode: Mode::Float, tolerance: Some(tolerance), advisory: false, detail }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn advisory(mut self) -> Self {
        self.advisory = true;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Error => 2,
        }
    }

    /// The worse of two verdicts.
    pub fn and(self, other: Verdict) -> Verdict {
        Ord::max(self, other)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

pub const TOOL: Tool = Tool { name: "weillab", version: env!("CARGO_PKG_VERSION") };

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| (*s).to_owned()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_tsv(&self) -> String {
        let mut out = self.header.join("\t");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join("\t"));
            out.push('\n');
        }
        out
    }
}

/// A command's output document.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tool: Tool,
    pub command: String,
    pub config: Map<String, Value>,
    #[serde(flatten)]
    pub body: Map<String, Value>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Map<String, Value>>,
    #[serde(skip)]
    pub table: Table,
}

impl Report {
    pub fn new(command: &str, config: Map<String, Value>) -> Self {
        Report {
            tool: TOOL,
            command: command.to_owned(),
            config,
            body: Map::new(),
            checks: Vec::new(),
            errors: Vec::new(),
            verdict: Verdict::Pass,
            timings_ms: None,
            table: Table::default(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.body.insert(key.to_owned(), serde_json::to_value(value).expect("report values serialize"));
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn error(&mut self, msg: impl ToString) {
        self.errors.push(msg.to_string());
    }

    /// Error if any stage failed, otherwise fail if any non-advisory check
    /// failed.
    pub fn finish(&mut self) {
        self.verdict = if !self.errors.is_empty() {
            Verdict::Error
        } else if self.checks.iter().any(|c| !c.advisory && !c.holds) {
            Verdict::Fail
        } else {
            Verdict::Pass
        };
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.holds && !c.advisory).map(|c| c.name.as_str()).collect()
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn verdict_ordering() {
        assert_eq!(Verdict::Pass.and(Verdict::Fail), Verdict::Fail);
        assert_eq!(Verdict::Error.and(Verdict::Fail), Verdict::Error);
        assert_eq!(Verdict::Fail.exit_code(), 1);
    }

    #[test]
    fn advisory_checks_do_not_fail() {
        let mut r = Report::new("zeta", Map::new());
        r.check(Check::exact("a", true, json!(null)));
        r.check(Check::exact("b", false, json!(null)).advisory());
        r.finish();
        assert_eq!(r.verdict, Verdict::Pass);
        r.check(Check::float("c", false, 1e-9, json!({})));
        r.finish();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.failed_checks(), ["c"]);
        let text = r.to_json();
        assert!(text.contains("\"tolerance\": 1e-9"));
        assert!(!text.contains("table"));
    }

    #[test]
    fn tsv_layout() {
        let mut t = Table::new(&["m", "N"]);
        t.push(vec!["1".into(), "3".into()]);
        assert_eq!(t.to_tsv(), "m\tN\n1\t3\n");
    }
}
