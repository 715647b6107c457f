//! Check reports: stable JSON and a plain-text rendering of the same data.

use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        Check { name: name.into(), status, witness: None, detail: None }
    }

    pub fn pass(name: impl Into<String>) -> Self {
        Check::new(name, Status::Pass)
    }

    pub fn fail(name: impl Into<String>) -> Self {
        Check::new(name, Status::Fail)
    }

    pub fn of(name: impl Into<String>, ok: bool) -> Self {
        Check::new(name, Status::from_bool(ok))
    }

    pub fn witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

/// A named computed quantity, rendered in DSL syntax.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Value {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<Value>,
    pub seed: u64,
    pub version: String,
}

pub fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl Report {
    pub fn new(command: &str, input: &str, seed: u64) -> Self {
        Report {
            command: command.to_string(),
            input_digest: digest(input),
            checks: Vec::new(),
            values: Vec::new(),
            seed,
            version: VERSION.to_string(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn value(&mut self, name: impl Into<String>, value: impl Into<String>) {
        self.values.push(Value { name: name.into(), value: value.into() });
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render(&self) -> String {
        let mut out = format!("{} (algforge {}, seed {})\n", self.command, self.version, self.seed);
        for c in &self.checks {
            let _ = write!(out, "{:<12} {}", c.status.label(), c.name);
            if let Some(d) = &c.detail {
                let _ = write!(out, ": {d}");
            }
            out.push('\n');
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "             witness: {w}");
            }
        }
        for v in &self.values {
            let _ = writeln!(out, "{} = {}", v.name, v.value);
        }
        let (pass, fail) = (
            self.checks.iter().filter(|c| c.status == Status::Pass).count(),
            self.checks.iter().filter(|c| c.status == Status::Fail).count(),
        );
        let _ = writeln!(out, "{pass} passed, {fail} failed, {} inconclusive", self.checks.len() - pass - fail);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_schema_and_exit_code() {
        let mut r = Report::new("check", "base 1 (x)", 0);
        r.push(Check::pass("ok"));
        assert_eq!(r.exit_code(), 0);
        r.push(Check::fail("anchor[A, B]").witness("2*x1^3 - 2*x1^2*x2"));
        assert_eq!(r.exit_code(), 1);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["checks"][1]["status"], "fail");
        assert_eq!(v["checks"][1]["witness"], "2*x1^3 - 2*x1^2*x2");
        assert!(v["checks"][0].get("witness").is_none());
        assert_eq!(v["input_digest"].as_str().unwrap().len(), 64);
        assert!(v.get("values").is_none());
    }

    #[test]
    fn inconclusive_does_not_fail() {
        let mut r = Report::new("cohomology", "", 0);
        r.push(Check::new("weak exact", Status::Inconclusive));
        assert_eq!(r.exit_code(), 0);
    }
}
