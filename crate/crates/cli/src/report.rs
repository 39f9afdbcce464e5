use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
            witness: None,
        }
    }

    pub fn with_witness(mut self, witness: Option<String>) -> Self {
        self.witness = witness;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub trunc_k: usize,
    pub weight: usize,
    pub arity: usize,
    pub variant: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub suite: String,
    pub seed: u64,
    pub bounds: Bounds,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Results hold modulo a truncation.
    pub truncated: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl RunReport {
    pub fn new(suite: &str, seed: u64, bounds: Bounds, mut checks: Vec<Check>, mut truncated: Vec<String>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        truncated.sort();
        truncated.dedup();
        RunReport {
            suite: suite.to_string(),
            seed,
            bounds,
            passed: checks.iter().all(|c| c.passed),
            checks,
            truncated,
            elapsed: Duration::ZERO,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn structured(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        let b = &self.bounds;
        let _ = writeln!(
            out,
            "suite {} (seed {}, K = {}, weight {}, arity {}, {})",
            self.suite, self.seed, b.trunc_k, b.weight, b.arity, b.variant
        );
        for c in &self.checks {
            let _ = writeln!(out, "  {} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "       witness: {w}");
            }
        }
        for t in &self.truncated {
            let _ = writeln!(out, "  note: {t}");
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(
            out,
            "{}: {passed}/{} checks passed in {:.2?}",
            if self.passed { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.elapsed
        );
        out
    }
}
