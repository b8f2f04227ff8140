use std::collections::BTreeMap;
use std::fmt::Write as _;

use hermsym::{ComplexMatrix, Tolerances};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    PassWithWarnings,
    Fail,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass | Verdict::PassWithWarnings => 0,
            Verdict::Fail => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualEntry {
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// One row of the bound-state table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateRow {
    pub n: usize,
    pub energy: f64,
    pub node_count: usize,
    pub classification: String,
    pub sign_product: String,
    pub agreement: bool,
}

/// `{"re": [[..]], "im": [[..]]}`, the same layout as the matrix input file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        Self {
            re: m.re_rows(),
            im: m.im_rows(),
        }
    }
}

/// Everything a command produced. Maps are ordered so that serialization is
/// byte-for-byte reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub verdict: Verdict,
    pub inputs: BTreeMap<String, Value>,
    pub tolerances: BTreeMap<String, f64>,
    pub residuals: BTreeMap<String, ResidualEntry>,
    pub signatures: BTreeMap<String, Vec<i8>>,
    pub states: Vec<StateRow>,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
}

impl RunReport {
    pub fn new(command: &str, tol: &Tolerances) -> Self {
        let tolerances = BTreeMap::from([
            ("hermiticity".to_string(), tol.hermiticity),
            ("verification".to_string(), tol.verification),
            ("degeneracy_gap".to_string(), tol.degeneracy_gap),
            ("phase_floor".to_string(), tol.phase_floor),
            ("amplitude_floor".to_string(), tol.amplitude_floor),
        ]);
        Self {
            command: command.to_string(),
            verdict: Verdict::Pass,
            inputs: BTreeMap::new(),
            tolerances,
            residuals: BTreeMap::new(),
            signatures: BTreeMap::new(),
            states: Vec::new(),
            warnings: Vec::new(),
            details: BTreeMap::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) {
        self.inputs.insert(key.to_string(), to_value(value));
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        self.details.insert(key.to_string(), to_value(value));
    }

    pub fn residual(&mut self, label: impl Into<String>, value: f64, tolerance: f64) {
        let entry = ResidualEntry {
            value,
            tolerance,
            passed: value <= tolerance,
        };
        self.residuals.insert(label.into(), entry);
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }

    /// Fail iff some residual exceeds its tolerance; otherwise warnings
    /// downgrade Pass to PassWithWarnings.
    pub fn finish(mut self) -> Self {
        self.verdict = if self.residuals.values().any(|r| !r.passed) {
            Verdict::Fail
        } else if !self.warnings.is_empty() {
            Verdict::PassWithWarnings
        } else {
            Verdict::Pass
        };
        self
    }

    pub fn failed_residuals(&self) -> impl Iterator<Item = (&String, &ResidualEntry)> {
        self.residuals.iter().filter(|(_, r)| !r.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report values are always serializable")
    }

    /// Human-readable rendering for `--pretty`.
    pub fn render_pretty(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}: {:?}", self.command, self.verdict);
        if !self.inputs.is_empty() {
            let _ = writeln!(out, "\ninputs");
            for (k, v) in &self.inputs {
                let _ = writeln!(out, "  {k:<16} {v}");
            }
        }
        if !self.residuals.is_empty() {
            let _ = writeln!(out, "\n  {:<34} {:>12} {:>12}", "residual", "value", "tolerance");
            for (k, r) in &self.residuals {
                let mark = if r.passed { "" } else { "  FAIL" };
                let _ = writeln!(out, "  {k:<34} {:>12.3e} {:>12.3e}{mark}", r.value, r.tolerance);
            }
        }
        if !self.signatures.is_empty() {
            let _ = writeln!(out, "\nsignatures");
            for (k, s) in &self.signatures {
                let signs: Vec<&str> = s.iter().map(|&x| if x > 0 { "+" } else { "-" }).collect();
                let _ = writeln!(out, "  {k:<4} ({})", signs.join(", "));
            }
        }
        if !self.states.is_empty() {
            let _ = writeln!(
                out,
                "\n  {:>3} {:>18} {:>6} {:>6} {:>5} {:>6}",
                "n", "E", "nodes", "class", "sign", "agree"
            );
            for s in &self.states {
                let _ = writeln!(
                    out,
                    "  {:>3} {:>18.12} {:>6} {:>6} {:>5} {:>6}",
                    s.n, s.energy, s.node_count, s.classification, s.sign_product, s.agreement
                );
            }
        }
        for (k, v) in &self.details {
            if !matches!(v, Value::Object(_)) {
                let _ = writeln!(out, "\n{k}: {v}");
            }
        }
        if !self.warnings.is_empty() {
            let _ = writeln!(out, "\nwarnings");
            for w in &self.warnings {
                let _ = writeln!(out, "  {w}");
            }
        }
        out
    }
}

fn to_value(value: impl Serialize) -> Value {
    serde_json::to_value(value).expect("report values are always serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_follows_residuals_then_warnings() {
        let tol = Tolerances::default();
        let mut r = RunReport::new("t", &tol);
        r.residual("a", 1e-12, 1e-10);
        assert_eq!(r.clone().finish().verdict, Verdict::Pass);
        r.warn("degenerate");
        assert_eq!(r.clone().finish().verdict, Verdict::PassWithWarnings);
        r.residual("b", 1.0, 1e-10);
        let done = r.finish();
        assert_eq!(done.verdict, Verdict::Fail);
        assert_eq!(done.verdict.exit_code(), 1);
        assert_eq!(done.failed_residuals().count(), 1);
    }

    #[test]
    fn report_json_has_the_documented_top_level_keys() {
        let report = RunReport::new("demo", &Tolerances::default()).finish();
        let v: Value = serde_json::from_str(&report.to_json()).unwrap();
        for key in ["command", "verdict", "residuals", "signatures", "states", "warnings"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["tolerances"]["verification"], 1e-10);
    }
}
