//! Verdicts, per-case ratio records, and serializable suite reports.
//!
//! Every verification suite produces a [`SuiteRun`]: one summary report plus
//! the full list of case ratios. Reports embed the resolved configuration so a
//! run is reproducible from the JSON alone, and serialization is byte-stable
//! for a fixed (config, seed) regardless of thread count.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::step::StepFunction;
use crate::sum::Compensated;

/// Outcome classification for a suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Ratios finite and refinement-stable; no sharp constant asserted.
    Bounded,
    /// A declared exact constant held within the declared tolerance.
    ConstantExactOk,
    /// The declared constant was exceeded by more than the tolerance.
    Violated,
    /// Ran, but some hypothesis or norm value is an estimate, not a certificate.
    Conditional,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Bounded => "bounded",
            Verdict::ConstantExactOk => "constant-exact-ok",
            Verdict::Violated => "violated",
            Verdict::Conditional => "conditional",
        };
        f.write_str(s)
    }
}

/// One evaluated inequality instance: `ratio = lhs / rhs` with 0/0 read as 0.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaseRatio {
    pub index: usize,
    /// Which inequality within the suite this row comes from.
    pub kind: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// Summary of a suite run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub label: String,
    /// Short identifier of the claim being exercised.
    pub anchor: String,
    pub n_cases: usize,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    /// Serialized inputs achieving `max_ratio`, when tracked.
    pub argmax_first: Option<String>,
    pub argmax_second: Option<String>,
    /// Relative change of `max_ratio` under one refinement level, when run.
    pub refinement_drift: Option<f64>,
    /// Constant the suite asserts, if any; `Violated` means it was exceeded.
    pub claimed_constant: Option<f64>,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub seed: u64,
    /// Resolved knobs, in insertion order.
    pub config: Vec<(String, String)>,
    pub notes: Vec<String>,
}

/// Report plus its case table; the unit written to disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteRun {
    pub report: VerificationReport,
    pub cases: Vec<CaseRatio>,
}

/// `lhs / rhs` with the 0/0 convention; infinite only when `rhs = 0 < lhs`.
pub fn ratio_of(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else if rhs == 0.0 {
        f64::INFINITY
    } else {
        lhs / rhs
    }
}

/// Accumulates cases and decides the verdict.
///
/// Precedence: `Violated` beats `Conditional` beats
/// `ConstantExactOk`/`Bounded`. A claimed constant `C` with tolerance `tol`
/// is violated when `max_ratio > C + tol`.
#[derive(Debug, Clone)]
pub struct ReportBuilder {
    label: String,
    anchor: String,
    claimed_constant: Option<f64>,
    tolerance: f64,
    exact: bool,
    conditional: bool,
    seed: u64,
    config: Vec<(String, String)>,
    notes: Vec<String>,
    cases: Vec<CaseRatio>,
    max_ratio: f64,
    mean: Compensated,
    argmax_first: Option<String>,
    argmax_second: Option<String>,
    refinement_drift: Option<f64>,
}

impl ReportBuilder {
    pub fn new(label: impl Into<String>, anchor: impl Into<String>) -> Self {
        ReportBuilder {
            label: label.into(),
            anchor: anchor.into(),
            claimed_constant: None,
            tolerance: 0.0,
            exact: false,
            conditional: false,
            seed: 0,
            config: Vec::new(),
            notes: Vec::new(),
            cases: Vec::new(),
            max_ratio: 0.0,
            mean: Compensated::new(),
            argmax_first: None,
            argmax_second: None,
            refinement_drift: None,
        }
    }

    /// Declares the constant the suite asserts. `exact` marks a
    /// constant-exact claim (passing verdict `ConstantExactOk`).
    pub fn claimed(mut self, c: f64, tolerance: f64, exact: bool) -> Self {
        self.claimed_constant = Some(c);
        self.tolerance = tolerance;
        self.exact = exact;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn config_kv(&mut self, key: impl Into<String>, value: impl ToString) {
        self.config.push((key.into(), value.to_string()));
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Marks the run as resting on an estimate or unverified hypothesis.
    pub fn mark_conditional(&mut self) {
        self.conditional = true;
    }

    pub fn set_drift(&mut self, drift: f64) {
        self.refinement_drift = Some(drift);
    }

    /// Records one case; returns its ratio.
    pub fn push_case(&mut self, kind: &str, lhs: f64, rhs: f64) -> f64 {
        self.push_case_with_inputs(kind, lhs, rhs, None, None)
    }

    /// Records one case and keeps the inputs if it is the running argmax.
    pub fn push_case_with_inputs(
        &mut self,
        kind: &str,
        lhs: f64,
        rhs: f64,
        first: Option<&StepFunction>,
        second: Option<&StepFunction>,
    ) -> f64 {
        let ratio = ratio_of(lhs, rhs);
        let index = self.cases.len();
        self.cases.push(CaseRatio {
            index,
            kind: kind.to_string(),
            lhs,
            rhs,
            ratio,
        });
        self.mean.add(ratio);
        if ratio > self.max_ratio {
            self.max_ratio = ratio;
            self.argmax_first = first.map(StepFunction::to_text);
            self.argmax_second = second.map(StepFunction::to_text);
        }
        ratio
    }

    pub fn max_ratio(&self) -> f64 {
        self.max_ratio
    }

    pub fn n_cases(&self) -> usize {
        self.cases.len()
    }

    pub fn finish(self) -> SuiteRun {
        let n = self.cases.len();
        let mean_ratio = if n == 0 { 0.0 } else { self.mean.total() / n as f64 };
        let violated = match self.claimed_constant {
            Some(c) => !(self.max_ratio <= c + self.tolerance),
            None => !self.max_ratio.is_finite(),
        };
        let verdict = if violated {
            Verdict::Violated
        } else if self.conditional {
            Verdict::Conditional
        } else if self.exact {
            Verdict::ConstantExactOk
        } else {
            Verdict::Bounded
        };
        SuiteRun {
            report: VerificationReport {
                label: self.label,
                anchor: self.anchor,
                n_cases: n,
                max_ratio: self.max_ratio,
                mean_ratio,
                argmax_first: self.argmax_first,
                argmax_second: self.argmax_second,
                refinement_drift: self.refinement_drift,
                claimed_constant: self.claimed_constant,
                tolerance: self.tolerance,
                verdict,
                seed: self.seed,
                config: self.config,
                notes: self.notes,
            },
            cases: self.cases,
        }
    }
}

impl SuiteRun {
    pub fn verdict(&self) -> Verdict {
        self.report.verdict
    }

    /// Pretty JSON with a trailing newline; stable field order.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }

    /// Writes JSON atomically (temp file in the same directory, then rename).
    pub fn write_json(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_json_string().as_bytes())
    }

    /// Writes the case table as CSV atomically.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = String::from("index,kind,lhs,rhs,ratio\n");
        for c in &self.cases {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                c.index, c.kind, c.lhs, c.rhs, c.ratio
            ));
        }
        write_atomic(path, out.as_bytes())
    }

    /// One-line human summary for terminal output.
    pub fn summary_line(&self) -> String {
        let r = &self.report;
        let drift = match r.refinement_drift {
            Some(d) => format!(" drift={:.3e}", d),
            None => String::new(),
        };
        format!(
            "{}: {} cases={} max_ratio={:.6e} mean={:.6e}{}",
            r.label, r.verdict, r.n_cases, r.max_ratio, r.mean_ratio, drift
        )
    }
}

/// Writes `bytes` to `path` via a sibling temp file and rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = match path.file_name() {
        Some(name) => {
            let mut n = name.to_os_string();
            n.push(".tmp");
            path.with_file_name(n)
        }
        None => path.with_file_name("out.tmp"),
    };
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}
