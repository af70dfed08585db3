//! Pass/fail bookkeeping shared by the verification routines.

use std::fmt::Write as _;

/// One checked statement over one scope (an interval, a parameter cell, ...).
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub claim: String,
    pub scope: String,
    pub passed: bool,
    /// Smallest margin observed; negative means violated.
    pub worst_slack: f64,
    /// First failing point, or the tightest point when everything passed.
    pub witness: Option<String>,
    pub samples: usize,
}

impl CheckOutcome {
    pub fn new(claim: impl Into<String>, scope: impl Into<String>) -> Self {
        Self {
            claim: claim.into(),
            scope: scope.into(),
            passed: true,
            worst_slack: f64::INFINITY,
            witness: None,
            samples: 0,
        }
    }

    /// Records a sample with margin `slack`; `ok` decides pass/fail.
    pub fn record(&mut self, slack: f64, ok: bool, witness: impl FnOnce() -> String) {
        self.samples += 1;
        let first_failure = !ok && self.passed;
        if first_failure || (self.passed && slack < self.worst_slack) {
            self.witness = Some(witness());
        }
        if slack < self.worst_slack || slack.is_nan() {
            self.worst_slack = slack;
        }
        if !ok {
            self.passed = false;
        }
    }

    pub fn merge(&mut self, other: CheckOutcome) {
        self.samples += other.samples;
        if self.passed && (!other.passed || other.worst_slack < self.worst_slack) {
            self.witness = other.witness.clone();
        }
        self.passed &= other.passed;
        if other.worst_slack < self.worst_slack || other.worst_slack.is_nan() {
            self.worst_slack = other.worst_slack;
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerificationReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerificationReport {
    pub fn push(&mut self, outcome: CheckOutcome) {
        self.checks.push(outcome);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn find(&self, claim: &str) -> impl Iterator<Item = &CheckOutcome> + '_ {
        let claim = claim.to_string();
        self.checks.iter().filter(move |c| c.claim == claim)
    }

    /// CSV with columns `claim,interval,status,worst_slack,witness`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("claim,interval,status,worst_slack,witness\n");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                csv_field(&c.claim),
                csv_field(&c.scope),
                if c.passed { "pass" } else { "fail" },
                crate::format::sig(c.worst_slack),
                csv_field(c.witness.as_deref().unwrap_or("")),
            );
        }
        out
    }
}

pub(crate) fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_first_failure_as_witness() {
        let mut c = CheckOutcome::new("x", "all");
        c.record(0.5, true, || "a".into());
        c.record(-1.0, false, || "b".into());
        c.record(-2.0, false, || "c".into());
        assert!(!c.passed);
        assert_eq!(c.witness.as_deref(), Some("b"));
        assert_eq!(c.worst_slack, -2.0);
        assert_eq!(c.samples, 3);
    }

    #[test]
    fn csv_quotes_commas() {
        let mut r = VerificationReport::default();
        let mut c = CheckOutcome::new("4.1", "[0.5, 1]");
        c.record(0.25, true, || "eta=0.5".into());
        r.push(c);
        let csv = r.to_csv();
        assert!(csv.starts_with("claim,interval,status,worst_slack,witness\n"));
        assert!(csv.contains("4.1,\"[0.5, 1]\",pass,0.25,eta=0.5"));
    }
}
