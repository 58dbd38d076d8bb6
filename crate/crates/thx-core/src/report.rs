//! Named verification checks with counterexample witnesses.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    /// Instances not evaluated because they leave the computed degrees.
    pub skipped: usize,
    pub witness: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check { name: name.into(), passed: 0, failed: 0, skipped: 0, witness: None }
    }

    pub fn single(name: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) -> Self {
        let mut c = Check::new(name);
        c.record(ok, witness);
        c
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    pub fn absorb(&mut self, other: Check) {
        self.passed += other.passed;
        self.failed += other.failed;
        self.skipped += other.skipped;
        if self.witness.is_none() {
            self.witness = other.witness;
        }
    }

    pub fn status(&self) -> Status {
        if self.failed == 0 {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status() {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        write!(f, "{tag:4} {:<42} checked {:>6}", self.name, self.passed + self.failed)?;
        if self.skipped > 0 {
            write!(f, ", out of range {}", self.skipped)?;
        }
        if let Some(w) = &self.witness {
            write!(f, "\n       witness: {w}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.failed == 0)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.failed > 0)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn total_failed(&self) -> usize {
        self.checks.iter().map(|c| c.failed).sum()
    }

    pub fn total_checked(&self) -> usize {
        self.checks.iter().map(|c| c.passed + c.failed).sum()
    }

    pub fn total_skipped(&self) -> usize {
        self.checks.iter().map(|c| c.skipped).sum()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_witness_is_kept() {
        let mut c = Check::new("x");
        c.record(true, || unreachable!());
        c.record(false, || "a".into());
        c.record(false, || "b".into());
        c.skip();
        assert_eq!((c.passed, c.failed, c.skipped), (1, 2, 1));
        assert_eq!(c.witness.as_deref(), Some("a"));
        let mut r = VerificationReport::new();
        r.push(c);
        assert!(!r.ok());
        assert_eq!(r.failures().count(), 1);
    }
}
