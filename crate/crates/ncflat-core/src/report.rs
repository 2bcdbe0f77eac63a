//! Structured verification results: every identity a suite checks becomes one
//! record, and the report is the full list — nothing is summarized away.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The check could not be attempted (e.g. a search found no candidate to
    /// verify); skips are never silently counted as passes.
    Skipped,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckStatus::Pass => write!(f, "pass"),
            CheckStatus::Fail => write!(f, "FAIL"),
            CheckStatus::Skipped => write!(f, "skipped"),
        }
    }
}

/// One verified identity: a stable id, the statement that was checked, the
/// outcome, and (on failure or skip) a witness or reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckRecord {
    pub id: String,
    pub identity: String,
    pub status: CheckStatus,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new() -> Report {
        Report { checks: Vec::new() }
    }

    pub fn record(&mut self, id: &str, identity: &str, status: CheckStatus, witness: Option<String>) {
        self.checks.push(CheckRecord {
            id: String::from(id),
            identity: String::from(identity),
            status,
            witness,
        });
    }

    pub fn pass(&mut self, id: &str, identity: &str) {
        self.record(id, identity, CheckStatus::Pass, None);
    }

    pub fn fail(&mut self, id: &str, identity: &str, witness: String) {
        self.record(id, identity, CheckStatus::Fail, Some(witness));
    }

    pub fn skip(&mut self, id: &str, identity: &str, reason: String) {
        self.record(id, identity, CheckStatus::Skipped, Some(reason));
    }

    /// Records a boolean outcome in one step.
    pub fn check(&mut self, id: &str, identity: &str, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            self.pass(id, identity);
        } else {
            self.fail(id, identity, witness());
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> usize {
        self.count(CheckStatus::Pass)
    }

    pub fn failed(&self) -> usize {
        self.count(CheckStatus::Fail)
    }

    pub fn skipped(&self) -> usize {
        self.count(CheckStatus::Skipped)
    }

    fn count(&self, s: CheckStatus) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }

    /// True when no check failed (skips are allowed; they are visible in the
    /// record list and the caller decides whether they are acceptable).
    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }
}
