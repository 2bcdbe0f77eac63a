//! Machine- and human-readable report rendering.
//!
//! The JSON shape is frozen: tool version, the suite that ran, a digest of
//! the judged input, the seed, summary counts, and one record per check in
//! the order the suites produced them. Serialization is canonical — field
//! order is fixed and scalars were already rendered into the witnesses — so
//! identical (input, seed, version) always yields identical bytes.

use serde::Serialize;

use ncflat_core::report::{CheckStatus, Report};

/// Tool name and version, embedded in every report.
pub fn tool_version() -> String {
    format!("ncflat {}", env!("CARGO_PKG_VERSION"))
}

#[derive(Debug, Clone, Serialize)]
pub struct SummaryDto {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckDto {
    pub id: String,
    pub identity: String,
    pub status: &'static str,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDto {
    pub tool: String,
    pub suite: String,
    pub input_digest: String,
    pub seed: u64,
    pub summary: SummaryDto,
    pub checks: Vec<CheckDto>,
}

fn status_name(status: CheckStatus) -> &'static str {
    match status {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "fail",
        CheckStatus::Skipped => "skipped",
    }
}

impl ReportDto {
    pub fn new(suite: &str, input_digest: &str, seed: u64, report: &Report) -> ReportDto {
        ReportDto {
            tool: tool_version(),
            suite: String::from(suite),
            input_digest: String::from(input_digest),
            seed,
            summary: SummaryDto {
                passed: report.passed(),
                failed: report.failed(),
                skipped: report.skipped(),
            },
            checks: report
                .checks
                .iter()
                .map(|c| CheckDto {
                    id: c.id.clone(),
                    identity: c.identity.clone(),
                    status: status_name(c.status),
                    witness: c.witness.clone(),
                })
                .collect(),
        }
    }

    pub fn json_bytes(&self) -> Vec<u8> {
        let mut bytes =
            serde_json::to_vec_pretty(self).expect("report DTOs always serialize");
        bytes.push(b'\n');
        bytes
    }

    /// Terminal rendering: a header, every failure and skip in full, and a
    /// one-line tally. Passing checks stay quiet so failures stand out.
    pub fn human(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} — suite {} on {} (seed {})\n",
            self.tool, self.suite, self.input_digest, self.seed
        ));
        for check in &self.checks {
            match check.status {
                "fail" => out.push_str(&format!(
                    "  FAIL {} [{}]: {}\n",
                    check.id,
                    check.identity,
                    check.witness.as_deref().unwrap_or("no witness recorded")
                )),
                "skipped" => out.push_str(&format!(
                    "  skip {} [{}]: {}\n",
                    check.id,
                    check.identity,
                    check.witness.as_deref().unwrap_or("no reason recorded")
                )),
                _ => {}
            }
        }
        out.push_str(&format!(
            "{} passed, {} failed, {} skipped\n",
            self.summary.passed, self.summary.failed, self.summary.skipped
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering_is_stable_and_complete() {
        let mut report = Report::new();
        report.pass("a.one", "first identity");
        report.fail("a.two", "second identity", String::from("lhs ≠ rhs"));
        report.skip("a.three", "third identity", String::from("nothing to test"));
        let dto = ReportDto::new("lemma21", "sha256:abc", 7, &report);
        assert_eq!(dto.summary.passed, 1);
        assert_eq!(dto.checks[1].status, "fail");
        let bytes = dto.json_bytes();
        assert_eq!(bytes, dto.json_bytes());
        let text = dto.human();
        assert!(text.contains("FAIL a.two"));
        assert!(text.contains("skip a.three"));
        assert!(text.ends_with("1 passed, 1 failed, 1 skipped\n"));
        assert!(!text.contains("a.one"), "passes stay quiet");
    }
}
