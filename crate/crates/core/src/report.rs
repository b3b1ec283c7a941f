//! Result records produced by verification suites.

use std::time::Instant;

use serde::{Deserialize, Serialize};

/// Maximal number of rendered residual terms kept in a report.
pub const SAMPLE_LIMIT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "SKIPPED")]
    Skipped,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        })
    }
}

/// Outcome of one suite. Field order is the JSON field order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub n: u32,
    pub cutoff: u32,
    pub status: Status,
    pub residual_count: usize,
    pub residual_sample: Vec<String>,
    pub truncated: bool,
    pub wall_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Report {
    /// PASS iff `residuals` is empty.
    pub fn from_residuals(suite: &str, n: u32, cutoff: u32, residuals: Vec<String>, truncated: bool) -> Report {
        let status = if residuals.is_empty() { Status::Pass } else { Status::Fail };
        Report {
            suite: suite.to_string(),
            n,
            cutoff,
            status,
            residual_count: residuals.len(),
            residual_sample: residuals.into_iter().take(SAMPLE_LIMIT).collect(),
            truncated,
            wall_ms: 0,
            note: None,
        }
    }

    pub fn skipped(suite: &str, n: u32, cutoff: u32, note: impl Into<String>) -> Report {
        Report {
            suite: suite.to_string(),
            n,
            cutoff,
            status: Status::Skipped,
            residual_count: 0,
            residual_sample: Vec::new(),
            truncated: false,
            wall_ms: 0,
            note: Some(note.into()),
        }
    }

    /// A FAIL carrying an error message as its only residual.
    pub fn error(suite: &str, n: u32, cutoff: u32, err: impl std::fmt::Display) -> Report {
        let mut r = Report::from_residuals(suite, n, cutoff, vec![format!("error: {err}")], false);
        r.note = Some(err.to_string());
        r
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Report {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Runs `f` and stores its wall time in the report.
    pub fn timed(f: impl FnOnce() -> Report) -> Report {
        let start = Instant::now();
        let mut r = f();
        r.wall_ms = start.elapsed().as_millis() as u64;
        r
    }

    /// Merges sub-reports of one suite: FAIL dominates, then PASS, then SKIPPED.
    pub fn combine(suite: &str, n: u32, cutoff: u32, parts: Vec<Report>) -> Report {
        let mut residuals = Vec::new();
        let mut truncated = false;
        let mut any_pass = false;
        let mut notes = Vec::new();
        for p in &parts {
            truncated |= p.truncated;
            any_pass |= p.status == Status::Pass;
            if p.status == Status::Fail {
                residuals.extend(p.residual_sample.iter().cloned());
                if p.residual_sample.is_empty() {
                    residuals.push(format!("{}: failed", p.suite));
                }
            }
            if let Some(n) = &p.note {
                notes.push(n.clone());
            }
        }
        let count: usize = parts.iter().filter(|p| p.status == Status::Fail).map(|p| p.residual_count.max(1)).sum();
        let mut r = Report::from_residuals(suite, n, cutoff, residuals, truncated);
        r.residual_count = count;
        if count == 0 && !any_pass && !parts.is_empty() {
            r.status = Status::Skipped;
        }
        if !notes.is_empty() {
            r.note = Some(notes.join("; "));
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fail_has_sample() {
        let r = Report::from_residuals("x", 1, 1, vec!["a".into(), "b".into()], false);
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.residual_count, 2);
        assert!(!r.residual_sample.is_empty());
    }

    #[test]
    fn combine_fail_dominates() {
        let a = Report::from_residuals("a", 1, 1, vec![], false);
        let b = Report::from_residuals("b", 1, 1, vec!["r".into()], true);
        let c = Report::combine("all", 1, 1, vec![a, b]);
        assert_eq!(c.status, Status::Fail);
        assert!(c.truncated);
    }
}
