//! Structured verdicts for inequality checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Relative slack granted to every comparison.
pub const REL_TOL: f64 = 1e-9;
/// Absolute slack granted to every comparison.
pub const ABS_TOL: f64 = 1e-12;

/// Which side of the bound the measured quantity must lie on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    AtMost,
    AtLeast,
}

/// Outcome label of a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    /// A proved inequality failed: an implementation bug or bad input.
    Fail,
    /// Preconditions not met; nothing was measured.
    Skipped,
    /// Informational comparison (conjectures) that held.
    Consistent,
    /// Informational comparison that did not hold.
    CounterexampleCandidate,
}

/// Measured quantity against a bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    /// `bound - measured` for upper bounds, `measured - bound` for lower bounds.
    pub slack: f64,
    pub pass: bool,
    pub direction: Direction,
    pub verdict: Verdict,
    pub context: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn holds(direction: Direction, measured: f64, bound: f64) -> bool {
    let margin = REL_TOL * bound.abs() + ABS_TOL;
    match direction {
        Direction::AtMost => measured <= bound + margin,
        Direction::AtLeast => measured >= bound - margin,
    }
}

impl BoundReport {
    fn build(name: &str, direction: Direction, measured: f64, bound: f64) -> Self {
        let pass = measured.is_finite() && !bound.is_nan() && holds(direction, measured, bound);
        let slack = match direction {
            Direction::AtMost => bound - measured,
            Direction::AtLeast => measured - bound,
        };
        BoundReport {
            name: name.to_string(),
            measured,
            bound,
            slack,
            pass,
            direction,
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            context: BTreeMap::new(),
            note: None,
        }
    }

    /// `measured <= bound`.
    pub fn at_most(name: &str, measured: f64, bound: f64) -> Self {
        Self::build(name, Direction::AtMost, measured, bound)
    }

    /// `measured >= bound`.
    pub fn at_least(name: &str, measured: f64, bound: f64) -> Self {
        Self::build(name, Direction::AtLeast, measured, bound)
    }

    /// An upper-bound comparison that is reported but never counted as a failure.
    pub fn informational(name: &str, measured: f64, bound: f64) -> Self {
        let mut r = Self::build(name, Direction::AtMost, measured, bound);
        r.verdict = if r.pass {
            Verdict::Consistent
        } else {
            Verdict::CounterexampleCandidate
        };
        r
    }

    pub fn skipped(name: &str, reason: impl Into<String>) -> Self {
        BoundReport {
            name: name.to_string(),
            measured: f64::NAN,
            bound: f64::NAN,
            slack: f64::NAN,
            pass: false,
            direction: Direction::AtMost,
            verdict: Verdict::Skipped,
            context: BTreeMap::new(),
            note: Some(reason.into()),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.context.insert(key.to_string(), value);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Counts against the exit status: a failed proved inequality.
    pub fn is_failure(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    pub fn is_skipped(&self) -> bool {
        self.verdict == Verdict::Skipped
    }

    pub fn label(&self) -> &'static str {
        match self.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
            Verdict::Consistent => "consistent",
            Verdict::CounterexampleCandidate => "counterexample-candidate",
        }
    }
}
