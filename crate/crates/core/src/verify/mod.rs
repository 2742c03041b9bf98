//! Invariant suites behind `qpot verify`.
//!
//! Each suite returns named checks with the measured value and the
//! tolerance it was held to; a report passes only if every check does.

mod algebra;
mod figures;
mod numerics;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::wavefunctions::Units;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    /// Passes when `value ≤ tolerance`.
    pub(crate) fn at_most(
        suite: &'static str,
        name: impl Into<String>,
        value: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            suite,
            name: name.into(),
            passed: value <= tolerance,
            value,
            tolerance,
            detail: String::new(),
        }
    }

    /// Passes when `value ≥ bound`.
    pub(crate) fn at_least(
        suite: &'static str,
        name: impl Into<String>,
        value: f64,
        bound: f64,
    ) -> Self {
        Self {
            suite,
            name: name.into(),
            passed: value >= bound,
            value,
            tolerance: bound,
            detail: String::new(),
        }
    }

    pub(crate) fn holds(suite: &'static str, name: impl Into<String>, ok: bool) -> Self {
        Self {
            suite,
            name: name.into(),
            passed: ok,
            value: f64::from(u8::from(ok)),
            tolerance: 1.0,
            detail: String::new(),
        }
    }

    pub(crate) fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub first_failure: Option<String>,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn new(checks: Vec<Check>) -> Self {
        let first_failure = checks.iter().find(|c| !c.passed).map(|c| c.name.clone());
        Self {
            passed: first_failure.is_none(),
            first_failure,
            checks,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Vq4,
    Quadratic,
    Linear,
    Oracle,
    Splitting,
    Stationarity,
    Trajectories,
    Wigner,
    Figures,
    Convergence,
    All,
}

impl Suite {
    pub const EACH: [Suite; 10] = [
        Suite::Vq4,
        Suite::Quadratic,
        Suite::Linear,
        Suite::Oracle,
        Suite::Splitting,
        Suite::Stationarity,
        Suite::Trajectories,
        Suite::Wigner,
        Suite::Figures,
        Suite::Convergence,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Vq4 => "vq4",
            Suite::Quadratic => "quadratic",
            Suite::Linear => "linear",
            Suite::Oracle => "oracle",
            Suite::Splitting => "splitting",
            Suite::Stationarity => "stationarity",
            Suite::Trajectories => "trajectories",
            Suite::Wigner => "wigner",
            Suite::Figures => "figures",
            Suite::Convergence => "convergence",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::EACH
            .iter()
            .chain([Suite::All].iter())
            .find(|v| v.as_str() == s)
            .copied()
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// Default seed of the oracle suite.
pub const DEFAULT_SEED: u64 = 42;

/// Runs one suite (or all of them).
pub fn run(suite: Suite, seed: u64, units: Units) -> VerifyReport {
    let checks = match suite {
        Suite::All => Suite::EACH
            .iter()
            .flat_map(|&s| run_one(s, seed, units))
            .collect(),
        s => run_one(s, seed, units),
    };
    VerifyReport::new(checks)
}

fn run_one(suite: Suite, seed: u64, units: Units) -> Vec<Check> {
    match suite {
        Suite::Vq4 => algebra::vq4(),
        Suite::Quadratic => algebra::quadratic(),
        Suite::Linear => algebra::linear(units),
        Suite::Oracle => algebra::oracle(seed),
        Suite::Splitting => numerics::splitting(units),
        Suite::Stationarity => numerics::stationarity(units),
        Suite::Trajectories => numerics::trajectories(units),
        Suite::Wigner => numerics::wigner(units),
        Suite::Figures => figures::figures(units),
        Suite::Convergence => numerics::convergence(units),
        Suite::All => unreachable!("expanded by run"),
    }
}

pub use algebra::{oracle_case_errors, reference_vq4_terms, OracleComparison};
pub use figures::{parse_table, tangency_errors, Table};
