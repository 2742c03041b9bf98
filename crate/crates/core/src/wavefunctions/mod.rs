//! Wavefunctions `ψ = R e^{iS/ħ}` exposing `R`, `S` and their derivatives.

pub mod airy;
mod analytic;
mod dump;
pub mod hermite;
mod sampled;
pub mod stencil;

pub use analytic::{
    airy_state, linear_momentum_state, qho_state, AiryState, LinearMomentumState, QhoState,
    LINEAR_SLOPE,
};
pub use dump::write_state_csv;
pub use sampled::{sampled_state, SampledError, SampledState};

use std::fmt;

use thiserror::Error;

use crate::algebra::{PolynomialOperator, Representation};

/// Independent variable of a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    P,
}

impl Axis {
    pub fn representation(self) -> Representation {
        match self {
            Axis::X => Representation::Configuration,
            Axis::P => Representation::Momentum,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::P => 'p',
        }
    }
}

impl From<Representation> for Axis {
    fn from(r: Representation) -> Self {
        match r {
            Representation::Configuration => Axis::X,
            Representation::Momentum => Axis::P,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Analytic,
    Sampled,
}

/// Physical constants of the evaluation context; natural units by default.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Units {
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
}

impl Default for Units {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            omega: 1.0,
        }
    }
}

impl fmt::Display for Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "hbar={},m={},omega={}", self.hbar, self.mass, self.omega)
    }
}

impl std::str::FromStr for Units {
    type Err = String;

    /// Parses `hbar=…,m=…,omega=…` (any subset, any order).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut u = Units::default();
        for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got `{item}`"))?;
            let v: f64 = value
                .trim()
                .parse()
                .map_err(|_| format!("invalid number `{}` for `{}`", value.trim(), key.trim()))?;
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("`{}` must be positive and finite", key.trim()));
            }
            match key.trim() {
                "hbar" => u.hbar = v,
                "m" | "mass" => u.mass = v,
                "omega" | "w" => u.omega = v,
                other => return Err(format!("unknown unit `{other}`")),
            }
        }
        Ok(u)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid needs at least 9 points, got {0}")]
    TooFewPoints(usize),
    #[error("grid minimum {min} must be below maximum {max}")]
    EmptyRange { min: f64, max: f64 },
}

/// Uniform grid of `count` points spanning `[min, max]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self, GridError> {
        if count < 9 {
            return Err(GridError::TooFewPoints(count));
        }
        if min.is_nan() || max.is_nan() || min >= max {
            return Err(GridError::EmptyRange { min, max });
        }
        Ok(Self { min, max, count })
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.max
        } else {
            self.min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.point(i)).collect()
    }
}

/// Operators and energy of the stationary problem a reference state solves.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceSystem {
    pub kinetic: PolynomialOperator,
    pub potential: PolynomialOperator,
    pub energy: f64,
}

/// A wavefunction `ψ = R e^{iS/ħ}` on one axis.
///
/// `R` may be signed so that real states keep `S` constant through nodes.
pub trait StateField: Send + Sync {
    fn axis(&self) -> Axis;

    fn units(&self) -> Units;

    /// `d^order R / dξ^order`.
    fn r_derivative(&self, at: f64, order: usize) -> f64;

    /// `d^order S / dξ^order` (order 0 is `S` itself).
    fn s_derivative(&self, at: f64, order: usize) -> f64;

    fn density(&self, at: f64) -> f64 {
        let r = self.r_derivative(at, 0);
        r * r
    }

    fn provenance(&self) -> Provenance;

    /// `max |R|` over the default grid; the reference for node detection.
    fn amplitude_scale(&self) -> f64;

    fn default_grid(&self) -> Grid;

    /// Stationary problem the state solves, when known.
    fn system(&self) -> Option<ReferenceSystem> {
        None
    }

    fn label(&self) -> String;
}

pub(crate) fn max_abs_amplitude(grid: &Grid, r: impl Fn(f64) -> f64) -> f64 {
    grid.points()
        .into_iter()
        .map(|x| r(x).abs())
        .fold(0.0, f64::max)
}
