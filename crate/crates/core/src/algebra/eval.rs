use std::ops::{Add, Mul};

use num_traits::{One, Zero};
use thiserror::Error;

use super::operator::to_f64;
use super::{ExpansionTerm, QhjExpansion, Rational};
use crate::wavefunctions::StateField;

/// A point is a node when `|R| < NODE_THRESHOLD · max|R|`.
pub const NODE_THRESHOLD: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Quantum,
    Classical,
    Total,
}

impl Part {
    pub fn as_str(self) -> &'static str {
        match self {
            Part::Quantum => "quantum",
            Part::Classical => "classical",
            Part::Total => "total",
        }
    }
}

impl std::str::FromStr for Part {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quantum" => Ok(Part::Quantum),
            "classical" => Ok(Part::Classical),
            "total" => Ok(Part::Total),
            other => Err(format!("unknown part `{other}`")),
        }
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum EvalError {
    #[error("amplitude vanishes at {at} (node); R-ratios are undefined there")]
    NodePoint { at: f64 },
}

/// Arithmetic needed to evaluate terms; implemented for `f64` and exact rationals.
pub trait Scalar: Clone + Add<Output = Self> + Mul<Output = Self> {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

impl ExpansionTerm {
    /// `c · ħ^h · Π r_ratio(a) · Π s_deriv(b)`.
    pub fn evaluate_with<T: Scalar>(
        &self,
        hbar: &T,
        r_ratio: impl Fn(u32) -> T,
        s_deriv: impl Fn(u32) -> T,
    ) -> T {
        let mut v = T::from_rational(self.coefficient());
        for _ in 0..self.hbar_power() {
            v = v * hbar.clone();
        }
        for &a in self.r_factors() {
            v = v * r_ratio(a);
        }
        for &b in self.s_factors() {
            v = v * s_deriv(b);
        }
        v
    }
}

/// Sums `terms` at `at` using the state's derivatives and ħ.
pub fn evaluate_terms(
    terms: &[ExpansionTerm],
    state: &dyn StateField,
    at: f64,
) -> Result<f64, EvalError> {
    let max_order = terms
        .iter()
        .map(ExpansionTerm::max_order)
        .max()
        .unwrap_or(0) as usize;
    let needs_r = terms.iter().any(ExpansionTerm::divides_by_r);
    let r0 = state.r_derivative(at, 0);
    if needs_r && r0.abs() < NODE_THRESHOLD * state.amplitude_scale() {
        return Err(EvalError::NodePoint { at });
    }
    let mut r_ratios = vec![1.0; max_order + 1];
    let mut s_values = vec![0.0; max_order + 1];
    let r_used = |o: usize| terms.iter().any(|t| t.r_factors().contains(&(o as u32)));
    let s_used = |o: usize| terms.iter().any(|t| t.s_factors().contains(&(o as u32)));
    for order in 1..=max_order {
        if needs_r && r_used(order) {
            r_ratios[order] = state.r_derivative(at, order) / r0;
        }
        if s_used(order) {
            s_values[order] = state.s_derivative(at, order);
        }
    }
    let hbar = state.units().hbar;
    Ok(terms
        .iter()
        .map(|t| t.evaluate_with(&hbar, |a| r_ratios[a as usize], |b| s_values[b as usize]))
        .sum())
}

/// Evaluates the selected part of an expansion at one axis point.
pub fn evaluate_expansion(
    exp: &QhjExpansion,
    part: Part,
    state: &dyn StateField,
    at: f64,
) -> Result<f64, EvalError> {
    match part {
        Part::Quantum => evaluate_terms(&exp.quantum_part, state, at),
        Part::Classical => evaluate_terms(&exp.classical_part, state, at),
        Part::Total => Ok(evaluate_terms(&exp.quantum_part, state, at)?
            + evaluate_terms(&exp.classical_part, state, at)?),
    }
}

/// Nearest `f64` to an exact coefficient.
pub fn evaluate_scalar(r: &Rational) -> f64 {
    to_f64(r)
}
