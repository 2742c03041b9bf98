//! Symbolic expansion of `Re(Oψ/ψ)` for polynomial operators `O`.
//!
//! An operator is a polynomial in a single differential variable: `T(p̂)`
//! with `p̂ = -iħ d/dx` in the configuration representation, or `V(x̂)` with
//! `x̂ = iħ d/dp` in the momentum representation. Writing `ψ = R e^{iS/ħ}`,
//! each monomial `a_m ô^m` contributes, for every `k ≤ m` with `k + m` even,
//!
//! ```text
//! a_m (-1)^m (-1)^((k+m)/2) ħ^(m-k) / k! · [∂^m(R S^k)]_{S:0} / R
//! ```
//!
//! where `[..]_{S:0}` keeps only the Leibniz terms in which every copy of
//! `S` is differentiated at least once. The momentum representation carries
//! one more factor `(-1)^m`. Terms with `k = m` are ħ-free and form the
//! classical part; the rest form the quantum potential.

mod eval;
mod expand;
mod latex;
mod operator;
mod serial;
mod term;

pub use eval::{
    evaluate_expansion, evaluate_scalar, evaluate_terms, EvalError, Part, Scalar, NODE_THRESHOLD,
};
pub use expand::{expand, km_lattice, ExpandError, LatticePoint};
pub use latex::to_latex;
pub use operator::{OperatorKind, ParseError, PolynomialOperator};
pub use serial::{ExpansionJson, TermJson};
pub use term::{canonicalize, differentiate_terms, ExpansionTerm};

use std::fmt;

use num_rational::BigRational;

/// Exact coefficient type of the symbolic engine.
pub type Rational = BigRational;

/// Which operator acts differentially.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    /// `x̂ = x`, `p̂ = -iħ d/dx`; the kinetic operator is expanded.
    Configuration,
    /// `p̂ = p`, `x̂ = iħ d/dp`; the potential operator is expanded.
    Momentum,
}

impl Representation {
    pub fn as_str(self) -> &'static str {
        match self {
            Representation::Configuration => "configuration",
            Representation::Momentum => "momentum",
        }
    }

    /// Sign relating the classical variable to `S'`: `p = S'` or `x = -S'`.
    pub fn causal_sign(self) -> f64 {
        match self {
            Representation::Configuration => 1.0,
            Representation::Momentum => -1.0,
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Representation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "configuration" | "config" | "x" => Ok(Representation::Configuration),
            "momentum" | "mom" | "p" => Ok(Representation::Momentum),
            other => Err(format!("unknown representation `{other}`")),
        }
    }
}

/// The ħ-split of `Re(Oψ/ψ)` for one operator and representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QhjExpansion {
    pub representation: Representation,
    pub source: PolynomialOperator,
    pub quantum_part: Vec<ExpansionTerm>,
    pub classical_part: Vec<ExpansionTerm>,
}

impl QhjExpansion {
    /// True when the operator generates no quantum potential at all.
    pub fn has_quantum_potential(&self) -> bool {
        !self.quantum_part.is_empty()
    }

    /// Highest derivative order of `R` or `S` referenced by any term.
    pub fn max_derivative_order(&self) -> u32 {
        self.quantum_part
            .iter()
            .chain(&self.classical_part)
            .map(ExpansionTerm::max_order)
            .max()
            .unwrap_or(0)
    }

    pub fn part(&self, part: Part) -> Vec<ExpansionTerm> {
        match part {
            Part::Quantum => self.quantum_part.clone(),
            Part::Classical => self.classical_part.clone(),
            Part::Total => canonicalize(
                self.quantum_part
                    .iter()
                    .chain(&self.classical_part)
                    .cloned()
                    .collect(),
            ),
        }
    }
}
