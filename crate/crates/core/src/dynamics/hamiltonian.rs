use std::sync::Arc;

use super::DynamicsError;
use crate::algebra::{
    differentiate_terms, evaluate_terms, expand, EvalError, ExpansionTerm, PolynomialOperator,
    Representation,
};
use crate::wavefunctions::StateField;

/// A point `(x, p)` of phase space, or a phase-space velocity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Phase {
    pub x: f64,
    pub p: f64,
}

impl Phase {
    pub(crate) fn advance(self, d: Phase, h: f64) -> Phase {
        Phase {
            x: self.x + h * d.x,
            p: self.p + h * d.p,
        }
    }
}

/// Effective Hamiltonian of one representation, closed over a state.
///
/// The quantum part comes from the symbolic expansion of the differential
/// operator (`T` in configuration space, `V` in momentum space); its axis
/// derivative is the formal derivative of the expansion terms.
pub struct EffectiveHamiltonian {
    state: Arc<dyn StateField>,
    kinetic: PolynomialOperator,
    potential: PolynomialOperator,
    quantum: Vec<ExpansionTerm>,
    quantum_slope: Vec<ExpansionTerm>,
}

impl std::fmt::Debug for EffectiveHamiltonian {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EffectiveHamiltonian")
            .field("representation", &self.representation())
            .field("state", &self.state.label())
            .field("kinetic", &self.kinetic.to_string())
            .field("potential", &self.potential.to_string())
            .finish()
    }
}

impl EffectiveHamiltonian {
    pub fn new(
        state: Arc<dyn StateField>,
        kinetic: PolynomialOperator,
        potential: PolynomialOperator,
    ) -> Result<Self, DynamicsError> {
        let rep = state.axis().representation();
        let differential = match rep {
            Representation::Configuration => &kinetic,
            Representation::Momentum => &potential,
        };
        let quantum = expand(differential, rep)?.quantum_part;
        let quantum_slope = differentiate_terms(&quantum);
        Ok(Self {
            state,
            kinetic,
            potential,
            quantum,
            quantum_slope,
        })
    }

    /// Uses the state's own `T` and `V`.
    pub fn for_state(state: Arc<dyn StateField>) -> Result<Self, DynamicsError> {
        let system = state
            .system()
            .ok_or_else(|| DynamicsError::UnknownSystem(state.label()))?;
        Self::new(state, system.kinetic, system.potential)
    }

    pub fn representation(&self) -> Representation {
        self.state.axis().representation()
    }

    pub fn state(&self) -> &dyn StateField {
        self.state.as_ref()
    }

    pub fn kinetic(&self) -> &PolynomialOperator {
        &self.kinetic
    }

    pub fn potential(&self) -> &PolynomialOperator {
        &self.potential
    }

    /// `T_ħ(x)` or `V_ħ(p)`.
    pub fn quantum_potential(&self, at: f64) -> Result<f64, EvalError> {
        evaluate_terms(&self.quantum, self.state.as_ref(), at)
    }

    /// Axis derivative of the quantum potential.
    pub fn quantum_slope(&self, at: f64) -> Result<f64, EvalError> {
        evaluate_terms(&self.quantum_slope, self.state.as_ref(), at)
    }

    /// Completes a start point from its coordinate on the state's own axis:
    /// `p = S'(x)` in configuration space, `x = -S'(p)` in momentum space.
    pub fn causal_start_from_axis(&self, v: f64) -> Phase {
        let s1 = self.state.s_derivative(v, 1);
        match self.representation() {
            Representation::Configuration => Phase { x: v, p: s1 },
            Representation::Momentum => Phase { x: -s1, p: v },
        }
    }

    /// Distance of `y` from the causal constraint.
    pub fn causal_violation(&self, y: Phase) -> f64 {
        match self.representation() {
            Representation::Configuration => (y.p - self.state.s_derivative(y.x, 1)).abs(),
            Representation::Momentum => (y.x + self.state.s_derivative(y.p, 1)).abs(),
        }
    }

    /// `H_x` or `H_p` at `y`.
    pub fn energy(&self, y: Phase) -> Result<f64, EvalError> {
        let classical = self.kinetic.value(y.p) + self.potential.value(y.x);
        Ok(classical
            + match self.representation() {
                Representation::Configuration => self.quantum_potential(y.x)?,
                Representation::Momentum => self.quantum_potential(y.p)?,
            })
    }

    /// `(ẋ, ṗ)` from Hamilton's equations of the effective Hamiltonian.
    pub fn rhs(&self, y: Phase) -> Result<Phase, EvalError> {
        match self.representation() {
            Representation::Configuration => Ok(Phase {
                x: self.kinetic.derivative_value(y.p),
                p: -(self.quantum_slope(y.x)? + self.potential.derivative_value(y.x)),
            }),
            Representation::Momentum => {
                let x = -self.state.s_derivative(y.p, 1);
                Ok(Phase {
                    x: self.kinetic.derivative_value(y.p) + self.quantum_slope(y.p)?,
                    p: -self.potential.derivative_value(x),
                })
            }
        }
    }
}
