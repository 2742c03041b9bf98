//! Causal trajectories generated by the effective Hamiltonians
//! `H_x = T(p) + T_ħ(x) + V(x)` and `H_p = T(p) + V_ħ(p) + V(x)`.

mod hamiltonian;
mod record;

pub use hamiltonian::{EffectiveHamiltonian, Phase};
pub use record::{
    symplectic_break, write_trajectory_csv, DivergencePoint, Sample, SymplecticReport,
    TrajectoryRecord,
};

use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{EvalError, ExpandError};

/// Default fixed step in natural units.
pub const DEFAULT_DT: f64 = 1e-3;

#[derive(Debug, Error, Clone)]
pub enum DynamicsError {
    #[error("{0}")]
    Expand(#[from] ExpandError),
    #[error("state `{0}` has no known Hamiltonian; supply T and V explicitly")]
    UnknownSystem(String),
    #[error("initial point violates the causal constraint by {violation:e}")]
    CausalViolation { violation: f64 },
    #[error("trajectory reached a node at {at} (t = {t})")]
    NodePoint {
        at: f64,
        t: f64,
        partial: Box<TrajectoryRecord>,
    },
    #[error("energy drift {drift:e} in one step at t = {t} exceeds tolerance {tolerance:e}")]
    StepTooLarge {
        t: f64,
        drift: f64,
        tolerance: f64,
        partial: Box<TrajectoryRecord>,
    },
    #[error("step must be positive and not exceed the time span")]
    InvalidStep,
}

impl DynamicsError {
    /// Record accumulated before the failure, if any.
    pub fn partial(&self) -> Option<&TrajectoryRecord> {
        match self {
            DynamicsError::NodePoint { partial, .. }
            | DynamicsError::StepTooLarge { partial, .. } => Some(partial),
            _ => None,
        }
    }
}

fn rk4_step(h: &EffectiveHamiltonian, y: Phase, dt: f64) -> Result<Phase, EvalError> {
    let k1 = h.rhs(y)?;
    let k2 = h.rhs(y.advance(k1, dt / 2.0))?;
    let k3 = h.rhs(y.advance(k2, dt / 2.0))?;
    let k4 = h.rhs(y.advance(k3, dt))?;
    Ok(Phase {
        x: y.x + dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
        p: y.p + dt / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p),
    })
}

/// Fixed-step RK4 from `start` over `[0, t_end]`, recording every step.
pub fn integrate(
    h: &EffectiveHamiltonian,
    start: Phase,
    t_end: f64,
    dt: f64,
) -> Result<TrajectoryRecord, DynamicsError> {
    if !(dt > 0.0 && dt.is_finite() && t_end >= 0.0 && t_end.is_finite()) {
        return Err(DynamicsError::InvalidStep);
    }
    let violation = h.causal_violation(start);
    if violation > 1e-10 {
        return Err(DynamicsError::CausalViolation { violation });
    }
    let steps = (t_end / dt).round() as usize;
    let mut record = TrajectoryRecord::new(h.representation(), dt);
    let node = |at: f64, t: f64, rec: &TrajectoryRecord| DynamicsError::NodePoint {
        at,
        t,
        partial: Box::new(rec.clone()),
    };
    let mut y = start;
    let energy0 = h
        .energy(y)
        .map_err(|EvalError::NodePoint { at }| node(at, 0.0, &record))?;
    let tolerance = 1e-6 * energy0.abs() + 1e-9;
    record.push(0.0, y, energy0);
    let mut energy = energy0;
    for i in 1..=steps {
        let t = i as f64 * dt;
        let next = rk4_step(h, y, dt).and_then(|n| h.energy(n).map(|e| (n, e)));
        let (next, e) = match next {
            Ok(v) => v,
            Err(EvalError::NodePoint { at }) => return Err(node(at, t, &record)),
        };
        let drift = (e - energy).abs();
        if drift > tolerance {
            return Err(DynamicsError::StepTooLarge {
                t,
                drift,
                tolerance,
                partial: Box::new(record),
            });
        }
        record.push(t, next, e);
        y = next;
        energy = e;
    }
    Ok(record)
}

/// Independent trajectories from several starting points, in parallel.
pub fn integrate_fan(
    h: &Arc<EffectiveHamiltonian>,
    starts: &[Phase],
    t_end: f64,
    dt: f64,
) -> Vec<Result<TrajectoryRecord, DynamicsError>> {
    starts
        .par_iter()
        .map(|&s| integrate(h, s, t_end, dt))
        .collect()
}
