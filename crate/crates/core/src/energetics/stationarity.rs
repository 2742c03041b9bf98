use rayon::prelude::*;
use serde::Serialize;

use super::profile::{node_mask, MASK_RADIUS};
use super::EnergeticsError;
use crate::algebra::{evaluate_expansion, expand, OperatorKind, Part, Representation};
use crate::wavefunctions::{Grid, StateField};

/// Outcome of the `H_ħ ψ/ψ = E` check on a grid.
#[derive(Clone, Debug, Serialize)]
pub struct StationarityReport {
    pub state: String,
    pub representation: Representation,
    pub energy: f64,
    pub max_residual: f64,
    pub points: usize,
}

/// Largest `|T_ħ + T_0 + V - E|` (or the momentum twin) over unmasked points.
///
/// The differential operator goes through the symbolic expansion; the
/// multiplicative one is evaluated directly.
pub fn stationarity_residual(
    state: &dyn StateField,
    grid: &Grid,
) -> Result<StationarityReport, EnergeticsError> {
    let system = state
        .system()
        .ok_or_else(|| EnergeticsError::UnknownSystem(state.label()))?;
    let rep = state.axis().representation();
    let (differential, multiplicative) = match rep {
        Representation::Configuration => (&system.kinetic, &system.potential),
        Representation::Momentum => (&system.potential, &system.kinetic),
    };
    debug_assert_eq!(
        differential.kind(),
        match rep {
            Representation::Configuration => OperatorKind::Kinetic,
            Representation::Momentum => OperatorKind::Potential,
        }
    );
    let exp = expand(differential, rep)?;
    let xs = grid.points();
    let r: Vec<f64> = xs.iter().map(|&x| state.r_derivative(x, 0)).collect();
    let mask = node_mask(&r, MASK_RADIUS);
    let residuals: Vec<f64> = xs
        .par_iter()
        .zip(&mask)
        .filter(|(_, m)| !**m)
        .filter_map(|(&x, _)| {
            evaluate_expansion(&exp, Part::Total, state, x)
                .ok()
                .map(|h| (h + multiplicative.value(x) - system.energy).abs())
        })
        .collect();
    Ok(StationarityReport {
        state: state.label(),
        representation: rep,
        energy: system.energy,
        max_residual: residuals.iter().cloned().fold(0.0, f64::max),
        points: residuals.len(),
    })
}
