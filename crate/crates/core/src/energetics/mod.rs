//! Dispersion/localisation decomposition of the quantum potential.
//!
//! For a quadratic monomial `a₂ ô²` the quantum potential is
//! `Q = -ħ² a₂ R''/R`, which splits into a dispersion part
//! `-(ħ² a₂/4) ∂² ln ρ` and a localisation part `-(ħ² a₂/4) ρ''/ρ`.
//! In the configuration representation `a₂ = 1/2m` (momentum dispersion and
//! spatial localisation); in the momentum representation of the oscillator
//! `a₂ = mω²/2` (spatial dispersion and momentum localisation).

mod continuity;
mod profile;
mod stationarity;
mod wigner;

pub use continuity::{continuity_residual, direct_ratio};
pub use profile::{
    decompose_at, decompose_config, decompose_momentum_qho, density_maxima, node_mask,
    write_profile_csv, EnergyProfile, PointDecomposition, MASK_RADIUS,
};
pub use stationarity::{stationarity_residual, StationarityReport};
pub use wigner::{default_wigner_settings, wigner_moment_check, WignerReport, WignerSettings};

use thiserror::Error;

use crate::wavefunctions::Axis;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnergeticsError {
    #[error("state lives on the {found:?} axis, expected {expected:?}")]
    WrongAxis { expected: Axis, found: Axis },
    #[error("state `{0}` has no known Hamiltonian")]
    UnknownSystem(String),
    #[error("quadrature not converged: residual {coarse:e} became {fine:e} on doubling")]
    QuadratureNotConverged { coarse: f64, fine: f64 },
    #[error("{0}")]
    Expand(#[from] crate::algebra::ExpandError),
}
