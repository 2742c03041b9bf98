//! Quantum Hamilton-Jacobi decomposition toolkit.
//!
//! The crate splits `Re(Tψ/ψ)` (configuration representation) or
//! `Re(Vψ/ψ)` (momentum representation) for polynomial operators into an
//! ħ-independent classical part and an ħ-dependent quantum potential, as
//! exact symbolic terms over derivatives of the amplitude `R` and the phase
//! `S` of `ψ = R e^{iS/ħ}`. On top of the symbolic engine it provides
//! analytic reference states, the dispersion/localisation decomposition of
//! the quantum potential, and causal trajectory integration in both
//! representations.

pub mod algebra;
pub mod cli;
pub mod dynamics;
pub mod energetics;
pub mod figures;
pub mod format;
pub mod oracle;
pub mod verify;
pub mod wavefunctions;

pub use algebra::{
    expand, km_lattice, ExpansionTerm, LatticePoint, OperatorKind, PolynomialOperator,
    QhjExpansion, Representation,
};

pub use dynamics::{EffectiveHamiltonian, TrajectoryRecord};
pub use energetics::EnergyProfile;
pub use wavefunctions::{Axis, Grid, StateField, Units};
