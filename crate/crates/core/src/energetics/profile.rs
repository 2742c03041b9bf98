use std::io::{self, Write};

use rayon::prelude::*;

use super::EnergeticsError;
use crate::algebra::{Representation, NODE_THRESHOLD};
use crate::format::num;
use crate::wavefunctions::{Axis, Grid, StateField};

/// Grid cells masked on each side of a detected node.
pub const MASK_RADIUS: usize = 3;

/// Quantum potential and its components on a grid.
///
/// `q`, `disp` and `loc` are `NaN` where `mask` is set; the density forms are
/// finite everywhere. `rho` is scaled to unit maximum and the density forms
/// use that scaled `rho`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct EnergyProfile {
    pub representation: Representation,
    pub state: String,
    pub energy: Option<f64>,
    pub units: crate::wavefunctions::Units,
    pub axis: Vec<f64>,
    pub rho: Vec<f64>,
    pub q: Vec<f64>,
    pub disp: Vec<f64>,
    pub loc: Vec<f64>,
    pub q_density: Vec<f64>,
    pub disp_density: Vec<f64>,
    pub loc_density: Vec<f64>,
    pub mask: Vec<bool>,
}

/// Values of the decomposition at a single point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointDecomposition {
    pub q: f64,
    pub disp: f64,
    pub loc: f64,
}

/// Marks nodes (sign changes or `|R| < 1e-10 max|R|`) and `radius` cells
/// around them.
pub fn node_mask(r: &[f64], radius: usize) -> Vec<bool> {
    let n = r.len();
    let scale = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut mask = vec![false; n];
    let mut mark = |c: usize| {
        let lo = c.saturating_sub(radius);
        let hi = (c + radius).min(n - 1);
        mask[lo..=hi].iter_mut().for_each(|m| *m = true);
    };
    for i in 0..n {
        if r[i].abs() < NODE_THRESHOLD * scale {
            mark(i);
        }
        if i + 1 < n && r[i] * r[i + 1] < 0.0 {
            mark(i);
            mark(i + 1);
        }
    }
    mask
}

fn prefactor_config(state: &dyn StateField) -> f64 {
    let u = state.units();
    u.hbar * u.hbar / (2.0 * u.mass)
}

fn prefactor_momentum(state: &dyn StateField) -> f64 {
    let u = state.units();
    u.hbar * u.hbar * u.mass * u.omega * u.omega / 2.0
}

/// Decomposition at one point for quadratic coefficient `ħ²a₂ = prefactor`.
pub fn decompose_at(state: &dyn StateField, prefactor: f64, at: f64) -> PointDecomposition {
    let r0 = state.r_derivative(at, 0);
    let r1 = state.r_derivative(at, 1) / r0;
    let r2 = state.r_derivative(at, 2) / r0;
    let quarter = prefactor / 4.0;
    PointDecomposition {
        q: -prefactor * r2,
        disp: -quarter * (2.0 * r2 - 2.0 * r1 * r1),
        loc: -quarter * (2.0 * r2 + 2.0 * r1 * r1),
    }
}

fn decompose(
    state: &dyn StateField,
    grid: &Grid,
    prefactor: f64,
    representation: Representation,
) -> EnergyProfile {
    let axis = grid.points();
    let derivs: Vec<[f64; 3]> = axis
        .par_iter()
        .map(|&x| {
            [
                state.r_derivative(x, 0),
                state.r_derivative(x, 1),
                state.r_derivative(x, 2),
            ]
        })
        .collect();
    let r: Vec<f64> = derivs.iter().map(|d| d[0]).collect();
    let mask = node_mask(&r, MASK_RADIUS);
    let scale = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let quarter = prefactor / 4.0;
    let n = axis.len();
    let mut p = EnergyProfile {
        representation,
        state: state.label(),
        energy: state.system().map(|s| s.energy),
        units: state.units(),
        axis,
        rho: Vec::with_capacity(n),
        q: Vec::with_capacity(n),
        disp: Vec::with_capacity(n),
        loc: Vec::with_capacity(n),
        q_density: Vec::with_capacity(n),
        disp_density: Vec::with_capacity(n),
        loc_density: Vec::with_capacity(n),
        mask,
    };
    for (i, d) in derivs.iter().enumerate() {
        let [a0, a1, a2] = d.map(|v| v / scale);
        p.rho.push(a0 * a0);
        // ρ'' = 2RR'' + 2R'², ρ ∂² ln ρ = 2RR'' - 2R'²: finite through nodes
        p.q_density.push(-prefactor * a0 * a2);
        p.disp_density
            .push(-quarter * (2.0 * a0 * a2 - 2.0 * a1 * a1));
        p.loc_density
            .push(-quarter * (2.0 * a0 * a2 + 2.0 * a1 * a1));
        if p.mask[i] {
            p.q.push(f64::NAN);
            p.disp.push(f64::NAN);
            p.loc.push(f64::NAN);
        } else {
            let r1 = d[1] / d[0];
            let r2 = d[2] / d[0];
            p.q.push(-prefactor * r2);
            p.disp.push(-quarter * (2.0 * r2 - 2.0 * r1 * r1));
            p.loc.push(-quarter * (2.0 * r2 + 2.0 * r1 * r1));
        }
    }
    p
}

/// `T_ħ = M_d + Σ_l` on the configuration axis.
pub fn decompose_config(
    state: &dyn StateField,
    grid: &Grid,
) -> Result<EnergyProfile, EnergeticsError> {
    if state.axis() != Axis::X {
        return Err(EnergeticsError::WrongAxis {
            expected: Axis::X,
            found: state.axis(),
        });
    }
    Ok(decompose(
        state,
        grid,
        prefactor_config(state),
        Representation::Configuration,
    ))
}

/// `V_ħ = Σ_d + M_l` on the momentum axis for `V = ½mω²x²`.
pub fn decompose_momentum_qho(
    state: &dyn StateField,
    grid: &Grid,
) -> Result<EnergyProfile, EnergeticsError> {
    if state.axis() != Axis::P {
        return Err(EnergeticsError::WrongAxis {
            expected: Axis::P,
            found: state.axis(),
        });
    }
    Ok(decompose(
        state,
        grid,
        prefactor_momentum(state),
        Representation::Momentum,
    ))
}

impl EnergyProfile {
    /// `ħ² a₂` of the profile's representation.
    pub fn prefactor(&self) -> f64 {
        let u = self.units;
        match self.representation {
            Representation::Configuration => u.hbar * u.hbar / (2.0 * u.mass),
            Representation::Momentum => u.hbar * u.hbar * u.mass * u.omega * u.omega / 2.0,
        }
    }

    pub fn len(&self) -> usize {
        self.axis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axis.is_empty()
    }

    pub fn unmasked(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| !self.mask[i])
    }
}

/// Local maxima of `ρ` on the grid, refined to `R' = 0` by safeguarded Newton.
pub fn density_maxima(state: &dyn StateField, grid: &Grid) -> Vec<f64> {
    let xs = grid.points();
    let rho: Vec<f64> = xs.iter().map(|&x| state.density(x)).collect();
    let peak = rho.iter().cloned().fold(0.0, f64::max);
    let mut out = Vec::new();
    for i in 1..xs.len() - 1 {
        if !(rho[i] > rho[i - 1] && rho[i] >= rho[i + 1] && rho[i] > NODE_THRESHOLD * peak) {
            continue;
        }
        // R' changes sign on [x_{i-1}, x_{i+1}]
        let (mut lo, mut hi) = (xs[i - 1], xs[i + 1]);
        let f = |x: f64| state.r_derivative(x, 1) * state.r_derivative(x, 0).signum();
        let mut x = xs[i];
        for _ in 0..100 {
            let fx = f(x);
            if fx == 0.0 {
                break;
            }
            if fx > 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let slope = state.r_derivative(x, 2) * state.r_derivative(x, 0).signum();
            let newton = x - fx / slope;
            let next = if slope != 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if (next - x).abs() <= 1e-15 * x.abs().max(1.0) {
                x = next;
                break;
            }
            x = next;
        }
        out.push(x);
    }
    out
}

/// Profile CSV: metadata header then
/// `axis,rho,Q,disp,loc,Q_density,disp_density,loc_density,mask`.
pub fn write_profile_csv(out: &mut impl Write, p: &EnergyProfile) -> io::Result<()> {
    writeln!(out, "# representation: {}", p.representation)?;
    writeln!(out, "# state: {}", p.state)?;
    writeln!(out, "# units: {}", p.units)?;
    match p.energy {
        Some(e) => writeln!(out, "# E: {}", num(e))?,
        None => writeln!(out, "# E: unknown")?,
    }
    writeln!(
        out,
        "axis,rho,Q,disp,loc,Q_density,disp_density,loc_density,mask"
    )?;
    for i in 0..p.len() {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            num(p.axis[i]),
            num(p.rho[i]),
            num(p.q[i]),
            num(p.disp[i]),
            num(p.loc[i]),
            num(p.q_density[i]),
            num(p.disp_density[i]),
            num(p.loc_density[i]),
            u8::from(p.mask[i])
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavefunctions::{airy_state, linear_momentum_state, qho_state, Units};

    #[test]
    fn ground_state_configuration_values() {
        let s = qho_state(0, Axis::X, Units::default());
        let g = Grid::new(-5.0, 5.0, 2001).unwrap();
        let p = decompose_config(&s, &g).unwrap();
        assert!(p.mask.iter().all(|m| !m));
        for i in 0..p.len() {
            let x = p.axis[i];
            assert!((p.disp[i] - 0.25).abs() < 1e-12, "x={x}");
            assert!((p.loc[i] - (0.25 - x * x / 2.0)).abs() < 1e-10);
            assert!((p.q[i] - (0.5 - x * x / 2.0)).abs() < 1e-10);
        }
        let at0 = decompose_at(&s, 0.5, 0.0);
        assert_eq!(at0.disp, 0.25);
        assert_eq!(at0.loc, 0.25);
    }

    #[test]
    fn ground_state_momentum_values() {
        let s = qho_state(0, Axis::P, Units::default());
        let g = Grid::new(-5.0, 5.0, 801).unwrap();
        let p = decompose_momentum_qho(&s, &g).unwrap();
        for i in 0..p.len() {
            let v = p.axis[i];
            assert!((p.disp[i] - 0.25).abs() < 1e-12);
            assert!((p.loc[i] - (0.25 - v * v / 2.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn linear_momentum_components_vanish() {
        let s = linear_momentum_state(0.0, Units::default());
        let p = decompose_momentum_qho(&s, &s.default_grid()).unwrap();
        assert!(p.q.iter().chain(&p.disp).chain(&p.loc).all(|v| *v == 0.0));
    }

    #[test]
    fn wrong_axis_is_rejected() {
        let s = qho_state(0, Axis::P, Units::default());
        assert!(matches!(
            decompose_config(&s, &s.default_grid()),
            Err(EnergeticsError::WrongAxis { .. })
        ));
    }

    #[test]
    fn nodes_are_masked_and_densities_finite() {
        let s = qho_state(2, Axis::X, Units::default());
        let g = s.default_grid();
        let p = decompose_config(&s, &g).unwrap();
        let masked = p.mask.iter().filter(|m| **m).count();
        assert!((2 * (2 * MASK_RADIUS + 1)..=2 * (2 * MASK_RADIUS + 2)).contains(&masked));
        for i in 0..p.len() {
            assert!(p.q_density[i].is_finite() && p.disp_density[i].is_finite());
            assert!(p.loc_density[i].is_finite());
            assert_eq!(p.q[i].is_nan(), p.mask[i]);
        }
    }

    #[test]
    fn refined_maxima_of_airy_density() {
        let s = airy_state(0.0, Units::default());
        let maxima = density_maxima(&s, &s.default_grid());
        // first zero of Ai' is -1.018792971647471
        assert!((maxima.last().unwrap() - -1.018_792_971_647_471).abs() < 1e-12);
        for m in maxima {
            let d = decompose_at(&s, 0.5, m);
            assert!((d.disp - d.loc).abs() < 1e-12);
        }
    }

    #[test]
    fn mask_covers_sign_changes() {
        let r = [1.0, 0.5, 0.2, -0.1, -0.4, -0.8, -1.0, -1.0, -1.0, -1.0];
        let m = node_mask(&r, 1);
        assert_eq!(
            m,
            vec![false, true, true, true, true, false, false, false, false, false]
        );
    }
}
