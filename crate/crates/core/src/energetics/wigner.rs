use rayon::prelude::*;
use serde::Serialize;

use super::profile::{node_mask, MASK_RADIUS};
use super::EnergeticsError;
use crate::wavefunctions::{Axis, Grid, StateField};

/// Quadrature controls for the Wigner moment check.
#[derive(Clone, Debug)]
pub struct WignerSettings {
    /// Trapezoid nodes over `y ∈ [-Y, Y]`.
    pub y_points: usize,
    /// `Y` in units of the position standard deviation.
    pub width_multiple: f64,
    /// Momentum window for the moment quadrature.
    pub p_grid: Grid,
    /// Residuals below this are treated as converged regardless of the
    /// relative change on doubling.
    pub absolute_floor: f64,
}

/// Conditional momentum moments at each checked `x`.
#[derive(Clone, Debug, Serialize)]
pub struct WignerReport {
    pub x: Vec<f64>,
    /// `P⁽²⁾/ρ - (P⁽¹⁾/ρ)²` from the Wigner function.
    pub variance: Vec<f64>,
    /// `-(ħ²/4) ∂² ln ρ` from the amplitude.
    pub expected: Vec<f64>,
    pub mask: Vec<bool>,
    pub max_residual: f64,
    pub coarse_residual: f64,
    /// Smallest Wigner value met; negative values flag non-classical states.
    pub min_wigner: f64,
    /// Smallest conditional variance over unmasked points.
    pub min_variance: f64,
}

fn moments(
    state: &dyn StateField,
    prefactor_axis: (f64, f64),
    y_points: usize,
    p: &[f64],
    x: f64,
) -> (f64, f64, f64, f64) {
    let (hbar, half_width) = prefactor_axis;
    let dy = 2.0 * half_width / (y_points - 1) as f64;
    let ys: Vec<f64> = (0..y_points).map(|j| -half_width + j as f64 * dy).collect();
    // ψ real: ψ*(x+y)ψ(x-y) is real and even in y, so only cos survives
    let a: Vec<f64> = ys
        .iter()
        .enumerate()
        .map(|(j, &y)| {
            let w = if j == 0 || j == y_points - 1 {
                0.5
            } else {
                1.0
            };
            w * state.r_derivative(x + y, 0) * state.r_derivative(x - y, 0)
        })
        .collect();
    let dp = p[1] - p[0];
    let (mut p0, mut p1, mut p2) = (0.0, 0.0, 0.0);
    let mut min_f = f64::INFINITY;
    for (k, &pk) in p.iter().enumerate() {
        // e^{2ipy/ħ} by phasor recurrence from y = -Y
        let theta = 2.0 * pk * dy / hbar;
        let (s1, c1) = theta.sin_cos();
        let (s0, c0) = (-2.0 * pk * half_width / hbar).sin_cos();
        let (mut c, mut s) = (c0, s0);
        let mut sum = 0.0;
        for (j, aj) in a.iter().enumerate() {
            sum += aj * c;
            let nc = c * c1 - s * s1;
            s = s * c1 + c * s1;
            c = nc;
            if j % 64 == 63 {
                let norm = (c * c + s * s).sqrt();
                c /= norm;
                s /= norm;
            }
        }
        let f = sum * dy / (std::f64::consts::PI * hbar);
        min_f = min_f.min(f);
        let w = if k == 0 || k == p.len() - 1 {
            0.5 * dp
        } else {
            dp
        };
        p0 += w * f;
        p1 += w * pk * f;
        p2 += w * pk * pk * f;
    }
    (p0, p1, p2, min_f)
}

/// Position spread `√⟨(x-⟨x⟩)²⟩` and momentum spread `ħ√(∫R'²/∫R²)` on the
/// state's default grid.
fn spreads(state: &dyn StateField) -> (f64, f64) {
    let xs = state.default_grid().points();
    let (mut n, mut m1, mut m2, mut k) = (0.0, 0.0, 0.0, 0.0);
    for &x in &xs {
        let r = state.r_derivative(x, 0);
        let d = state.r_derivative(x, 1);
        n += r * r;
        m1 += x * r * r;
        m2 += x * x * r * r;
        k += d * d;
    }
    let mean = m1 / n;
    (
        (m2 / n - mean * mean).sqrt(),
        state.units().hbar * (k / n).sqrt(),
    )
}

/// Defaults: `≥1024` y-nodes, `Y = 8σ_x`, p-window `±10σ_p` with 801 nodes.
pub fn default_wigner_settings(state: &dyn StateField) -> WignerSettings {
    let (_, sigma_p) = spreads(state);
    let extent = 10.0 * sigma_p;
    WignerSettings {
        y_points: 1025,
        width_multiple: 8.0,
        p_grid: Grid::new(-extent, extent, 801).expect("positive spread"),
        absolute_floor: 1e-9,
    }
}

fn residuals(
    state: &dyn StateField,
    xs: &[f64],
    settings: &WignerSettings,
    y_points: usize,
    p_count: usize,
    mask: &[bool],
) -> (Vec<f64>, Vec<f64>, f64, f64) {
    let hbar = state.units().hbar;
    let (sigma_x, _) = spreads(state);
    let half = settings.width_multiple * sigma_x;
    let pg = Grid {
        count: p_count,
        ..settings.p_grid
    };
    let p = pg.points();
    let cols: Vec<(f64, f64)> = xs
        .par_iter()
        .map(|&x| {
            let (p0, p1, p2, min_f) = moments(state, (hbar, half), y_points, &p, x);
            let mean = p1 / p0;
            (p2 / p0 - mean * mean, min_f)
        })
        .collect();
    let variance: Vec<f64> = cols.iter().map(|c| c.0).collect();
    let min_f = cols.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    let expected: Vec<f64> = xs.iter().map(|&x| log_curvature_energy(state, x)).collect();
    let max_res = (0..xs.len())
        .filter(|&i| !mask[i])
        .map(|i| (variance[i] - expected[i]).abs())
        .fold(0.0, f64::max);
    (variance, expected, max_res, min_f)
}

fn log_curvature_energy(state: &dyn StateField, x: f64) -> f64 {
    let hbar = state.units().hbar;
    let r0 = state.r_derivative(x, 0);
    let r1 = state.r_derivative(x, 1) / r0;
    let r2 = state.r_derivative(x, 2) / r0;
    -(hbar * hbar / 4.0) * (2.0 * r2 - 2.0 * r1 * r1)
}

/// Compares the Wigner conditional momentum variance with
/// `-(ħ²/4) ∂² ln ρ` at each `x`, then repeats with doubled y and p
/// resolution and requires the residual to be stable.
pub fn wigner_moment_check(
    state: &dyn StateField,
    xs: &[f64],
    settings: &WignerSettings,
) -> Result<WignerReport, EnergeticsError> {
    if state.axis() != Axis::X {
        return Err(EnergeticsError::WrongAxis {
            expected: Axis::X,
            found: state.axis(),
        });
    }
    let r: Vec<f64> = xs.iter().map(|&x| state.r_derivative(x, 0)).collect();
    let scale = state.amplitude_scale();
    let mut mask = node_mask(&r, MASK_RADIUS);
    for (m, v) in mask.iter_mut().zip(&r) {
        // the amplitude itself must be resolved, or both sides are noise
        if v.abs() < 1e-4 * scale {
            *m = true;
        }
    }
    let ny = settings.y_points.max(1024);
    let np = settings.p_grid.count;
    let (_, _, coarse, _) = residuals(state, xs, settings, ny, np, &mask);
    let (variance, expected, fine, min_wigner) =
        residuals(state, xs, settings, 2 * ny - 1, 2 * np - 1, &mask);
    if (fine - coarse).abs() > 0.1 * fine.max(coarse) && fine.max(coarse) > settings.absolute_floor
    {
        return Err(EnergeticsError::QuadratureNotConverged { coarse, fine });
    }
    let min_variance = (0..xs.len())
        .filter(|&i| !mask[i])
        .map(|i| variance[i])
        .fold(f64::INFINITY, f64::min);
    Ok(WignerReport {
        x: xs.to_vec(),
        variance,
        expected,
        mask,
        max_residual: fine,
        coarse_residual: coarse,
        min_wigner,
        min_variance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavefunctions::{qho_state, Units};

    #[test]
    fn gaussian_variance_is_half() {
        let s = qho_state(0, Axis::X, Units::default());
        let xs: Vec<f64> = (0..13).map(|i| -3.0 + 0.5 * i as f64).collect();
        let rep = wigner_moment_check(&s, &xs, &default_wigner_settings(&s)).unwrap();
        for v in &rep.variance {
            assert!((v - 0.5).abs() <= 1e-6, "{v}");
        }
        assert!(rep.max_residual <= 1e-6);
        assert!(rep.min_wigner > -1e-12);
    }

    #[test]
    fn second_excited_state_is_negative_somewhere() {
        let s = qho_state(2, Axis::X, Units::default());
        let xs: Vec<f64> = (0..25).map(|i| -3.0 + 0.25 * i as f64).collect();
        let rep = wigner_moment_check(&s, &xs, &default_wigner_settings(&s)).unwrap();
        assert!(rep.max_residual <= 1e-5, "{}", rep.max_residual);
        assert!(rep.min_wigner < 0.0);
    }
}
