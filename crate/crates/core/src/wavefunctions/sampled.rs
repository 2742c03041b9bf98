//! States known only through samples `ψ(ξ_i)` on a uniform grid.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use thiserror::Error;

use super::stencil::{central_weights, fornberg_weights};
use super::{Axis, Grid, Provenance, StateField, Units};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SampledError {
    #[error("need at least 9 samples, got {0}")]
    TooFewPoints(usize),
    #[error("{points} grid points but {samples} samples")]
    LengthMismatch { points: usize, samples: usize },
    #[error("grid spacing is not uniform near index {index}")]
    NonUniformGrid { index: usize },
    #[error("phase jumps by {jump:.3} rad between samples {index} and {} away from any node", index + 1)]
    PhaseUnwrapFailure { index: usize, jump: f64 },
}

/// Orders whose grid derivatives are computed eagerly.
const CACHED_ORDERS: usize = 6;
/// Interpolation nodes for off-grid evaluation.
const INTERP_POINTS: usize = 6;
/// `|ψ|` local minima below this fraction of `max|ψ|` may be sign-changing nodes.
const NODE_FRACTION: f64 = 0.05;

/// Sampled wavefunction with `R` signed through simple nodes and `S` unwrapped.
///
/// Derivatives use fourth-order central differences at spacings `h` and `2h`
/// combined by one Richardson step; within `2·half_width` of the ends a
/// one-sided fourth-order stencil is used instead and the point is flagged.
#[derive(Clone, Debug)]
pub struct SampledState {
    grid: Grid,
    axis: Axis,
    units: Units,
    r: Vec<f64>,
    s: Vec<f64>,
    r_cache: Vec<Vec<f64>>,
    s_cache: Vec<Vec<f64>>,
    scale: f64,
    label: String,
}

pub fn sampled_state(
    points: &[f64],
    samples: &[Complex64],
    axis: Axis,
    units: Units,
) -> Result<SampledState, SampledError> {
    let n = points.len();
    if n < 9 {
        return Err(SampledError::TooFewPoints(n));
    }
    if samples.len() != n {
        return Err(SampledError::LengthMismatch {
            points: n,
            samples: samples.len(),
        });
    }
    let h = (points[n - 1] - points[0]) / (n - 1) as f64;
    if h.is_nan() || h <= 0.0 {
        return Err(SampledError::NonUniformGrid { index: 0 });
    }
    for i in 1..n {
        if ((points[i] - points[i - 1]) - h).abs() > 1e-12 * h.abs().max(points[i].abs() * 1e-3) {
            return Err(SampledError::NonUniformGrid { index: i - 1 });
        }
    }
    let (r, theta) = polar_unwrap(samples)?;
    let s: Vec<f64> = theta.iter().map(|t| units.hbar * t).collect();
    let grid = Grid {
        min: points[0],
        max: points[n - 1],
        count: n,
    };
    let r_cache = (0..=CACHED_ORDERS)
        .map(|d| grid_derivative(&r, h, d))
        .collect();
    let s_cache = (0..=CACHED_ORDERS)
        .map(|d| grid_derivative(&s, h, d))
        .collect();
    let scale = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(SampledState {
        grid,
        axis,
        units,
        r,
        s,
        r_cache,
        s_cache,
        scale,
        label: "sampled".into(),
    })
}

fn polar_unwrap(samples: &[Complex64]) -> Result<(Vec<f64>, Vec<f64>), SampledError> {
    let n = samples.len();
    let mags: Vec<f64> = samples.iter().map(|z| z.norm()).collect();
    let max_mag = mags.iter().cloned().fold(0.0, f64::max);
    let is_node_candidate = |i: usize| {
        let left = if i > 0 { mags[i - 1] } else { f64::INFINITY };
        let right = if i + 1 < n {
            mags[i + 1]
        } else {
            f64::INFINITY
        };
        mags[i] <= left && mags[i] <= right && mags[i] < NODE_FRACTION * max_mag
    };
    let mut sign = vec![1.0; n];
    let mut theta = vec![0.0; n];
    theta[0] = if mags[0] > 0.0 { samples[0].arg() } else { 0.0 };
    // last sample with a defined phase
    let mut anchor: Option<usize> = (mags[0] > 0.0).then_some(0);
    for i in 1..n {
        sign[i] = sign[i - 1];
        let Some(a) = anchor else {
            theta[i] = if mags[i] > 0.0 { samples[i].arg() } else { 0.0 };
            anchor = (mags[i] > 0.0).then_some(i);
            continue;
        };
        if mags[i] == 0.0 {
            theta[i] = theta[i - 1];
            continue;
        }
        let prev = samples[a] * sign[a];
        let rel = |s: f64| (samples[i] * s * prev.conj()).arg();
        let mut jump = rel(sign[i]);
        let near_node = (a..=i).any(is_node_candidate);
        if jump.abs() > FRAC_PI_2 && near_node {
            sign[i] = -sign[i];
            jump = rel(sign[i]);
        }
        if jump.abs() > FRAC_PI_2 {
            return Err(SampledError::PhaseUnwrapFailure { index: i - 1, jump });
        }
        theta[i] = theta[a] + jump;
        anchor = Some(i);
    }
    let r = (0..n).map(|i| sign[i] * mags[i]).collect();
    Ok((r, theta))
}

fn half_width(order: usize) -> usize {
    (order + 2).div_ceil(2)
}

fn grid_derivative(values: &[f64], h: f64, order: usize) -> Vec<f64> {
    (0..values.len())
        .map(|i| node_derivative(values, h, i, order))
        .collect()
}

fn node_derivative(values: &[f64], h: f64, i: usize, order: usize) -> f64 {
    if order == 0 {
        return values[i];
    }
    let n = values.len();
    let w = half_width(order);
    if i >= 2 * w && i + 2 * w < n {
        let c = central_weights(order, w);
        let mut fine = 0.0;
        let mut coarse = 0.0;
        for (j, cj) in c.iter().enumerate() {
            let off = j as i64 - w as i64;
            fine += cj * (values[(i as i64 + off) as usize] - values[i]);
            coarse += cj * (values[(i as i64 + 2 * off) as usize] - values[i]);
        }
        fine /= h.powi(order as i32);
        coarse /= (2.0 * h).powi(order as i32);
        (16.0 * fine - coarse) / 15.0
    } else {
        let len = (order + 4).min(n);
        let start = i.saturating_sub(len / 2).min(n - len);
        let nodes: Vec<f64> = (start..start + len)
            .map(|j| (j as f64 - i as f64) * h)
            .collect();
        let wts = fornberg_weights(0.0, &nodes, order);
        // weights sum to zero for order ≥ 1; centring removes their rounding
        (start..start + len)
            .zip(&wts[order])
            .map(|(j, c)| c * (values[j] - values[i]))
            .sum()
    }
}

impl SampledState {
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// Signed amplitude and unwrapped phase at the grid nodes.
    pub fn polar(&self) -> (&[f64], &[f64]) {
        (&self.r, &self.s)
    }

    /// True where derivatives fall back to one-sided stencils.
    pub fn is_low_accuracy(&self, at: f64, order: usize) -> bool {
        let i = self.nearest(at);
        let w = half_width(order);
        order > 0 && (i < 2 * w || i + 2 * w >= self.grid.count)
    }

    fn nearest(&self, at: f64) -> usize {
        let f = ((at - self.grid.min) / self.grid.spacing()).round();
        f.clamp(0.0, (self.grid.count - 1) as f64) as usize
    }

    fn derivative(&self, values: &[f64], cache: &[Vec<f64>], at: f64, order: usize) -> f64 {
        let h = self.grid.spacing();
        let n = self.grid.count;
        let node_value = |i: usize| {
            if order < cache.len() {
                cache[order][i]
            } else {
                node_derivative(values, h, i, order)
            }
        };
        let pos = (at - self.grid.min) / h;
        let nearest = self.nearest(at);
        if (pos - nearest as f64).abs() < 1e-9 {
            return node_value(nearest);
        }
        let len = INTERP_POINTS.min(n);
        let start = (pos.floor() as i64 - (len as i64 / 2 - 1)).clamp(0, (n - len) as i64) as usize;
        let nodes: Vec<f64> = (start..start + len).map(|j| j as f64 - pos).collect();
        let w = fornberg_weights(0.0, &nodes, 0);
        (start..start + len)
            .zip(&w[0])
            .map(|(j, c)| c * node_value(j))
            .sum()
    }
}

impl StateField for SampledState {
    fn axis(&self) -> Axis {
        self.axis
    }

    fn units(&self) -> Units {
        self.units
    }

    fn r_derivative(&self, at: f64, order: usize) -> f64 {
        self.derivative(&self.r, &self.r_cache, at, order)
    }

    fn s_derivative(&self, at: f64, order: usize) -> f64 {
        self.derivative(&self.s, &self.s_cache, at, order)
    }

    fn provenance(&self) -> Provenance {
        Provenance::Sampled
    }

    fn amplitude_scale(&self) -> f64 {
        self.scale
    }

    fn default_grid(&self) -> Grid {
        self.grid
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavefunctions::{qho_state, Grid};

    fn sample(grid: &Grid, f: impl Fn(f64) -> Complex64) -> (Vec<f64>, Vec<Complex64>) {
        let pts = grid.points();
        let vals = pts.iter().map(|&x| f(x)).collect();
        (pts, vals)
    }

    #[test]
    fn gaussian_derivatives_match_analytic() {
        let analytic = qho_state(0, Axis::X, Units::default());
        let grid = Grid::new(-5.0, 5.0, 2001).unwrap();
        let (pts, vals) = sample(&grid, |x| Complex64::new(analytic.r_derivative(x, 0), 0.0));
        let s = sampled_state(&pts, &vals, Axis::X, Units::default()).unwrap();
        for &x in pts.iter().filter(|x| x.abs() <= 4.0) {
            for order in 0..=3 {
                let err = (s.r_derivative(x, order) - analytic.r_derivative(x, order)).abs();
                assert!(err < 1e-8, "x={x} order={order} err={err}");
            }
        }
        // off-grid
        let x = 0.123_456;
        assert!((s.r_derivative(x, 1) - analytic.r_derivative(x, 1)).abs() < 1e-8);
        assert!(s.is_low_accuracy(-5.0, 1));
        assert!(!s.is_low_accuracy(0.0, 1));
    }

    #[test]
    fn constant_samples_have_zero_derivatives() {
        let grid = Grid::new(0.0, 1.0, 21).unwrap();
        let (pts, vals) = sample(&grid, |_| Complex64::new(1.0, 0.0));
        let s = sampled_state(&pts, &vals, Axis::X, Units::default()).unwrap();
        for &x in &pts {
            for order in 1..=4 {
                assert!(
                    s.r_derivative(x, order).abs() < 1e-9,
                    "x={x} order={order} {}",
                    s.r_derivative(x, order)
                );
                assert!(s.s_derivative(x, order).abs() < 1e-9);
            }
            assert_eq!(s.r_derivative(x, 0), 1.0);
        }
    }

    #[test]
    fn cubic_phase_recovers_momentum_relation() {
        let grid = Grid::new(-3.0, 3.0, 2001).unwrap();
        let (pts, vals) = sample(&grid, |p| Complex64::from_polar(1.0, p * p * p / 3.0));
        let s = sampled_state(&pts, &vals, Axis::P, Units::default()).unwrap();
        for &p in pts.iter().filter(|p| p.abs() <= 2.9) {
            assert!((s.s_derivative(p, 1) - p * p).abs() < 1e-8, "p={p}");
        }
    }

    #[test]
    fn sign_flips_through_simple_nodes() {
        let analytic = qho_state(2, Axis::X, Units::default());
        let grid = Grid::new(-5.0, 5.0, 1001).unwrap();
        let (pts, vals) = sample(&grid, |x| Complex64::new(analytic.r_derivative(x, 0), 0.0));
        let s = sampled_state(&pts, &vals, Axis::X, Units::default()).unwrap();
        let (r, phase) = s.polar();
        assert!(phase.iter().all(|t| t.abs() < 1e-12));
        for (i, &x) in pts.iter().enumerate() {
            assert!((r[i] - analytic.r_derivative(x, 0)).abs() < 1e-14);
        }
    }

    #[test]
    fn reconstruction_reproduces_samples() {
        let grid = Grid::new(-4.0, 4.0, 801).unwrap();
        let f = |x: f64| {
            let amp = (x * x - 1.0) * (-x * x / 2.0).exp();
            Complex64::from_polar(1.0, 0.7 * x + 0.1 * x * x) * amp
        };
        let (pts, vals) = sample(&grid, f);
        let units = Units {
            hbar: 0.5,
            ..Units::default()
        };
        let s = sampled_state(&pts, &vals, Axis::X, units).unwrap();
        let (r, phase) = s.polar();
        for i in 0..pts.len() {
            let z = Complex64::from_polar(r[i], phase[i] / units.hbar);
            assert!((z - vals[i]).norm() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_grids_and_phase_jumps() {
        let mut pts: Vec<f64> = (0..10).map(|i| i as f64 * 0.1).collect();
        let vals = vec![Complex64::new(1.0, 0.0); 10];
        pts[5] += 0.01;
        assert!(matches!(
            sampled_state(&pts, &vals, Axis::X, Units::default()),
            Err(SampledError::NonUniformGrid { .. })
        ));
        let pts: Vec<f64> = (0..10).map(|i| i as f64).collect();
        assert_eq!(
            sampled_state(&pts[..5], &vals[..5], Axis::X, Units::default()).unwrap_err(),
            SampledError::TooFewPoints(5)
        );
        // phase advancing by 2.5 rad per sample with constant modulus
        let fast: Vec<Complex64> = (0..10)
            .map(|i| Complex64::from_polar(1.0, 2.5 * i as f64))
            .collect();
        assert!(matches!(
            sampled_state(&pts, &fast, Axis::X, Units::default()),
            Err(SampledError::PhaseUnwrapFailure { index: 0, .. })
        ));
    }
}
