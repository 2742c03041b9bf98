//! Closed-form stationary states: the linear potential `V = x/2` in both
//! representations and the harmonic oscillator `V = ½mω²x²`.

use super::airy::airy_ai;
use super::hermite::{gaussian_derivative_polys, Poly};
use super::{max_abs_amplitude, Axis, Grid, Provenance, ReferenceSystem, StateField, Units};
use crate::algebra::{PolynomialOperator, Rational};

/// Slope of the linear potential `V(x) = x/2`.
pub const LINEAR_SLOPE: f64 = 0.5;

const DEFAULT_COUNT: usize = 2001;

fn linear_system(units: Units, energy: f64) -> ReferenceSystem {
    ReferenceSystem {
        kinetic: PolynomialOperator::kinetic_quadratic(units.mass),
        potential: PolynomialOperator::linear_potential(Rational::new(1.into(), 2.into())),
        energy,
    }
}

/// `R(x) = Ai(κ(x - 2E))` with `κ³ = 2mF/ħ²`, `S ≡ 0`.
#[derive(Clone, Debug)]
pub struct AiryState {
    energy: f64,
    units: Units,
    kappa: f64,
    scale: f64,
}

pub fn airy_state(energy: f64, units: Units) -> AiryState {
    let kappa = (2.0 * units.mass * LINEAR_SLOPE / (units.hbar * units.hbar)).cbrt();
    let mut s = AiryState {
        energy,
        units,
        kappa,
        scale: 1.0,
    };
    s.scale = max_abs_amplitude(&s.default_grid(), |x| s.r_derivative(x, 0));
    s
}

impl AiryState {
    /// Classical turning point `x = E/F`.
    pub fn turning_point(&self) -> f64 {
        self.energy / LINEAR_SLOPE
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }
}

impl StateField for AiryState {
    fn axis(&self) -> Axis {
        Axis::X
    }

    fn units(&self) -> Units {
        self.units
    }

    fn r_derivative(&self, at: f64, order: usize) -> f64 {
        let xi = self.kappa * (at - self.turning_point());
        let (ai, aip) = airy_ai(xi);
        // Ai^(n) = a_n(ξ) Ai + b_n(ξ) Ai', a_{n+1} = a_n' + ξ b_n, b_{n+1} = a_n + b_n'
        let mut a = Poly(vec![1.0]);
        let mut b = Poly(vec![0.0]);
        for _ in 0..order {
            let mut xb = vec![0.0];
            xb.extend_from_slice(&b.0);
            let da = a.derivative();
            let next_a = add(&da, &Poly(xb));
            let next_b = add(&a, &b.derivative());
            a = next_a;
            b = next_b;
        }
        self.kappa.powi(order as i32) * (a.eval(xi) * ai + b.eval(xi) * aip)
    }

    fn s_derivative(&self, _at: f64, _order: usize) -> f64 {
        0.0
    }

    fn provenance(&self) -> Provenance {
        Provenance::Analytic
    }

    fn amplitude_scale(&self) -> f64 {
        self.scale
    }

    fn default_grid(&self) -> Grid {
        let shift = self.turning_point();
        Grid {
            min: -12.0 + shift,
            max: 4.0 + shift,
            count: DEFAULT_COUNT,
        }
    }

    fn system(&self) -> Option<ReferenceSystem> {
        Some(linear_system(self.units, self.energy))
    }

    fn label(&self) -> String {
        "airy".into()
    }
}

fn add(a: &Poly, b: &Poly) -> Poly {
    let n = a.0.len().max(b.0.len());
    Poly(
        (0..n)
            .map(|i| a.0.get(i).copied().unwrap_or(0.0) + b.0.get(i).copied().unwrap_or(0.0))
            .collect(),
    )
}

/// Momentum-space eigenstate of the linear potential: `R ≡ 1`,
/// `S(p) = (p³/(6m) - E p)/F` so that `x = -S'(p) = (E - p²/2m)/F`.
#[derive(Clone, Debug)]
pub struct LinearMomentumState {
    energy: f64,
    units: Units,
}

pub fn linear_momentum_state(energy: f64, units: Units) -> LinearMomentumState {
    LinearMomentumState { energy, units }
}

impl LinearMomentumState {
    pub fn energy(&self) -> f64 {
        self.energy
    }
}

impl StateField for LinearMomentumState {
    fn axis(&self) -> Axis {
        Axis::P
    }

    fn units(&self) -> Units {
        self.units
    }

    fn r_derivative(&self, _at: f64, order: usize) -> f64 {
        if order == 0 {
            1.0
        } else {
            0.0
        }
    }

    fn s_derivative(&self, p: f64, order: usize) -> f64 {
        let m = self.units.mass;
        let e = self.energy;
        let v = match order {
            0 => p * p * p / (6.0 * m) - e * p,
            1 => p * p / (2.0 * m) - e,
            2 => p / m,
            3 => 1.0 / m,
            _ => 0.0,
        };
        v / LINEAR_SLOPE
    }

    fn provenance(&self) -> Provenance {
        Provenance::Analytic
    }

    fn amplitude_scale(&self) -> f64 {
        1.0
    }

    fn default_grid(&self) -> Grid {
        Grid {
            min: -4.0,
            max: 4.0,
            count: DEFAULT_COUNT,
        }
    }

    fn system(&self) -> Option<ReferenceSystem> {
        Some(linear_system(self.units, self.energy))
    }

    fn label(&self) -> String {
        "linear-momentum".into()
    }
}

/// Harmonic-oscillator eigenstate `R = H_n(ξ) e^{-ξ²/2}` (un-normalised),
/// `ξ = x √(mω/ħ)` or `ξ = p / √(mωħ)`, `S ≡ 0`.
#[derive(Clone, Debug)]
pub struct QhoState {
    n: usize,
    axis: Axis,
    units: Units,
    alpha: f64,
    polys: Vec<Poly>,
    scale: f64,
}

const CACHED_ORDERS: usize = 12;

pub fn qho_state(n: usize, axis: Axis, units: Units) -> QhoState {
    let alpha = match axis {
        Axis::X => (units.mass * units.omega / units.hbar).sqrt(),
        Axis::P => 1.0 / (units.mass * units.omega * units.hbar).sqrt(),
    };
    let mut s = QhoState {
        n,
        axis,
        units,
        alpha,
        polys: gaussian_derivative_polys(n, CACHED_ORDERS),
        scale: 1.0,
    };
    s.scale = max_abs_amplitude(&s.default_grid(), |x| s.r_derivative(x, 0));
    s
}

impl QhoState {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `E_n = ħω(n + ½)`.
    pub fn energy(&self) -> f64 {
        self.units.hbar * self.units.omega * (self.n as f64 + 0.5)
    }

    /// Axis scale `α` with `ξ = α · coordinate`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl StateField for QhoState {
    fn axis(&self) -> Axis {
        self.axis
    }

    fn units(&self) -> Units {
        self.units
    }

    fn r_derivative(&self, at: f64, order: usize) -> f64 {
        let xi = self.alpha * at;
        let gauss = (-0.5 * xi * xi).exp();
        let p = if order < self.polys.len() {
            self.polys[order].eval(xi)
        } else {
            gaussian_derivative_polys(self.n, order)[order].eval(xi)
        };
        self.alpha.powi(order as i32) * p * gauss
    }

    fn s_derivative(&self, _at: f64, _order: usize) -> f64 {
        0.0
    }

    fn provenance(&self) -> Provenance {
        Provenance::Analytic
    }

    fn amplitude_scale(&self) -> f64 {
        self.scale
    }

    fn default_grid(&self) -> Grid {
        Grid {
            min: -5.0 / self.alpha,
            max: 5.0 / self.alpha,
            count: DEFAULT_COUNT,
        }
    }

    fn system(&self) -> Option<ReferenceSystem> {
        Some(ReferenceSystem {
            kinetic: PolynomialOperator::kinetic_quadratic(self.units.mass),
            potential: PolynomialOperator::harmonic(self.units.mass, self.units.omega),
            energy: self.energy(),
        })
    }

    fn label(&self) -> String {
        format!("qho:{}", self.n)
    }
}
