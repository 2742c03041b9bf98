//! Reference evaluation of `Re(Oψ/ψ)` by direct complex differentiation.
//!
//! For polynomial `R` and `S` the derivatives of `ψ = R e^{iS/ħ}` stay of the
//! form `P_j e^{iS/ħ}` with `P_{j+1} = P_j' + (i/ħ) S' P_j`, where `P_j` has
//! Gaussian-rational coefficients. This is independent of the term
//! enumeration in [`crate::algebra`] and exact.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{PolynomialOperator, Rational, Representation};
use crate::wavefunctions::{Axis, Grid, Provenance, StateField, Units};

#[derive(Clone, Debug, PartialEq)]
struct Gaussian {
    re: Rational,
    im: Rational,
}

impl Gaussian {
    fn zero() -> Self {
        Self {
            re: Rational::zero(),
            im: Rational::zero(),
        }
    }
}

/// Real polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalPoly(pub Vec<Rational>);

impl RationalPoly {
    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> RationalPoly {
        RationalPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> RationalPoly {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.0
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + crate::algebra::evaluate_scalar(c))
    }
}

fn gaussian_derivative(p: &[Gaussian]) -> Vec<Gaussian> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| {
            let k = Rational::from_integer((i as i64).into());
            Gaussian {
                re: &c.re * &k,
                im: &c.im * &k,
            }
        })
        .collect()
}

/// `(i/ħ) S' P`
fn phase_product(p: &[Gaussian], s_prime: &RationalPoly, hbar: &Rational) -> Vec<Gaussian> {
    if p.is_empty() || s_prime.0.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Gaussian::zero(); p.len() + s_prime.0.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in s_prime.0.iter().enumerate() {
            // i (re + i im) b / ħ = (-im b + i re b) / ħ
            out[i + j].re -= &a.im * b / hbar;
            out[i + j].im += &a.re * b / hbar;
        }
    }
    out
}

/// `e^{-iS/ħ} (∓iħ d/dξ)^m (R e^{iS/ħ}) / R` at `at`, as (real, imaginary).
pub fn monomial_ratio(
    r: &RationalPoly,
    s: &RationalPoly,
    m: usize,
    rep: Representation,
    hbar: &Rational,
    at: &Rational,
) -> (Rational, Rational) {
    let s_prime = s.derivative();
    let mut p: Vec<Gaussian> =
        r.0.iter()
            .map(|c| Gaussian {
                re: c.clone(),
                im: Rational::zero(),
            })
            .collect();
    for _ in 0..m {
        let mut next = gaussian_derivative(&p);
        let extra = phase_product(&p, &s_prime, hbar);
        if next.len() < extra.len() {
            next.resize(extra.len(), Gaussian::zero());
        }
        for (n, e) in next.iter_mut().zip(extra) {
            n.re += e.re;
            n.im += e.im;
        }
        p = next;
    }
    let value = p.iter().rev().fold(Gaussian::zero(), |acc, c| Gaussian {
        re: acc.re * at + &c.re,
        im: acc.im * at + &c.im,
    });
    // (∓iħ)^m: configuration uses -iħ, momentum +iħ
    let mut pre = Gaussian {
        re: Rational::one(),
        im: Rational::zero(),
    };
    let sign = match rep {
        Representation::Configuration => -Rational::one(),
        Representation::Momentum => Rational::one(),
    };
    for _ in 0..m {
        pre = Gaussian {
            re: -(&pre.im * &sign * hbar),
            im: &pre.re * &sign * hbar,
        };
    }
    let re = &pre.re * &value.re - &pre.im * &value.im;
    let im = &pre.re * &value.im + &pre.im * &value.re;
    let r_at = r.eval(at);
    (re / &r_at, im / r_at)
}

/// `Re(Oψ/ψ)` for a whole polynomial operator.
pub fn operator_real_part(
    op: &PolynomialOperator,
    r: &RationalPoly,
    s: &RationalPoly,
    rep: Representation,
    hbar: &Rational,
    at: &Rational,
) -> Rational {
    op.coefficients()
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(m, a)| a * monomial_ratio(r, s, m, rep, hbar, at).0)
        .fold(Rational::zero(), |acc, v| acc + v)
}

/// A randomly drawn oracle case.
#[derive(Clone, Debug)]
pub struct OracleCase {
    pub r: RationalPoly,
    pub s: RationalPoly,
    pub degree: usize,
    pub representation: Representation,
    pub points: Vec<Rational>,
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let n: i64 = rng.gen_range(-6..=6);
    let d: i64 = rng.gen_range(1..=4);
    Rational::new(n.into(), d.into())
}

/// Draws `count` cases with `deg R, deg S ≤ 4`, monomial degree `≤ max_degree`
/// and five sample points at which `R ≠ 0`.
pub fn random_cases(seed: u64, count: usize, max_degree: usize) -> Vec<OracleCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let r_deg = rng.gen_range(0..=4);
            let s_deg = rng.gen_range(1..=4);
            let mut r: Vec<Rational> = (0..=r_deg).map(|_| small_rational(&mut rng)).collect();
            if r.iter().all(Zero::is_zero) {
                r[0] = Rational::one();
            }
            let s: Vec<Rational> = (0..=s_deg).map(|_| small_rational(&mut rng)).collect();
            let r = RationalPoly(r);
            let mut points = Vec::new();
            while points.len() < 5 {
                let x = Rational::new(rng.gen_range(-12i64..=12).into(), 4.into());
                if !r.eval(&x).is_zero() && !points.contains(&x) {
                    points.push(x);
                }
            }
            OracleCase {
                r,
                s: RationalPoly(s),
                degree: i % (max_degree + 1),
                representation: if i % 2 == 0 {
                    Representation::Configuration
                } else {
                    Representation::Momentum
                },
                points,
            }
        })
        .collect()
}

/// Polynomial `R`, `S` exposed as a state, for floating-point evaluation.
#[derive(Clone, Debug)]
pub struct PolynomialState {
    pub r: RationalPoly,
    pub s: RationalPoly,
    pub axis: Axis,
    pub units: Units,
}

impl StateField for PolynomialState {
    fn axis(&self) -> Axis {
        self.axis
    }

    fn units(&self) -> Units {
        self.units
    }

    fn r_derivative(&self, at: f64, order: usize) -> f64 {
        self.r.nth_derivative(order).eval_f64(at)
    }

    fn s_derivative(&self, at: f64, order: usize) -> f64 {
        self.s.nth_derivative(order).eval_f64(at)
    }

    fn provenance(&self) -> Provenance {
        Provenance::Analytic
    }

    fn amplitude_scale(&self) -> f64 {
        // node detection is irrelevant here; points are chosen off the roots
        0.0
    }

    fn default_grid(&self) -> Grid {
        Grid {
            min: -3.0,
            max: 3.0,
            count: 601,
        }
    }

    fn label(&self) -> String {
        "polynomial".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn plane_wave_kinetic_ratio() {
        // ψ = e^{ikx}: (-iħ d)^2 ψ / ψ = ħ²k²/ħ² ... with S = k x: p = S' = k, ratio = k²
        let amp = RationalPoly(vec![r(1, 1)]);
        let phase = RationalPoly(vec![r(0, 1), r(3, 1)]);
        let (re, im) = monomial_ratio(
            &amp,
            &phase,
            2,
            Representation::Configuration,
            &r(1, 2),
            &r(5, 7),
        );
        assert_eq!(re, r(9, 1));
        assert_eq!(im, r(0, 1));
    }

    #[test]
    fn real_amplitude_curvature() {
        // R = 1 + x², S = 0: (-iħ d)^2 R / R = -ħ² R''/R = -2ħ²/(1+x²)
        let amp = RationalPoly(vec![r(1, 1), r(0, 1), r(1, 1)]);
        let phase = RationalPoly(vec![r(0, 1)]);
        let (re, _) = monomial_ratio(
            &amp,
            &phase,
            2,
            Representation::Configuration,
            &r(1, 3),
            &r(1, 1),
        );
        assert_eq!(re, r(-1, 9));
    }

    #[test]
    fn cases_are_deterministic() {
        let a = random_cases(42, 5, 6);
        let b = random_cases(42, 5, 6);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.r, y.r);
            assert_eq!(x.points, y.points);
        }
    }
}
