use num_complex::Complex64;

use super::profile::{node_mask, MASK_RADIUS};
use crate::algebra::{evaluate_scalar, PolynomialOperator};
use crate::wavefunctions::{Grid, StateField};

/// `Oψ/ψ` at one point by direct complex differentiation of `ψ = R e^{iS/ħ}`.
///
/// Uses `ψ^{(n)}/ψ = Σ_j C(n,j) (R^{(n-j)}/R) Y_j(u₁..u_j)` with `Y_j` the
/// complete Bell polynomials in `u_k = i S^{(k)}/ħ`. A multiplicative
/// operator returns its real value.
pub fn direct_ratio(state: &dyn StateField, op: &PolynomialOperator, at: f64) -> Complex64 {
    let rep = state.axis().representation();
    if op.kind().differential_representation() != rep {
        return Complex64::new(op.value(at), 0.0);
    }
    let hbar = state.units().hbar;
    let degree = op.degree();
    let r0 = state.r_derivative(at, 0);
    let i = Complex64::i();
    let u: Vec<Complex64> = (0..=degree)
        .map(|k| {
            if k == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                i * state.s_derivative(at, k) / hbar
            }
        })
        .collect();
    let mut bell = vec![Complex64::new(1.0, 0.0)];
    for n in 0..degree {
        let mut next = Complex64::new(0.0, 0.0);
        for k in 0..=n {
            next += binomial(n, k) * bell[n - k] * u[k + 1];
        }
        bell.push(next);
    }
    let ratios: Vec<f64> = (0..=degree)
        .map(|k| state.r_derivative(at, k) / r0)
        .collect();
    // p̂ = -iħ∂ₓ, x̂ = +iħ∂ₚ
    let step = Complex64::new(0.0, -rep.causal_sign() * hbar);
    let mut total = Complex64::new(0.0, 0.0);
    let mut power = Complex64::new(1.0, 0.0);
    for m in 0..=degree {
        let a = evaluate_scalar(&op.coefficient(m));
        if a != 0.0 {
            let d: Complex64 = (0..=m)
                .map(|j| binomial(m, j) * ratios[m - j] * bell[j])
                .sum();
            total += a * power * d;
        }
        power *= step;
    }
    total
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Largest `|Im(Oψ/ψ)|` over unmasked grid points.
pub fn continuity_residual(state: &dyn StateField, op: &PolynomialOperator, grid: &Grid) -> f64 {
    let xs = grid.points();
    let r: Vec<f64> = xs.iter().map(|&x| state.r_derivative(x, 0)).collect();
    let mask = node_mask(&r, MASK_RADIUS);
    xs.iter()
        .zip(&mask)
        .filter(|(_, m)| !**m)
        .map(|(&x, _)| direct_ratio(state, op, x).im.abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{evaluate_expansion, expand, Part};
    use crate::oracle::{PolynomialState, RationalPoly};
    use crate::wavefunctions::{airy_state, linear_momentum_state, qho_state, Axis, Units};

    #[test]
    fn stationary_states_have_real_ratio() {
        let u = Units::default();
        let airy = airy_state(0.0, u);
        let t = PolynomialOperator::kinetic_quadratic(1.0);
        assert!(continuity_residual(&airy, &t, &airy.default_grid()) <= 1e-10);
        let qx = qho_state(2, Axis::X, u);
        assert!(continuity_residual(&qx, &t, &qx.default_grid()) <= 1e-10);
        let qp = qho_state(2, Axis::P, u);
        let v = PolynomialOperator::harmonic(1.0, 1.0);
        assert!(continuity_residual(&qp, &v, &qp.default_grid()) <= 1e-10);
        let lin = linear_momentum_state(0.0, u);
        let vl = PolynomialOperator::parse("x/2").unwrap();
        assert!(continuity_residual(&lin, &vl, &lin.default_grid()) <= 1e-10);
    }

    #[test]
    fn real_part_matches_expansion() {
        let op = PolynomialOperator::parse("x^4 - 2*x^3 + x/3").unwrap();
        let exp = expand(&op, crate::algebra::Representation::Momentum).unwrap();
        let q = |n: i64, d: i64| crate::algebra::Rational::new(n.into(), d.into());
        let state = PolynomialState {
            r: RationalPoly(vec![q(2, 1), q(1, 2), q(-1, 4), q(1, 8)]),
            s: RationalPoly(vec![q(0, 1), q(1, 1), q(-1, 2), q(1, 5), q(1, 10)]),
            axis: Axis::P,
            units: Units {
                hbar: 0.5,
                ..Units::default()
            },
        };
        for at in [-0.7, 0.1, 0.9] {
            let direct = direct_ratio(&state, &op, at).re;
            let engine = evaluate_expansion(&exp, Part::Total, &state, at).unwrap();
            assert!(
                (direct - engine).abs() <= 1e-12 * direct.abs().max(1.0),
                "{direct} {engine}"
            );
        }
    }
}
