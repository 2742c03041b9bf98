use std::sync::Arc;

use num_complex::Complex64;
use qpot::algebra::PolynomialOperator;
use qpot::dynamics::{integrate, EffectiveHamiltonian};
use qpot::energetics::{continuity_residual, decompose_config, decompose_momentum_qho};
use qpot::wavefunctions::{qho_state, sampled_state, Axis, Grid, StateField, Units};

#[test]
fn momentum_profile_mirrors_configuration() {
    for n in [0, 2] {
        let g = Grid::new(-5.0, 5.0, 2001).unwrap();
        let x = decompose_config(&qho_state(n, Axis::X, Units::default()), &g).unwrap();
        let p = decompose_momentum_qho(&qho_state(n, Axis::P, Units::default()), &g).unwrap();
        assert_eq!(x.mask, p.mask);
        for i in x.unmasked() {
            assert!((x.q[i] - p.q[i]).abs() < 1e-12);
            assert!((x.disp[i] - p.disp[i]).abs() < 1e-12);
            assert!((x.loc[i] - p.loc[i]).abs() < 1e-12);
        }
        for i in 0..x.len() {
            assert!((x.loc_density[i] - p.loc_density[i]).abs() < 1e-12);
        }
    }
}

#[test]
fn profiles_ignore_wavefunction_scale() {
    let g = Grid::new(-6.0, 6.0, 1201).unwrap();
    let xs = g.points();
    let psi: Vec<Complex64> = xs
        .iter()
        .map(|&x| Complex64::new((-x * x / 2.0).exp(), 0.0))
        .collect();
    let scaled: Vec<Complex64> = psi.iter().map(|v| v * Complex64::new(-3.0, 4.0)).collect();
    let a = sampled_state(&xs, &psi, Axis::X, Units::default()).unwrap();
    let b = sampled_state(&xs, &scaled, Axis::X, Units::default()).unwrap();
    let inner = Grid::new(-3.0, 3.0, 61).unwrap();
    let pa = decompose_config(&a, &inner).unwrap();
    let pb = decompose_config(&b, &inner).unwrap();
    for i in 0..pa.len() {
        assert!((pa.q[i] - pb.q[i]).abs() < 1e-9, "{} {}", pa.q[i], pb.q[i]);
        assert!((pa.disp[i] - 0.25).abs() < 1e-6);
        assert!((pa.disp[i] - pb.disp[i]).abs() < 1e-9);
    }
}

#[test]
fn continuity_of_general_units_oscillator() {
    let u = Units {
        hbar: 0.5,
        mass: 2.0,
        omega: 1.5,
    };
    let x = qho_state(2, Axis::X, u);
    let t = PolynomialOperator::kinetic_quadratic(u.mass);
    assert!(continuity_residual(&x, &t, &x.default_grid()) <= 1e-10);
}

#[test]
fn energy_conserved_on_stationary_flows() {
    let u = Units {
        hbar: 0.7,
        mass: 1.3,
        omega: 0.9,
    };
    for axis in [Axis::X, Axis::P] {
        let state: Arc<dyn StateField> = Arc::new(qho_state(2, axis, u));
        let h = EffectiveHamiltonian::for_state(state.clone()).unwrap();
        let rec = integrate(&h, h.causal_start_from_axis(0.2), 5.0, 1e-2).unwrap();
        let e = state.system().unwrap().energy;
        assert!((rec.samples[0].h - e).abs() < 1e-12 * e);
        assert!(rec.energy_drift() < 1e-8);
        assert!(rec.max_displacement() < 1e-10);
    }
}
