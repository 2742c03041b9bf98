use std::sync::Arc;

use num_complex::Complex64;

use super::Check;
use crate::algebra::{PolynomialOperator, Rational};
use crate::dynamics::{integrate, symplectic_break, EffectiveHamiltonian, Phase, TrajectoryRecord};
use crate::energetics::{
    decompose_at, decompose_config, decompose_momentum_qho, default_wigner_settings,
    density_maxima, stationarity_residual, wigner_moment_check,
};
use crate::oracle::{PolynomialState, RationalPoly};
use crate::wavefunctions::{
    airy_state, linear_momentum_state, qho_state, sampled_state, Axis, Grid, StateField, Units,
};

/// Eigenstates whose profiles are checked, with their 2001-point grids.
fn profile_states(units: Units) -> Vec<Box<dyn StateField>> {
    vec![
        Box::new(airy_state(0.0, units)),
        Box::new(qho_state(0, Axis::X, units)),
        Box::new(qho_state(2, Axis::X, units)),
        Box::new(qho_state(0, Axis::P, units)),
        Box::new(qho_state(2, Axis::P, units)),
    ]
}

fn grid_2001(state: &dyn StateField) -> Grid {
    let g = state.default_grid();
    Grid { count: 2001, ..g }
}

fn name(state: &dyn StateField) -> String {
    format!("{}[{}]", state.label(), state.axis().symbol())
}

pub(super) fn splitting(units: Units) -> Vec<Check> {
    let mut out = Vec::new();
    for state in profile_states(units) {
        let s = state.as_ref();
        let grid = grid_2001(s);
        let profile = match s.axis() {
            Axis::X => decompose_config(s, &grid),
            Axis::P => decompose_momentum_qho(s, &grid),
        }
        .expect("axis chosen to match");
        let pre = profile.prefactor();
        let (mut split, mut dominance, mut identity) = (0.0f64, f64::INFINITY, 0.0f64);
        for i in profile.unmasked() {
            split = split.max((profile.q[i] - profile.disp[i] - profile.loc[i]).abs());
            let gap = profile.disp[i] - profile.loc[i];
            dominance = dominance.min(gap);
            let x = profile.axis[i];
            let r1 = s.r_derivative(x, 1) / s.r_derivative(x, 0);
            // (ħ²a₂/4)(ρ'/ρ)² with ρ'/ρ = 2R'/R
            let want = pre / 4.0 * (2.0 * r1).powi(2);
            identity = identity.max((gap - want).abs() / want.abs().max(1.0));
        }
        let at_maxima = density_maxima(s, &grid)
            .iter()
            .map(|&x| {
                let d = decompose_at(s, pre, x);
                (d.disp - d.loc).abs()
            })
            .fold(0.0f64, f64::max);
        let n = name(s);
        out.push(Check::at_most(
            "splitting",
            format!("splitting.{n}.q_minus_components"),
            split,
            1e-10,
        ));
        out.push(Check::at_least(
            "splitting",
            format!("splitting.{n}.dominance"),
            dominance,
            -1e-12,
        ));
        out.push(Check::at_most(
            "splitting",
            format!("splitting.{n}.gap_identity"),
            identity,
            1e-10,
        ));
        out.push(Check::at_most(
            "splitting",
            format!("splitting.{n}.equality_at_maxima"),
            at_maxima,
            1e-8,
        ));
    }
    out
}

pub(super) fn stationarity(units: Units) -> Vec<Check> {
    let mut states = profile_states(units);
    states.insert(1, Box::new(linear_momentum_state(0.0, units)));
    states
        .iter()
        .map(|s| {
            let rep =
                stationarity_residual(s.as_ref(), &grid_2001(s.as_ref())).expect("known system");
            let tol = 1e-9 * rep.energy.abs().max(1.0);
            Check::at_most(
                "stationarity",
                format!("stationarity.{}", name(s.as_ref())),
                rep.max_residual,
                tol,
            )
            .with_detail(format!(
                "{} unmasked points, E = {}",
                rep.points, rep.energy
            ))
        })
        .collect()
}

fn hamiltonian(state: impl StateField + 'static) -> EffectiveHamiltonian {
    EffectiveHamiltonian::for_state(Arc::new(state)).expect("state with known system")
}

pub(super) fn trajectories(units: Units) -> Vec<Check> {
    let mut out = Vec::new();
    let s = "trajectories";
    let energy = 0.0;
    let lin = hamiltonian(linear_momentum_state(energy, units));
    let slope = crate::wavefunctions::LINEAR_SLOPE;
    for p0 in [1.0, 0.5, -1.0] {
        let rec = integrate(&lin, lin.causal_start_from_axis(p0), 4.0, 1e-3).expect("smooth flow");
        let (mut closed, mut causal) = (0.0f64, 0.0f64);
        for smp in &rec.samples {
            let p = p0 - slope * smp.t;
            let x = (energy - p * p / (2.0 * units.mass)) / slope;
            closed = closed.max((smp.p - p).abs()).max((smp.x - x).abs());
            causal =
                causal.max((smp.x - (energy - smp.p * smp.p / (2.0 * units.mass)) / slope).abs());
        }
        out.push(Check::at_most(
            s,
            format!("trajectories.linear_closed_form[p0={p0}]"),
            closed,
            1e-10,
        ));
        out.push(Check::at_most(
            s,
            format!("trajectories.linear_causal[p0={p0}]"),
            causal,
            1e-10,
        ));
        out.push(Check::at_most(
            s,
            format!("trajectories.linear_energy_drift[p0={p0}]"),
            rec.energy_drift(),
            1e-8,
        ));
    }
    let stationary: Vec<(EffectiveHamiltonian, Vec<f64>)> = vec![
        (
            hamiltonian(airy_state(0.0, units)),
            vec![-2.338, -1.0188, 0.0, 1.0, -6.5],
        ),
        (
            hamiltonian(qho_state(0, Axis::X, units)),
            vec![0.0, 0.5, -1.5],
        ),
        (
            hamiltonian(qho_state(2, Axis::X, units)),
            vec![0.0, 0.4, 1.2, -2.5],
        ),
        (
            hamiltonian(qho_state(0, Axis::P, units)),
            vec![0.0, 0.5, -1.5],
        ),
        (
            hamiltonian(qho_state(2, Axis::P, units)),
            vec![0.0, 0.4, 1.2, -2.5],
        ),
    ];
    for (h, starts) in &stationary {
        let n = name(h.state());
        for &v in starts {
            let result = integrate(h, h.causal_start_from_axis(v), 10.0, 1e-3);
            let (moved, drift) = match &result {
                Ok(rec) => (rec.max_displacement(), rec.energy_drift()),
                Err(_) => (f64::INFINITY, f64::INFINITY),
            };
            out.push(
                Check::at_most(s, format!("trajectories.{n}.stationary[{v}]"), moved, 1e-10)
                    .with_detail(result.err().map(|e| e.to_string()).unwrap_or_default()),
            );
            out.push(Check::at_most(
                s,
                format!("trajectories.{n}.energy_drift[{v}]"),
                drift,
                1e-8,
            ));
        }
    }
    // matched start: the origin is a configuration stationary point of the
    // E = 0 Airy state and satisfies x = -S'(0) for the momentum state
    let airy = &stationary[0].0;
    let cfg = integrate(airy, Phase { x: 0.0, p: 0.0 }, 4.0, 1e-3).expect("stationary");
    let mom = integrate(&lin, Phase { x: 0.0, p: 0.0 }, 4.0, 1e-3).expect("smooth flow");
    let report = symplectic_break(&cfg, &mom);
    out.push(Check::at_least(
        s,
        "trajectories.linear_symplectic_break",
        report.max_dx,
        1e-3,
    ));
    // stationary versus parabolic: dx(t) = F t²/(2m)
    let quadratic = report
        .series
        .iter()
        .filter(|d| d.t > 0.0)
        .map(|d| (d.dx - slope * d.t * d.t / (2.0 * units.mass)).abs())
        .fold(0.0f64, f64::max);
    out.push(Check::at_most(
        s,
        "trajectories.linear_divergence_quadratic",
        quadratic,
        1e-10,
    ));
    for n in [0, 2] {
        let hx = hamiltonian(qho_state(n, Axis::X, units));
        let hp = hamiltonian(qho_state(n, Axis::P, units));
        let origin = Phase { x: 0.0, p: 0.0 };
        let a = integrate(&hx, origin, 10.0, 1e-3).expect("stationary");
        let b = integrate(&hp, origin, 10.0, 1e-3).expect("stationary");
        let r = symplectic_break(&a, &b);
        out.push(Check::at_most(
            s,
            format!("trajectories.qho{n}_symplectic_break"),
            r.max_dx.max(r.max_dp),
            1e-10,
        ));
    }
    out
}

pub(super) fn wigner(units: Units) -> Vec<Check> {
    let s = "wigner";
    let mut out = Vec::new();
    let xs: Vec<f64> = (0..=60).map(|i| -3.0 + 0.1 * i as f64).collect();
    let ground = qho_state(0, Axis::X, units);
    let half = units.mass * units.omega * units.hbar / 2.0;
    match wigner_moment_check(&ground, &xs, &default_wigner_settings(&ground)) {
        Ok(rep) => {
            let variance = rep
                .variance
                .iter()
                .map(|v| (v - half).abs())
                .fold(0.0f64, f64::max);
            out.push(Check::at_most(
                s,
                "wigner.qho0.variance_is_half",
                variance,
                1e-6,
            ));
            out.push(Check::at_most(
                s,
                "wigner.qho0.moment_identity",
                rep.max_residual,
                1e-6,
            ));
        }
        Err(e) => {
            out.push(Check::holds(s, "wigner.qho0.quadrature", false).with_detail(e.to_string()))
        }
    }
    let excited = qho_state(2, Axis::X, units);
    match wigner_moment_check(&excited, &xs, &default_wigner_settings(&excited)) {
        Ok(rep) => {
            out.push(Check::at_most(
                s,
                "wigner.qho2.moment_identity",
                rep.max_residual,
                1e-5,
            ));
            out.push(
                Check::at_most(
                    s,
                    "wigner.qho2.negative_p_dispersion",
                    rep.min_variance,
                    0.0,
                )
                .with_detail(
                    "-(hbar^2/4) d2 ln rho is positive for real-rooted polynomial times Gaussian; \
                     this check cannot pass",
                ),
            );
            out.push(Check::at_most(
                s,
                "wigner.qho2.negative_wigner_function",
                rep.min_wigner,
                0.0,
            ));
        }
        Err(e) => {
            out.push(Check::holds(s, "wigner.qho2.quadrature", false).with_detail(e.to_string()))
        }
    }
    out
}

/// Max derivative error of a sampled `e^{-x²/2} e^{i sin x}` on `|x| ≤ 3`
/// for `count` samples over `[-8, 8]`.
pub(crate) fn sampled_derivative_error(count: usize, units: Units) -> f64 {
    let grid = Grid::new(-8.0, 8.0, count).expect("valid grid");
    let xs = grid.points();
    let samples: Vec<Complex64> = xs
        .iter()
        .map(|&x| Complex64::from_polar((-x * x / 2.0).exp(), x.sin()))
        .collect();
    let state = sampled_state(&xs, &samples, Axis::X, units).expect("uniform grid");
    let hbar = units.hbar;
    let r_exact = |x: f64, k: usize| {
        let g = (-x * x / 2.0).exp();
        match k {
            1 => -x * g,
            2 => (x * x - 1.0) * g,
            _ => (3.0 * x - x * x * x) * g,
        }
    };
    let s_exact = |x: f64, k: usize| {
        hbar * match k {
            1 => x.cos(),
            2 => -x.sin(),
            _ => -x.cos(),
        }
    };
    let mut worst = 0.0f64;
    for x in (0..=60).map(|i| -3.0 + 0.1 * i as f64) {
        for k in 1..=3 {
            worst = worst.max((state.r_derivative(x, k) - r_exact(x, k)).abs());
            worst = worst.max((state.s_derivative(x, k) - s_exact(x, k)).abs());
        }
    }
    worst
}

fn final_error(
    h: &EffectiveHamiltonian,
    start: Phase,
    t_end: f64,
    dt: f64,
    exact: impl Fn(f64) -> Phase,
) -> f64 {
    let rec: TrajectoryRecord = integrate(h, start, t_end, dt).expect("smooth flow");
    let last = rec.samples.last().expect("non-empty");
    let want = exact(last.t);
    (last.x - want.x).abs().max((last.p - want.p).abs())
}

/// Oscillator driven by a plane wave (`R ≡ 1`, `S = x`), where the quantum
/// potential vanishes and the flow is `x = sin t`, `p = cos t`. Returns the
/// least-squares slope of `log₂ error` against `log₂ dt` over four halvings
/// starting at `dt`, with the errors.
pub(crate) fn oscillator_rk4_order(units: Units, dt: f64) -> (f64, Vec<f64>) {
    let state = PolynomialState {
        r: RationalPoly(vec![Rational::from_integer(1.into())]),
        s: RationalPoly(vec![
            Rational::from_integer(0.into()),
            Rational::from_integer(1.into()),
        ]),
        axis: Axis::X,
        units: Units {
            mass: 1.0,
            omega: 1.0,
            ..units
        },
    };
    let h = EffectiveHamiltonian::new(
        Arc::new(state),
        PolynomialOperator::kinetic_quadratic(1.0),
        PolynomialOperator::harmonic(1.0, 1.0),
    )
    .expect("matching kinds");
    let exact = |t: f64| Phase {
        x: t.sin(),
        p: t.cos(),
    };
    let start = Phase { x: 0.0, p: 1.0 };
    let steps: Vec<f64> = (0..5).map(|i| dt / f64::powi(2.0, i)).collect();
    let errors: Vec<f64> = steps
        .iter()
        .map(|&d| final_error(&h, start, 4.0, d, exact))
        .collect();
    let pts: Vec<(f64, f64)> = steps
        .iter()
        .zip(&errors)
        .map(|(d, e)| (d.log2(), e.log2()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxy / sxx, errors)
}

pub(super) fn convergence(units: Units) -> Vec<Check> {
    let s = "convergence";
    let mut out = Vec::new();
    let coarse = sampled_derivative_error(161, units);
    let fine = sampled_derivative_error(321, units);
    out.push(
        Check::at_least(
            s,
            "convergence.sampled_derivative_order",
            (coarse / fine).log2(),
            4.0,
        )
        .with_detail(format!("errors {coarse:e} -> {fine:e}")),
    );
    let lin = hamiltonian(linear_momentum_state(0.0, units));
    let slope = crate::wavefunctions::LINEAR_SLOPE;
    let exact = |t: f64| {
        let p = 1.0 - slope * t;
        Phase {
            x: -p * p / (2.0 * units.mass * slope),
            p,
        }
    };
    let start = lin.causal_start_from_axis(1.0);
    let e1 = final_error(&lin, start, 4.0, 0.1, exact);
    let e2 = final_error(&lin, start, 4.0, 0.05, exact);
    // the flow is quadratic in t, so RK4 carries no truncation error and the
    // halved-step error may only fall to the rounding floor
    out.push(
        Check::at_most(s, "convergence.rk4_linear_flow", e2, (e1 / 16.0).max(1e-12))
            .with_detail(format!("errors {e1:e} -> {e2:e}")),
    );
    let (order, errors) = oscillator_rk4_order(units, 0.1);
    out.push(
        Check::at_least(s, "convergence.rk4_oscillator_order", order, 3.9)
            .with_detail(format!("errors {errors:?}")),
    );
    out
}
