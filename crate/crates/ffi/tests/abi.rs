use std::ffi::{CStr, CString};
use std::ptr;

use qpot_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = qpot_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn expansion(op: &str, rep: QpotRepresentation) -> *mut QpotExpansion {
    let mut e = ptr::null_mut();
    assert_eq!(
        unsafe { qpot_expand(c(op).as_ptr(), rep, &mut e) },
        QpotStatus::Ok
    );
    e
}

fn state(
    sel: &str,
    rep: QpotRepresentation,
    energy: f64,
    units: Option<QpotUnits>,
) -> *mut QpotState {
    let mut s = ptr::null_mut();
    let u = units.as_ref().map_or(ptr::null(), |u| u as *const _);
    let status = unsafe { qpot_state_new(c(sel).as_ptr(), rep, energy, u, &mut s) };
    assert_eq!(status, QpotStatus::Ok, "{}", last_error());
    s
}

#[test]
fn vq4_terms_and_strings() {
    let e = expansion("x^4", QpotRepresentation::Momentum);
    let mut n = 0usize;
    unsafe {
        assert_eq!(
            qpot_expansion_term_count(e, QpotPart::Quantum, &mut n),
            QpotStatus::Ok
        );
        assert_eq!(n, 5);
        assert_eq!(
            qpot_expansion_term_count(e, QpotPart::Classical, &mut n),
            QpotStatus::Ok
        );
        assert_eq!(n, 1);
        let mut json = ptr::null_mut();
        assert_eq!(qpot_expansion_to_json(e, &mut json), QpotStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        qpot_string_free(json);
        let back = qpot::QhjExpansion::from_json(&text).unwrap();
        let direct = qpot::expand(
            &qpot::PolynomialOperator::parse("x^4").unwrap(),
            qpot::Representation::Momentum,
        )
        .unwrap();
        assert_eq!(back, direct);
        let mut latex = ptr::null_mut();
        assert_eq!(qpot_expansion_to_latex(e, &mut latex), QpotStatus::Ok);
        assert!(CStr::from_ptr(latex)
            .to_str()
            .unwrap()
            .contains("\\hbar^{4}"));
        qpot_string_free(latex);
        qpot_expansion_free(e);
    }
}

#[test]
fn evaluation_matches_oscillator_quantum_potential() {
    // Q = ħ²/(2m)(1 - x²/σ⁴ ... ) reduces to (1 - x²)/2 in natural units
    let e = expansion("p^2/2", QpotRepresentation::Configuration);
    let s = state("qho:0", QpotRepresentation::Configuration, 0.0, None);
    for x in [-1.5, 0.0, 0.3, 2.0] {
        let mut q = 0.0;
        let status = unsafe { qpot_expansion_evaluate(e, QpotPart::Quantum, s, x, &mut q) };
        assert_eq!(status, QpotStatus::Ok);
        assert!((q - (1.0 - x * x) / 2.0).abs() < 1e-13, "{x} {q}");
        let mut total = 0.0;
        unsafe { qpot_expansion_evaluate(e, QpotPart::Total, s, x, &mut total) };
        assert!((total + x * x / 2.0 - 0.5).abs() < 1e-13);
    }
    unsafe {
        qpot_expansion_free(e);
        qpot_state_free(s);
    }
}

#[test]
fn representation_mismatch_and_nodes() {
    let e = expansion("p^2/2", QpotRepresentation::Configuration);
    let p = state("qho:1", QpotRepresentation::Momentum, 0.0, None);
    let x = state("qho:1", QpotRepresentation::Configuration, 0.0, None);
    let mut v = 0.0;
    unsafe {
        assert_eq!(
            qpot_expansion_evaluate(e, QpotPart::Quantum, p, 0.1, &mut v),
            QpotStatus::Incompatible
        );
        assert_eq!(
            qpot_expansion_evaluate(e, QpotPart::Quantum, x, 0.0, &mut v),
            QpotStatus::NodeHalt
        );
        assert!(last_error().contains("node"));
        qpot_expansion_free(e);
        qpot_state_free(p);
        qpot_state_free(x);
    }
}

#[test]
fn error_statuses() {
    let mut e = ptr::null_mut();
    unsafe {
        assert_eq!(
            qpot_expand(c("x^2").as_ptr(), QpotRepresentation::Configuration, &mut e),
            QpotStatus::Incompatible
        );
        assert!(last_error().contains("multiplicative"));
        assert_eq!(
            qpot_expand(c("x^2 + p").as_ptr(), QpotRepresentation::Momentum, &mut e),
            QpotStatus::Parse
        );
        assert_eq!(
            qpot_expand(ptr::null(), QpotRepresentation::Momentum, &mut e),
            QpotStatus::NullPointer
        );
        assert_eq!(
            qpot_expand(
                c("x^2").as_ptr(),
                QpotRepresentation::Momentum,
                ptr::null_mut()
            ),
            QpotStatus::NullPointer
        );
        let bad = [0xffu8, 0];
        assert_eq!(
            qpot_expand(bad.as_ptr().cast(), QpotRepresentation::Momentum, &mut e),
            QpotStatus::InvalidUtf8
        );
        assert!(e.is_null());
        let mut s = ptr::null_mut();
        assert_eq!(
            qpot_state_new(
                c("airy").as_ptr(),
                QpotRepresentation::Momentum,
                0.0,
                ptr::null(),
                &mut s
            ),
            QpotStatus::Incompatible
        );
        assert_eq!(
            qpot_state_new(
                c("qho:-1").as_ptr(),
                QpotRepresentation::Momentum,
                0.0,
                ptr::null(),
                &mut s
            ),
            QpotStatus::Parse
        );
        let u = QpotUnits {
            hbar: 0.0,
            mass: 1.0,
            omega: 1.0,
        };
        assert_eq!(
            qpot_state_new(
                c("qho:0").as_ptr(),
                QpotRepresentation::Momentum,
                0.0,
                &u,
                &mut s
            ),
            QpotStatus::InvalidArgument
        );
        assert!(last_error().contains("hbar"));
        qpot_expansion_free(ptr::null_mut());
        qpot_state_free(ptr::null_mut());
        qpot_profile_free(ptr::null_mut());
        qpot_trajectory_free(ptr::null_mut());
        qpot_string_free(ptr::null_mut());
        assert_eq!(qpot_profile_len(ptr::null()), 0);
        assert_eq!(qpot_trajectory_len(ptr::null()), 0);
    }
}

#[test]
fn state_derivatives_respect_units() {
    let u = QpotUnits {
        hbar: 0.5,
        mass: 2.0,
        omega: 3.0,
    };
    let s = state("qho:0", QpotRepresentation::Configuration, 0.0, Some(u));
    let native = qpot::wavefunctions::qho_state(
        0,
        qpot::Axis::X,
        qpot::Units {
            hbar: 0.5,
            mass: 2.0,
            omega: 3.0,
        },
    );
    use qpot::StateField;
    for order in 0..4 {
        let (mut r, mut sd) = (0.0, 0.0);
        unsafe {
            assert_eq!(
                qpot_state_r_derivative(s, 0.4, order, &mut r),
                QpotStatus::Ok
            );
            assert_eq!(
                qpot_state_s_derivative(s, 0.4, order, &mut sd),
                QpotStatus::Ok
            );
        }
        assert_eq!(r, native.r_derivative(0.4, order));
        assert_eq!(sd, native.s_derivative(0.4, order));
    }
    unsafe { qpot_state_free(s) };
}

#[test]
fn profile_columns_and_mask() {
    let s = state("qho:2", QpotRepresentation::Momentum, 0.0, None);
    let mut p = ptr::null_mut();
    unsafe {
        assert_eq!(qpot_profile_new(s, -4.0, 4.0, 801, &mut p), QpotStatus::Ok);
        let n = qpot_profile_len(p);
        assert_eq!(n, 801);
        let mut axis = vec![0.0; n];
        let mut q = vec![0.0; n];
        let mut mask = vec![9u8; n];
        assert_eq!(
            qpot_profile_copy_column(p, QpotProfileColumn::Axis, axis.as_mut_ptr(), n),
            QpotStatus::Ok
        );
        assert_eq!(
            qpot_profile_copy_column(p, QpotProfileColumn::Q, q.as_mut_ptr(), n),
            QpotStatus::Ok
        );
        assert_eq!(
            qpot_profile_copy_mask(p, mask.as_mut_ptr(), n),
            QpotStatus::Ok
        );
        assert_eq!(
            qpot_profile_copy_mask(p, mask.as_mut_ptr(), n - 1),
            QpotStatus::BufferTooSmall
        );
        assert!((axis[0] + 4.0).abs() < 1e-15 && (axis[n - 1] - 4.0).abs() < 1e-15);
        assert!(mask.iter().all(|&m| m <= 1));
        assert!(mask.contains(&1));
        for i in 0..n {
            assert_eq!(mask[i] == 1, q[i].is_nan(), "{i}");
        }
        let mut dummy = 0.0;
        assert_eq!(
            qpot_profile_copy_column(p, QpotProfileColumn::Rho, &mut dummy, 1),
            QpotStatus::BufferTooSmall
        );
        qpot_profile_free(p);
        assert_eq!(
            qpot_profile_new(s, 1.0, -1.0, 801, &mut p),
            QpotStatus::InvalidArgument
        );
        qpot_state_free(s);
    }
}

fn column(t: *const QpotTrajectory, col: QpotTrajectoryColumn) -> Vec<f64> {
    let n = unsafe { qpot_trajectory_len(t) };
    let mut v = vec![0.0; n];
    assert_eq!(
        unsafe { qpot_trajectory_copy_column(t, col, v.as_mut_ptr(), n) },
        QpotStatus::Ok
    );
    v
}

#[test]
fn linear_momentum_trajectory_is_a_parabola() {
    let s = state("linear-momentum", QpotRepresentation::Momentum, 0.0, None);
    let mut t = ptr::null_mut();
    unsafe {
        assert_eq!(
            qpot_trajectory_new(s, 1.0, 2.0, 1e-3, &mut t),
            QpotStatus::Ok
        )
    };
    let (ts, xs, ps) = (
        column(t, QpotTrajectoryColumn::T),
        column(t, QpotTrajectoryColumn::X),
        column(t, QpotTrajectoryColumn::P),
    );
    assert_eq!(ts.len(), 2001);
    for i in 0..ts.len() {
        let p = 1.0 - ts[i] / 2.0;
        assert!((ps[i] - p).abs() < 1e-10 && (xs[i] + p * p).abs() < 1e-10);
    }
    unsafe {
        qpot_trajectory_free(t);
        qpot_state_free(s);
    }
}

#[test]
fn node_halt_returns_partial_trajectory() {
    let s = state("qho:2", QpotRepresentation::Configuration, 0.0, None);
    let mut t = ptr::null_mut();
    let status = unsafe { qpot_trajectory_new(s, 0.5f64.sqrt(), 1.0, 1e-3, &mut t) };
    assert_eq!(status, QpotStatus::NodeHalt);
    assert!(!t.is_null());
    assert!(last_error().contains("node"));
    assert_eq!(unsafe { qpot_trajectory_len(t) }, 0);
    let mut bad = ptr::null_mut();
    unsafe {
        assert_eq!(
            qpot_trajectory_new(s, 0.2, 1.0, -1.0, &mut bad),
            QpotStatus::InvalidArgument
        );
        assert!(bad.is_null());
        qpot_trajectory_free(t);
        qpot_state_free(s);
    }
}
