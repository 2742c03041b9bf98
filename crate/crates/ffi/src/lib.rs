//! C ABI over `qpot`.
//!
//! Every fallible call returns a [`QpotStatus`]; on failure a message is
//! available from [`qpot_last_error_message`] on the same thread. Handles are
//! opaque and owned by the caller, who releases them with the matching
//! `*_free` function. Strings returned by the library are released with
//! [`qpot_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use qpot::algebra::{evaluate_expansion, to_latex, Part};
use qpot::cli::StateSelector;
use qpot::dynamics::{integrate, DynamicsError, Phase};
use qpot::energetics::{decompose_config, decompose_momentum_qho};
use qpot::{
    expand, Axis, EffectiveHamiltonian, EnergyProfile, Grid, PolynomialOperator, QhjExpansion,
    Representation, StateField, TrajectoryRecord, Units,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QpotStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Incompatible = 4,
    NodeHalt = 5,
    InvalidArgument = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QpotRepresentation {
    Configuration = 0,
    Momentum = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QpotPart {
    Quantum = 0,
    Classical = 1,
    Total = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QpotProfileColumn {
    Axis = 0,
    Rho = 1,
    Q = 2,
    Disp = 3,
    Loc = 4,
    QDensity = 5,
    DispDensity = 6,
    LocDensity = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QpotTrajectoryColumn {
    T = 0,
    X = 1,
    P = 2,
    H = 3,
}

/// Physical constants; all three must be positive and finite.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QpotUnits {
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
}

pub struct QpotExpansion {
    inner: QhjExpansion,
}

pub struct QpotState {
    inner: Arc<dyn StateField>,
}

pub struct QpotProfile {
    inner: EnergyProfile,
}

pub struct QpotTrajectory {
    inner: TrajectoryRecord,
}

struct Failure(QpotStatus, String);

impl Failure {
    fn new(status: QpotStatus, msg: impl Into<String>) -> Self {
        Self(status, msg.into())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QpotStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QpotStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {msg}"));
            QpotStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure::new(
            QpotStatus::NullPointer,
            format!("{what} is null"),
        ));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure::new(QpotStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure::new(QpotStatus::NullPointer, format!("{what} is null")))
}

fn out_ptr<T>(p: *mut T) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure::new(
            QpotStatus::NullPointer,
            "output pointer is null",
        ))
    } else {
        Ok(())
    }
}

fn units_from(u: *const QpotUnits) -> Result<Units, Failure> {
    let Some(u) = (unsafe { u.as_ref() }) else {
        return Ok(Units::default());
    };
    for (name, v) in [("hbar", u.hbar), ("mass", u.mass), ("omega", u.omega)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Failure::new(
                QpotStatus::InvalidArgument,
                format!("{name} must be positive and finite"),
            ));
        }
    }
    Ok(Units {
        hbar: u.hbar,
        mass: u.mass,
        omega: u.omega,
    })
}

impl From<QpotRepresentation> for Representation {
    fn from(r: QpotRepresentation) -> Self {
        match r {
            QpotRepresentation::Configuration => Representation::Configuration,
            QpotRepresentation::Momentum => Representation::Momentum,
        }
    }
}

impl From<QpotPart> for Part {
    fn from(p: QpotPart) -> Self {
        match p {
            QpotPart::Quantum => Part::Quantum,
            QpotPart::Classical => Part::Classical,
            QpotPart::Total => Part::Total,
        }
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s)
        .expect("library strings have no interior nul")
        .into_raw()
}

fn copy_out(src: &[f64], buf: *mut f64, len: usize) -> Result<(), Failure> {
    if len < src.len() {
        return Err(Failure::new(
            QpotStatus::BufferTooSmall,
            format!("buffer holds {len} values, {} needed", src.len()),
        ));
    }
    out_ptr(buf)?;
    unsafe { ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len()) };
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qpot_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qpot_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Expands a polynomial operator such as `"x^4"` or `"p^2/2"`.
///
/// # Safety
/// `op` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpot_expand(
    op: *const c_char,
    representation: QpotRepresentation,
    out: *mut *mut QpotExpansion,
) -> QpotStatus {
    guard(|| {
        out_ptr(out)?;
        let text = read_str(op, "operator")?;
        let op = PolynomialOperator::parse(text)
            .map_err(|e| Failure::new(QpotStatus::Parse, e.to_string()))?;
        let inner = expand(&op, representation.into())
            .map_err(|e| Failure::new(QpotStatus::Incompatible, e.to_string()))?;
        *out = Box::into_raw(Box::new(QpotExpansion { inner }));
        Ok(())
    })
}

/// # Safety
/// `e` must come from [`qpot_expand`] and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn qpot_expansion_free(e: *mut QpotExpansion) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Number of terms in one part of the expansion.
///
/// # Safety
/// `e` must be a live expansion and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpot_expansion_term_count(
    e: *const QpotExpansion,
    part: QpotPart,
    out: *mut usize,
) -> QpotStatus {
    guard(|| {
        let e = handle(e, "expansion")?;
        out_ptr(out)?;
        *out = e.inner.part(part.into()).len();
        Ok(())
    })
}

/// Serialises the expansion as JSON; release with [`qpot_string_free`].
///
/// # Safety
/// `e` must be a live expansion and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpot_expansion_to_json(
    e: *const QpotExpansion,
    out: *mut *mut c_char,
) -> QpotStatus {
    guard(|| {
        let e = handle(e, "expansion")?;
        out_ptr(out)?;
        *out = into_c_string(e.inner.to_json());
        Ok(())
    })
}

/// Renders the expansion as LaTeX; release with [`qpot_string_free`].
///
/// # Safety
/// `e` must be a live expansion and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpot_expansion_to_latex(
    e: *const QpotExpansion,
    out: *mut *mut c_char,
) -> QpotStatus {
    guard(|| {
        let e = handle(e, "expansion")?;
        out_ptr(out)?;
        *out = into_c_string(to_latex(&e.inner));
        Ok(())
    })
}

/// Evaluates one part of the expansion for `state` at axis value `at`.
///
/// # Safety
/// `e` and `state` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpot_expansion_evaluate(
    e: *const QpotExpansion,
    part: QpotPart,
    state: *const QpotState,
    at: f64,
    out: *mut f64,
) -> QpotStatus {
    guard(|| {
        let e = handle(e, "expansion")?;
        let s = handle(state, "state")?;
        out_ptr(out)?;
        if s.inner.axis().representation() != e.inner.representation {
            return Err(Failure::new(
                QpotStatus::Incompatible,
                format!(
                    "state is in the {} representation, expansion in the {}",
                    s.inner.axis().representation(),
                    e.inner.representation
                ),
            ));
        }
        *out = evaluate_expansion(&e.inner, part.into(), s.inner.as_ref(), at)
            .map_err(|err| Failure::new(QpotStatus::NodeHalt, err.to_string()))?;
        Ok(())
    })
}

/// Builds a reference state: `"airy"`, `"linear-momentum"` or `"qho:<n>"`.
/// `energy` is used by the linear-potential states and ignored by the
/// oscillator. `units` may be NULL for ħ = m = ω = 1.
///
/// # Safety
/// `selector` must be a nul-terminated string, `units` NULL or valid and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpot_state_new(
    selector: *const c_char,
    representation: QpotRepresentation,
    energy: f64,
    units: *const QpotUnits,
    out: *mut *mut QpotState,
) -> QpotStatus {
    guard(|| {
        out_ptr(out)?;
        let text = read_str(selector, "selector")?;
        let sel: StateSelector = text
            .parse()
            .map_err(|e: String| Failure::new(QpotStatus::Parse, e))?;
        if !energy.is_finite() {
            return Err(Failure::new(
                QpotStatus::InvalidArgument,
                "energy must be finite",
            ));
        }
        let units = units_from(units)?;
        let rep: Representation = representation.into();
        let inner = sel.build(Axis::from(rep), energy, units).ok_or_else(|| {
            Failure::new(
                QpotStatus::Incompatible,
                format!("state `{text}` has no {rep} form"),
            )
        })?;
        *out = Box::into_raw(Box::new(QpotState { inner }));
        Ok(())
    })
}

/// # Safety
/// `s` must come from [`qpot_state_new`] and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn qpot_state_free(s: *mut QpotState) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// `order`-th derivative of the amplitude `R` at `at`.
///
/// # Safety
/// `s` must be a live state and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpot_state_r_derivative(
    s: *const QpotState,
    at: f64,
    order: usize,
    out: *mut f64,
) -> QpotStatus {
    guard(|| {
        let s = handle(s, "state")?;
        out_ptr(out)?;
        *out = s.inner.r_derivative(at, order);
        Ok(())
    })
}

/// `order`-th derivative of the phase `S` at `at`.
///
/// # Safety
/// `s` must be a live state and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpot_state_s_derivative(
    s: *const QpotState,
    at: f64,
    order: usize,
    out: *mut f64,
) -> QpotStatus {
    guard(|| {
        let s = handle(s, "state")?;
        out_ptr(out)?;
        *out = s.inner.s_derivative(at, order);
        Ok(())
    })
}

/// Energy decomposition of `state` on a uniform grid.
///
/// # Safety
/// `s` must be a live state and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpot_profile_new(
    s: *const QpotState,
    min: f64,
    max: f64,
    count: usize,
    out: *mut *mut QpotProfile,
) -> QpotStatus {
    guard(|| {
        let s = handle(s, "state")?;
        out_ptr(out)?;
        let grid = Grid::new(min, max, count)
            .map_err(|e| Failure::new(QpotStatus::InvalidArgument, e.to_string()))?;
        let inner = match s.inner.axis() {
            Axis::X => decompose_config(s.inner.as_ref(), &grid),
            Axis::P => decompose_momentum_qho(s.inner.as_ref(), &grid),
        }
        .map_err(|e| Failure::new(QpotStatus::Incompatible, e.to_string()))?;
        *out = Box::into_raw(Box::new(QpotProfile { inner }));
        Ok(())
    })
}

/// # Safety
/// `p` must come from [`qpot_profile_new`] and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn qpot_profile_free(p: *mut QpotProfile) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of grid points in the profile; 0 for NULL.
///
/// # Safety
/// `p` must be NULL or a live profile.
#[no_mangle]
pub unsafe extern "C" fn qpot_profile_len(p: *const QpotProfile) -> usize {
    p.as_ref().map_or(0, |p| p.inner.len())
}

/// Copies one column into `buf`, which must hold at least
/// [`qpot_profile_len`] values. Masked points are NaN in the pointwise columns.
///
/// # Safety
/// `p` must be a live profile and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn qpot_profile_copy_column(
    p: *const QpotProfile,
    column: QpotProfileColumn,
    buf: *mut f64,
    len: usize,
) -> QpotStatus {
    guard(|| {
        let p = &handle(p, "profile")?.inner;
        let src = match column {
            QpotProfileColumn::Axis => &p.axis,
            QpotProfileColumn::Rho => &p.rho,
            QpotProfileColumn::Q => &p.q,
            QpotProfileColumn::Disp => &p.disp,
            QpotProfileColumn::Loc => &p.loc,
            QpotProfileColumn::QDensity => &p.q_density,
            QpotProfileColumn::DispDensity => &p.disp_density,
            QpotProfileColumn::LocDensity => &p.loc_density,
        };
        copy_out(src, buf, len)
    })
}

/// Copies the node mask (1 near a node, 0 elsewhere) into `buf`.
///
/// # Safety
/// `p` must be a live profile and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn qpot_profile_copy_mask(
    p: *const QpotProfile,
    buf: *mut u8,
    len: usize,
) -> QpotStatus {
    guard(|| {
        let p = &handle(p, "profile")?.inner;
        if len < p.len() {
            return Err(Failure::new(
                QpotStatus::BufferTooSmall,
                format!("buffer holds {len} values, {} needed", p.len()),
            ));
        }
        out_ptr(buf)?;
        for (i, &m) in p.mask.iter().enumerate() {
            *buf.add(i) = m as u8;
        }
        Ok(())
    })
}

/// Integrates the causal trajectory of `state` starting at axis value `start`
/// (x in the configuration representation, p in momentum) up to `t_end` with
/// fixed RK4 step `dt`.
///
/// When the integration halts at a node or on energy drift the status is
/// `NodeHalt` and `*out` still receives the partial trajectory, which the
/// caller must free.
///
/// # Safety
/// `s` must be a live state and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpot_trajectory_new(
    s: *const QpotState,
    start: f64,
    t_end: f64,
    dt: f64,
    out: *mut *mut QpotTrajectory,
) -> QpotStatus {
    guard(|| {
        let s = handle(s, "state")?;
        out_ptr(out)?;
        *out = ptr::null_mut();
        let h = EffectiveHamiltonian::for_state(s.inner.clone())
            .map_err(|e| Failure::new(QpotStatus::Incompatible, e.to_string()))?;
        let begin: Phase = h.causal_start_from_axis(start);
        match integrate(&h, begin, t_end, dt) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(QpotTrajectory { inner }));
                Ok(())
            }
            Err(e @ (DynamicsError::NodePoint { .. } | DynamicsError::StepTooLarge { .. })) => {
                let inner = e.partial().cloned().expect("halts carry a record");
                *out = Box::into_raw(Box::new(QpotTrajectory { inner }));
                Err(Failure::new(QpotStatus::NodeHalt, e.to_string()))
            }
            Err(e @ DynamicsError::InvalidStep) => {
                Err(Failure::new(QpotStatus::InvalidArgument, e.to_string()))
            }
            Err(e) => Err(Failure::new(QpotStatus::Incompatible, e.to_string())),
        }
    })
}

/// # Safety
/// `t` must come from [`qpot_trajectory_new`] and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn qpot_trajectory_free(t: *mut QpotTrajectory) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Number of samples; 0 for NULL.
///
/// # Safety
/// `t` must be NULL or a live trajectory.
#[no_mangle]
pub unsafe extern "C" fn qpot_trajectory_len(t: *const QpotTrajectory) -> usize {
    t.as_ref().map_or(0, |t| t.inner.samples.len())
}

/// Copies one column of the samples into `buf`.
///
/// # Safety
/// `t` must be a live trajectory and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn qpot_trajectory_copy_column(
    t: *const QpotTrajectory,
    column: QpotTrajectoryColumn,
    buf: *mut f64,
    len: usize,
) -> QpotStatus {
    guard(|| {
        let t = &handle(t, "trajectory")?.inner;
        let values: Vec<f64> = t
            .samples
            .iter()
            .map(|s| match column {
                QpotTrajectoryColumn::T => s.t,
                QpotTrajectoryColumn::X => s.x,
                QpotTrajectoryColumn::P => s.p,
                QpotTrajectoryColumn::H => s.h,
            })
            .collect();
        copy_out(&values, buf, len)
    })
}
