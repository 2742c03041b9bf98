//! Shared text formatting for CSV outputs: `.` decimal, 17 significant digits.

/// Scientific notation with 17 significant digits; `nan` for masked values.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v:.16e}")
    }
}
