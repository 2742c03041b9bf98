//! Airy function `Ai` and its derivative for real arguments.
//!
//! Maclaurin series on `[-9, 9]`, the exponentially
//! decaying asymptotic expansion above it and the oscillatory one below.
//! The only imported constants are `Ai(0)` and `Ai'(0)`.

use std::f64::consts::PI;

/// `Ai(0) = 3^(-2/3) / Γ(2/3)`.
pub const AI_ZERO: f64 = 0.355_028_053_887_817_2;
/// `Ai'(0) = -3^(-1/3) / Γ(1/3)`.
pub const AI_PRIME_ZERO: f64 = -0.258_819_403_792_806_8;

pub(crate) const MACLAURIN_POS: f64 = 9.0;
pub(crate) const MACLAURIN_NEG: f64 = 9.0;

/// `(Ai(x), Ai'(x))`.
pub fn airy_ai(x: f64) -> (f64, f64) {
    if x > MACLAURIN_POS {
        asymptotic_positive(x)
    } else if x < -MACLAURIN_NEG {
        asymptotic_negative(-x)
    } else {
        maclaurin(x)
    }
}

/// Low-order parts of the two constants, for double-double summation.
const AI_ZERO_LO: f64 = 2.052_336_324_362_12e-17;
const AI_PRIME_ZERO_LO: f64 = 2.522_243_111_610_832e-17;

/// Unevaluated sum `hi + lo` carrying about 32 significant digits.
#[derive(Clone, Copy, Debug)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    const ZERO: Self = Self { hi: 0.0, lo: 0.0 };

    fn new(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        Self {
            hi: s,
            lo: lo - (s - hi),
        }
    }

    fn from(v: f64) -> Self {
        Self { hi: v, lo: 0.0 }
    }

    fn add(self, o: Self) -> Self {
        let s = self.hi + o.hi;
        let bb = s - self.hi;
        let err = (self.hi - (s - bb)) + (o.hi - bb);
        Self::new(s, err + self.lo + o.lo)
    }

    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn mul(self, o: Self) -> Self {
        let p = self.hi * o.hi;
        let err = self.hi.mul_add(o.hi, -p);
        Self::new(p, err + self.hi * o.lo + self.lo * o.hi)
    }

    fn div_f64(self, d: f64) -> Self {
        let q1 = self.hi / d;
        let p = q1 * d;
        let err = q1.mul_add(d, -p);
        let r = self.add(Self { hi: -p, lo: -err });
        Self::new(q1, r.hi / d)
    }

    fn abs_hi(self) -> f64 {
        self.hi.abs()
    }
}

/// Maclaurin series `Ai = c1 f - c2 g` summed in double-double arithmetic so
/// that the cancellation between `f` and `g` for larger `|x|` stays harmless.
pub(crate) fn maclaurin(x: f64) -> (f64, f64) {
    let xd = DoubleDouble::from(x);
    let x3 = xd.mul(xd).mul(xd);
    // f = Σ 3^k (1/3)_k x^{3k}/(3k)!,  g = Σ 3^k (2/3)_k x^{3k+1}/(3k+1)!
    let (mut f, mut g, mut df, mut dg) = (
        DoubleDouble::ZERO,
        DoubleDouble::ZERO,
        DoubleDouble::ZERO,
        DoubleDouble::ZERO,
    );
    let mut tf = DoubleDouble::from(1.0);
    let mut tg = xd;
    let mut tdf = xd.mul(xd).div_f64(2.0);
    let mut tdg = DoubleDouble::from(1.0);
    for k in 0..300 {
        let kf = k as f64;
        f = f.add(tf);
        g = g.add(tg);
        df = df.add(tdf);
        dg = dg.add(tdg);
        let largest = tf
            .abs_hi()
            .max(tg.abs_hi())
            .max(tdf.abs_hi())
            .max(tdg.abs_hi());
        if k > 2 && largest < 1e-34 * (1.0 + f.abs_hi() + g.abs_hi() + df.abs_hi() + dg.abs_hi()) {
            break;
        }
        tf = tf.mul(x3).div_f64((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        tg = tg.mul(x3).div_f64((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        tdf = tdf.mul(x3).div_f64((3.0 * kf + 3.0) * (3.0 * kf + 5.0));
        tdg = tdg.mul(x3).div_f64((3.0 * kf + 1.0) * (3.0 * kf + 3.0));
    }
    let c1 = DoubleDouble::new(AI_ZERO, AI_ZERO_LO);
    let c2 = DoubleDouble::new(AI_PRIME_ZERO, AI_PRIME_ZERO_LO).neg();
    let ai = c1.mul(f).add(c2.mul(g).neg());
    let aip = c1.mul(df).add(c2.mul(dg).neg());
    (ai.hi + ai.lo, aip.hi + aip.lo)
}

/// Coefficients `u_k` and `v_k` of the large-argument expansions.
fn asymptotic_coefficients(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0; n];
    for k in 1..n {
        let kf = k as f64;
        u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
    }
    let v = u
        .iter()
        .enumerate()
        .map(|(k, uk)| {
            let kf = k as f64;
            -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk
        })
        .collect();
    (u, v)
}

/// Alternating sum `Σ (-1)^j c_{start+step·j} ζ^{-(start+step·j)}`, truncated
/// at the smallest term.
fn truncated_series(c: &[f64], zeta: f64, start: usize, step: usize) -> f64 {
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    let mut sign = 1.0;
    let mut k = start;
    while k < c.len() {
        let term = c[k] / zeta.powi(k as i32);
        if term.abs() > last {
            break;
        }
        sum += sign * term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        last = term.abs();
        sign = -sign;
        k += step;
    }
    sum
}

pub(crate) fn asymptotic_positive(x: f64) -> (f64, f64) {
    let (u, v) = asymptotic_coefficients(60);
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let e = (-zeta).exp() / (2.0 * PI.sqrt());
    let q = x.powf(0.25);
    let ai = e / q * truncated_series(&u, zeta, 0, 1);
    let aip = -e * q * truncated_series(&v, zeta, 0, 1);
    (ai, aip)
}

pub(crate) fn asymptotic_negative(z: f64) -> (f64, f64) {
    let (u, v) = asymptotic_coefficients(60);
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let theta = zeta + PI / 4.0;
    let (s, c) = theta.sin_cos();
    let q = z.powf(0.25);
    let ue = truncated_series(&u, zeta, 0, 2);
    let uo = truncated_series(&u, zeta, 1, 2);
    let ve = truncated_series(&v, zeta, 0, 2);
    let vo = truncated_series(&v, zeta, 1, 2);
    let ai = (s * ue - c * uo) / (q * PI.sqrt());
    let aip = -q * (c * ve + s * vo) / PI.sqrt();
    (ai, aip)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    // (x, Ai(x), Ai'(x)) from 30-digit arbitrary-precision evaluation.
    const REFERENCE: &[(f64, f64, f64)] = &[
        (-12.0, -0.066555175054373129474, 1.0231104533679707299),
        (-10.0, 0.040241238486443190689, 0.9962650441327900559),
        (-8.0, -0.052705050356386202622, 0.93556093819830655103),
        (-7.5, 0.32177571638064787527, 0.31880950669855459621),
        (-7.0, 0.18428083525050563728, -0.77100816841012654773),
        (-6.5, -0.23802030199711580359, -0.674952492513202173),
        (-6.0, -0.32914517362982310523, 0.34593548728134289493),
        (-5.0, 0.35076100902411431979, 0.32719281855444313679),
        (-4.0, -0.070265532949289515099, -0.7906285753685813803),
        (-2.0, 0.22740742820168557599, 0.61825902074169104141),
        (-1.0, 0.5355608832923521188, -0.010160567116645209395),
        (-0.5, 0.4757280916105395888, -0.20408167033954738614),
        (0.5, 0.23169360648083348977, -0.22491053266468389314),
        (1.0, 0.13529241631288141552, -0.15914744129679321279),
        (2.0, 0.034924130423274379135, -0.053090384433653631704),
        (3.0, 0.0065911393574607191443, -0.011912976705951318474),
        (4.0, 0.00095156385120480187362, -0.0019586409502041789001),
        (5.0, 0.00010834442813607441735, -0.000247413890868462476),
        (6.0, 9.9476943602528895702e-6, -0.000024765200397034954754),
        (6.5, 2.7958823432049135855e-6, -7.2319314666017925598e-6),
        (7.0, 7.4921288639971670808e-7, -2.0081508947387919912e-6),
        (8.0, 4.6922076160992316256e-8, -1.3414392979067865743e-7),
        (10.0, 1.1047532552898685934e-10, -3.5206336767389236366e-10),
    ];

    #[test]
    fn origin_matches_imported_constants() {
        let (a, d) = airy_ai(0.0);
        assert_eq!(a, AI_ZERO);
        assert_eq!(d, AI_PRIME_ZERO);
    }

    #[test]
    fn matches_reference_table() {
        for &(x, ai, aip) in REFERENCE {
            let (a, d) = airy_ai(x);
            assert!(
                (a - ai).abs() <= 1e-12 * ai.abs(),
                "Ai({x}) = {a}, expected {ai}"
            );
            assert!(
                (d - aip).abs() <= 1e-12 * aip.abs(),
                "Ai'({x}) = {d}, expected {aip}"
            );
        }
    }

    #[test]
    fn seams_agree() {
        let (m, a) = (maclaurin(MACLAURIN_POS), asymptotic_positive(MACLAURIN_POS));
        assert!(
            (m.0 - a.0).abs() < 1e-10 && (m.1 - a.1).abs() < 1e-10,
            "{m:?} {a:?}"
        );
        assert!(((m.0 - a.0) / m.0).abs() < 1e-12, "{m:?} {a:?}");
        let (m, a) = (
            maclaurin(-MACLAURIN_NEG),
            asymptotic_negative(MACLAURIN_NEG),
        );
        assert!(
            (m.0 - a.0).abs() < 1e-12 && (m.1 - a.1).abs() < 1e-12,
            "{m:?} {a:?}"
        );
    }

    #[test]
    fn satisfies_airy_equation_by_finite_difference() {
        let h = 1e-3;
        for i in 0..60 {
            let x = -10.0 + 0.23 * i as f64;
            let second = (airy_ai(x + h).0 - 2.0 * airy_ai(x).0 + airy_ai(x - h).0) / (h * h);
            assert!((second - x * airy_ai(x).0).abs() < 1e-5, "x = {x}");
            let first = (airy_ai(x + h).0 - airy_ai(x - h).0) / (2.0 * h);
            assert!((first - airy_ai(x).1).abs() < 1e-5, "x = {x}");
        }
    }
}
