use std::time::Instant;

use num_traits::{One, Zero};

use super::Check;
use crate::algebra::{
    canonicalize, evaluate_terms, expand, ExpansionTerm, OperatorKind, PolynomialOperator,
    Rational, Representation,
};
use crate::energetics::decompose_momentum_qho;
use crate::oracle::{operator_real_part, random_cases, OracleCase, PolynomialState};
use crate::wavefunctions::{linear_momentum_state, StateField, Units};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// The five quantum terms and one classical term of `x⁴` in momentum space.
pub fn reference_vq4_terms() -> (Vec<ExpansionTerm>, Vec<ExpansionTerm>) {
    let quantum = vec![
        ExpansionTerm::new(q(1, 1), 4, vec![4], vec![]),
        ExpansionTerm::new(q(-6, 1), 2, vec![2], vec![1, 1]),
        ExpansionTerm::new(q(-12, 1), 2, vec![1], vec![2, 1]),
        ExpansionTerm::new(q(-3, 1), 2, vec![], vec![2, 2]),
        ExpansionTerm::new(q(-4, 1), 2, vec![], vec![3, 1]),
    ];
    // (-S')⁴ = S'⁴
    let classical = vec![ExpansionTerm::new(q(1, 1), 0, vec![], vec![1, 1, 1, 1])];
    (canonicalize(quantum), canonicalize(classical))
}

pub(super) fn vq4() -> Vec<Check> {
    let start = Instant::now();
    let op = PolynomialOperator::parse("x^4").expect("literal parses");
    let exp = expand(&op, Representation::Momentum).expect("matching representation");
    let elapsed = start.elapsed().as_secs_f64();
    let (quantum, classical) = reference_vq4_terms();
    vec![
        Check::holds("vq4", "vq4.quantum_terms", exp.quantum_part == quantum)
            .with_detail(format!("{} quantum terms", exp.quantum_part.len())),
        Check::holds("vq4", "vq4.classical_term", exp.classical_part == classical),
        Check::at_most("vq4", "vq4.runtime_seconds", elapsed, 1.0),
    ]
}

pub(super) fn quadratic() -> Vec<Check> {
    let mut out = Vec::new();
    for (m_num, m_den) in [(1, 1), (2, 1), (1, 3), (5, 4)] {
        let m = q(m_num, m_den);
        let t = PolynomialOperator::monomial(
            OperatorKind::Kinetic,
            2,
            Rational::one() / (&m * q(2, 1)),
        );
        let exp =
            expand(&t, Representation::Configuration).expect("kinetic in configuration space");
        let want_q = vec![ExpansionTerm::new(
            -(Rational::one() / (&m * q(2, 1))),
            2,
            vec![2],
            vec![],
        )];
        let want_c = vec![ExpansionTerm::new(
            Rational::one() / (&m * q(2, 1)),
            0,
            vec![],
            vec![1, 1],
        )];
        out.push(Check::holds(
            "quadratic",
            format!("quadratic.kinetic_m={m}"),
            exp.quantum_part == want_q && exp.classical_part == want_c,
        ));
        for (w_num, w_den) in [(1, 1), (3, 2)] {
            let w = q(w_num, w_den);
            let a2 = &m * &w * &w / q(2, 1);
            let v = PolynomialOperator::monomial(OperatorKind::Potential, 2, a2.clone());
            let exp = expand(&v, Representation::Momentum).expect("potential in momentum space");
            let want_q = vec![ExpansionTerm::new(-a2.clone(), 2, vec![2], vec![])];
            let want_c = vec![ExpansionTerm::new(a2, 0, vec![], vec![1, 1])];
            out.push(Check::holds(
                "quadratic",
                format!("quadratic.harmonic_m={m}_omega={w}"),
                exp.quantum_part == want_q && exp.classical_part == want_c,
            ));
        }
    }
    out
}

pub(super) fn linear(units: Units) -> Vec<Check> {
    let mut out = Vec::new();
    for text in ["x", "x/2", "3*x - 7/2"] {
        let op = PolynomialOperator::parse(text).expect("literal parses");
        let exp = expand(&op, Representation::Momentum).expect("potential in momentum space");
        out.push(Check::holds(
            "linear",
            format!("linear.no_quantum_part[{text}]"),
            exp.quantum_part.is_empty(),
        ));
    }
    let state = linear_momentum_state(0.0, units);
    let profile = decompose_momentum_qho(&state, &state.default_grid()).expect("momentum axis");
    let largest = profile
        .q
        .iter()
        .chain(&profile.disp)
        .chain(&profile.loc)
        .fold(0.0f64, |m, v| m.max(v.abs()));
    out.push(Check::at_most(
        "linear",
        "linear.momentum_components_zero",
        largest,
        0.0,
    ));
    out
}

/// Engine-versus-oracle agreement for one case and `ħ`.
#[derive(Clone, Debug)]
pub struct OracleComparison {
    /// Largest `|engine - oracle| / |oracle|` in floating point.
    pub relative: f64,
    /// Engine evaluated in exact arithmetic equals the oracle at every point.
    pub exact: bool,
}

fn case_operator(case: &OracleCase) -> PolynomialOperator {
    let kind = match case.representation {
        Representation::Configuration => OperatorKind::Kinetic,
        Representation::Momentum => OperatorKind::Potential,
    };
    PolynomialOperator::monomial(kind, case.degree, Rational::one())
}

/// Compares the expansion with direct complex differentiation for one case.
pub fn oracle_case_errors(case: &OracleCase, hbar: &Rational) -> OracleComparison {
    let op = case_operator(case);
    let exp = expand(&op, case.representation).expect("kind matches representation");
    let terms: Vec<ExpansionTerm> = exp
        .quantum_part
        .iter()
        .chain(&exp.classical_part)
        .cloned()
        .collect();
    let hbar_f = crate::algebra::evaluate_scalar(hbar);
    let state = PolynomialState {
        r: case.r.clone(),
        s: case.s.clone(),
        axis: case.representation.into(),
        units: Units {
            hbar: hbar_f,
            ..Units::default()
        },
    };
    let mut relative = 0.0f64;
    let mut exact = true;
    for at in &case.points {
        let truth = operator_real_part(&op, &case.r, &case.s, case.representation, hbar, at);
        let r0 = case.r.eval(at);
        let engine_exact = terms.iter().fold(Rational::zero(), |acc, t| {
            acc + t.evaluate_with(
                hbar,
                |a| case.r.nth_derivative(a as usize).eval(at) / &r0,
                |b| case.s.nth_derivative(b as usize).eval(at),
            )
        });
        exact &= engine_exact == truth;
        let x = crate::algebra::evaluate_scalar(at);
        let engine = evaluate_terms(&terms, &state, x).expect("points avoid roots of R");
        let truth_f = crate::algebra::evaluate_scalar(&truth);
        let err = if truth_f == 0.0 {
            engine.abs()
        } else {
            ((engine - truth_f) / truth_f).abs()
        };
        relative = relative.max(err);
    }
    OracleComparison { relative, exact }
}

pub(super) fn oracle(seed: u64) -> Vec<Check> {
    let start = Instant::now();
    let cases = random_cases(seed, 24, 6);
    let mut worst = 0.0f64;
    let mut exact = true;
    for case in &cases {
        for hbar in [q(1, 1), q(1, 2), q(1, 3)] {
            let c = oracle_case_errors(case, &hbar);
            worst = worst.max(c.relative);
            exact &= c.exact;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    vec![
        Check::at_most("oracle", "oracle.relative_error", worst, 1e-12).with_detail(format!(
            "{} cases x 3 hbar values, seed {seed}",
            cases.len()
        )),
        Check::holds("oracle", "oracle.exact_rational_agreement", exact),
        Check::at_most("oracle", "oracle.runtime_seconds", elapsed, 30.0),
    ]
}
