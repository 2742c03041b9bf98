use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use super::eval::Part;
use super::term::{canonicalize, ExpansionTerm};
use super::{PolynomialOperator, QhjExpansion, Rational, Representation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExpandError {
    /// `T(p̂)` is multiplicative in the momentum representation and `V(x̂)` in
    /// the configuration representation; neither has an ħ-expansion there.
    #[error("operator in `{variable}` is multiplicative in the {representation} representation")]
    MultiplicativeOperator {
        variable: char,
        representation: Representation,
    },
}

/// One contributing `(k, m)` combination.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct LatticePoint {
    pub k: u32,
    pub m: u32,
    pub hbar_power: u32,
    pub part: Part,
}

/// All `(k, m)` pairs with `k ≤ m`, `k + m` even and `a_m ≠ 0`, ordered by
/// `m` then `k`.
pub fn km_lattice(op: &PolynomialOperator) -> Vec<LatticePoint> {
    let mut out = Vec::new();
    for (m, a) in op.coefficients().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let m = m as u32;
        for k in (m % 2..=m).step_by(2) {
            out.push(LatticePoint {
                k,
                m,
                hbar_power: m - k,
                part: if k == m {
                    Part::Classical
                } else {
                    Part::Quantum
                },
            });
        }
    }
    out
}

/// Splits `Re(Oψ/ψ)` into classical and quantum terms.
pub fn expand(op: &PolynomialOperator, rep: Representation) -> Result<QhjExpansion, ExpandError> {
    if op.kind().differential_representation() != rep {
        return Err(ExpandError::MultiplicativeOperator {
            variable: op.kind().variable(),
            representation: rep,
        });
    }
    let mut quantum = Vec::new();
    let mut classical = Vec::new();
    for point in km_lattice(op) {
        let a_m = op.coefficient(point.m as usize);
        let terms = bracket_terms(&a_m, point.k, point.m, rep);
        match point.part {
            Part::Classical => classical.extend(terms),
            _ => quantum.extend(terms),
        }
    }
    Ok(QhjExpansion {
        representation: rep,
        source: op.clone(),
        quantum_part: canonicalize(quantum),
        classical_part: canonicalize(classical),
    })
}

/// Terms of `a_m (-1)^m (-1)^((k+m)/2) ħ^(m-k) / k! · [∂^m(R S^k)]_{S:0} / R`
/// (times `(-1)^m` in the momentum representation).
fn bracket_terms(a_m: &Rational, k: u32, m: u32, rep: Representation) -> Vec<ExpansionTerm> {
    let mut sign_exponent = (k + m) / 2 + m;
    if rep == Representation::Momentum {
        sign_exponent += m;
    }
    let prefactor = if sign_exponent.is_multiple_of(2) {
        a_m.clone()
    } else {
        -a_m.clone()
    };
    let m_factorial = factorial(m);
    let mut out = Vec::new();
    for r_order in 0..=(m - k) {
        let mut parts = Vec::new();
        partitions(m - r_order, k, m - r_order, &mut Vec::new(), &mut parts);
        for s_orders in parts {
            // Ordered compositions of the S slots collapse into k!/Π mult! copies,
            // which cancels the 1/k! prefactor up to Π mult!.
            let mut denominator = factorial(r_order);
            for &n in &s_orders {
                denominator *= factorial(n);
            }
            denominator *= multiplicity_factorials(&s_orders);
            let weight = Rational::new(m_factorial.clone(), denominator);
            let r_factors = if r_order == 0 {
                Vec::new()
            } else {
                vec![r_order]
            };
            out.push(ExpansionTerm::new(
                &prefactor * weight,
                m - k,
                r_factors,
                s_orders,
            ));
        }
    }
    out
}

/// Non-increasing partitions of `total` into exactly `slots` parts, each ≥ 1
/// and ≤ `cap`.
fn partitions(total: u32, slots: u32, cap: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if slots == 0 {
        if total == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    if total < slots {
        return;
    }
    // the remaining slots - 1 parts need at least one each
    let hi = cap.min(total - (slots - 1));
    let lo = total.div_ceil(slots);
    for part in (lo..=hi).rev() {
        prefix.push(part);
        partitions(total - part, slots - 1, part, prefix, out);
        prefix.pop();
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

fn multiplicity_factorials(sorted: &[u32]) -> BigInt {
    let mut product = BigInt::one();
    let mut run = 0u32;
    for (i, v) in sorted.iter().enumerate() {
        run += 1;
        if i + 1 == sorted.len() || sorted[i + 1] != *v {
            product *= factorial(run);
            run = 0;
        }
    }
    product
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::OperatorKind;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn term(c: Rational, h: u32, rf: &[u32], sf: &[u32]) -> ExpansionTerm {
        ExpansionTerm::new(c, h, rf.to_vec(), sf.to_vec())
    }

    #[test]
    fn partitions_enumerate_without_zero_slots() {
        let mut out = Vec::new();
        partitions(4, 2, 4, &mut Vec::new(), &mut out);
        assert_eq!(out, vec![vec![3, 1], vec![2, 2]]);
        let mut none = Vec::new();
        partitions(1, 2, 1, &mut Vec::new(), &mut none);
        assert!(none.is_empty());
        let mut empty = Vec::new();
        partitions(0, 0, 0, &mut Vec::new(), &mut empty);
        assert_eq!(empty, vec![Vec::<u32>::new()]);
    }

    #[test]
    fn kinetic_quadratic_configuration() {
        let t = PolynomialOperator::parse("p^2/2").unwrap();
        let e = expand(&t, Representation::Configuration).unwrap();
        assert_eq!(e.quantum_part, vec![term(r(-1, 2), 2, &[2], &[])]);
        assert_eq!(e.classical_part, vec![term(r(1, 2), 0, &[], &[1, 1])]);
    }

    #[test]
    fn cubic_momentum_operator() {
        // (i ħ d/dp)^3 on R e^{iS/ħ}; real part by hand:
        // -S'^3 + 3ħ² S' R''/R + 3ħ² R' S''/R + ħ² S'''
        let v = PolynomialOperator::parse("x^3").unwrap();
        let e = expand(&v, Representation::Momentum).unwrap();
        assert_eq!(e.classical_part, vec![term(r(-1, 1), 0, &[], &[1, 1, 1])]);
        let mut expected = vec![
            term(r(3, 1), 2, &[2], &[1]),
            term(r(3, 1), 2, &[1], &[2]),
            term(r(1, 1), 2, &[], &[3]),
        ];
        expected = canonicalize(expected);
        assert_eq!(e.quantum_part, expected);
    }

    #[test]
    fn constant_operator_is_purely_classical() {
        let op = PolynomialOperator::new(OperatorKind::Kinetic, vec![r(7, 3)]);
        let e = expand(&op, Representation::Configuration).unwrap();
        assert!(e.quantum_part.is_empty());
        assert_eq!(e.classical_part, vec![term(r(7, 3), 0, &[], &[])]);
    }

    #[test]
    fn mismatched_representation_is_rejected() {
        let v = PolynomialOperator::parse("x^2").unwrap();
        assert!(matches!(
            expand(&v, Representation::Configuration),
            Err(ExpandError::MultiplicativeOperator { variable: 'x', .. })
        ));
    }

    #[test]
    fn lattice_examples() {
        let deg = |d: usize| PolynomialOperator::monomial(OperatorKind::Potential, d, r(1, 1));
        let pairs = |d| {
            km_lattice(&deg(d))
                .iter()
                .map(|p| (p.k, p.m, p.hbar_power))
                .collect::<Vec<_>>()
        };
        assert_eq!(pairs(2), vec![(0, 2, 2), (2, 2, 0)]);
        assert_eq!(pairs(4), vec![(0, 4, 4), (2, 4, 2), (4, 4, 0)]);
        assert_eq!(pairs(1), vec![(1, 1, 0)]);
        let parts: Vec<Part> = km_lattice(&deg(2)).iter().map(|p| p.part).collect();
        assert_eq!(parts, vec![Part::Quantum, Part::Classical]);
    }

    #[test]
    fn quantum_k_count_is_half_degree() {
        for m in 0..10usize {
            let op = PolynomialOperator::monomial(OperatorKind::Potential, m, r(1, 1));
            let quantum = km_lattice(&op)
                .iter()
                .filter(|p| p.part == Part::Quantum)
                .count();
            assert_eq!(quantum, m / 2, "degree {m}");
        }
    }
}
