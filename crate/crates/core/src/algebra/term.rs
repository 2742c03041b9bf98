use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::Zero;

use super::Rational;

/// One product `c · ħ^h · Π R^(a)/R · Π S^(b)`.
///
/// `r_factors` lists derivative orders `a ≥ 1` of `R`, each divided by `R`
/// (so `R/R = 1` never appears); `s_factors` lists orders `b ≥ 1` of `S`.
/// Both are kept sorted in descending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExpansionTerm {
    coefficient: Rational,
    hbar_power: u32,
    r_factors: Vec<u32>,
    s_factors: Vec<u32>,
}

impl ExpansionTerm {
    pub fn new(
        coefficient: Rational,
        hbar_power: u32,
        mut r_factors: Vec<u32>,
        mut s_factors: Vec<u32>,
    ) -> Self {
        assert!(hbar_power.is_multiple_of(2), "odd power of hbar");
        assert!(
            r_factors.iter().all(|&n| n >= 1),
            "R/R factor must be omitted"
        );
        assert!(
            s_factors.iter().all(|&n| n >= 1),
            "undifferentiated S factor"
        );
        r_factors.sort_unstable_by(|a, b| b.cmp(a));
        s_factors.sort_unstable_by(|a, b| b.cmp(a));
        Self {
            coefficient,
            hbar_power,
            r_factors,
            s_factors,
        }
    }

    pub fn coefficient(&self) -> &Rational {
        &self.coefficient
    }

    pub fn hbar_power(&self) -> u32 {
        self.hbar_power
    }

    pub fn r_factors(&self) -> &[u32] {
        &self.r_factors
    }

    pub fn s_factors(&self) -> &[u32] {
        &self.s_factors
    }

    pub fn is_classical(&self) -> bool {
        self.hbar_power == 0
    }

    pub fn divides_by_r(&self) -> bool {
        !self.r_factors.is_empty()
    }

    pub fn max_order(&self) -> u32 {
        self.r_factors
            .iter()
            .chain(&self.s_factors)
            .copied()
            .max()
            .unwrap_or(0)
    }

    fn key(&self) -> TermKey {
        TermKey {
            hbar_power: self.hbar_power,
            r_factors: self.r_factors.clone(),
            s_factors: self.s_factors.clone(),
        }
    }

    /// Derivative with respect to the axis variable.
    ///
    /// `(R^(a)/R)' = R^(a+1)/R - (R^(a)/R)(R'/R)` and `(S^(b))' = S^(b+1)`;
    /// the result is canonical.
    pub fn derivative(&self) -> Vec<ExpansionTerm> {
        let mut out = Vec::new();
        for (i, &a) in self.r_factors.iter().enumerate() {
            let mut raised = self.r_factors.clone();
            raised[i] = a + 1;
            out.push(ExpansionTerm::new(
                self.coefficient.clone(),
                self.hbar_power,
                raised,
                self.s_factors.clone(),
            ));
            let mut extra = self.r_factors.clone();
            extra.push(1);
            out.push(ExpansionTerm::new(
                -self.coefficient.clone(),
                self.hbar_power,
                extra,
                self.s_factors.clone(),
            ));
        }
        for (j, &b) in self.s_factors.iter().enumerate() {
            let mut raised = self.s_factors.clone();
            raised[j] = b + 1;
            out.push(ExpansionTerm::new(
                self.coefficient.clone(),
                self.hbar_power,
                self.r_factors.clone(),
                raised,
            ));
        }
        canonicalize(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct TermKey {
    hbar_power: u32,
    r_factors: Vec<u32>,
    s_factors: Vec<u32>,
}

// Higher ħ powers first, then higher R orders, then higher S orders.
impl Ord for TermKey {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .hbar_power
            .cmp(&self.hbar_power)
            .then_with(|| other.r_factors.cmp(&self.r_factors))
            .then_with(|| other.s_factors.cmp(&self.s_factors))
    }
}

impl PartialOrd for TermKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Merges terms with equal factor multisets, drops zeros and sorts.
pub fn canonicalize(terms: Vec<ExpansionTerm>) -> Vec<ExpansionTerm> {
    let mut merged: BTreeMap<TermKey, Rational> = BTreeMap::new();
    for t in terms {
        let key = t.key();
        *merged.entry(key).or_insert_with(Rational::zero) += t.coefficient;
    }
    merged
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| ExpansionTerm {
            coefficient: c,
            hbar_power: k.hbar_power,
            r_factors: k.r_factors,
            s_factors: k.s_factors,
        })
        .collect()
}

/// Derivative of a sum of terms.
pub fn differentiate_terms(terms: &[ExpansionTerm]) -> Vec<ExpansionTerm> {
    canonicalize(terms.iter().flat_map(ExpansionTerm::derivative).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn merges_and_drops_zero() {
        let terms = vec![
            ExpansionTerm::new(int(2), 2, vec![1], vec![1, 2]),
            ExpansionTerm::new(int(3), 2, vec![1], vec![2, 1]),
            ExpansionTerm::new(int(1), 0, vec![], vec![1]),
            ExpansionTerm::new(int(-1), 0, vec![], vec![1]),
        ];
        let c = canonicalize(terms);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].coefficient(), &int(5));
        assert_eq!(c[0].s_factors(), &[2, 1]);
    }

    #[test]
    fn ordering_puts_high_hbar_and_r_orders_first() {
        let c = canonicalize(vec![
            ExpansionTerm::new(int(1), 0, vec![], vec![1, 1]),
            ExpansionTerm::new(int(1), 2, vec![], vec![2, 2]),
            ExpansionTerm::new(int(1), 2, vec![2], vec![1, 1]),
            ExpansionTerm::new(int(1), 4, vec![4], vec![]),
        ]);
        let powers: Vec<u32> = c.iter().map(|t| t.hbar_power()).collect();
        assert_eq!(powers, vec![4, 2, 2, 0]);
        assert_eq!(c[1].r_factors(), &[2]);
    }

    #[test]
    fn derivative_of_quantum_potential_ratio() {
        // d/dx (R''/R) = R'''/R - (R''/R)(R'/R)
        let t = ExpansionTerm::new(int(1), 2, vec![2], vec![]);
        let d = t.derivative();
        assert_eq!(d.len(), 2);
        assert!(d.contains(&ExpansionTerm::new(int(1), 2, vec![3], vec![])));
        assert!(d.contains(&ExpansionTerm::new(int(-1), 2, vec![2, 1], vec![])));
    }

    #[test]
    fn derivative_of_phase_product() {
        // d/dx (S')^2 = 2 S' S''
        let t = ExpansionTerm::new(int(1), 0, vec![], vec![1, 1]);
        assert_eq!(
            t.derivative(),
            vec![ExpansionTerm::new(int(2), 0, vec![], vec![2, 1])]
        );
        assert!(ExpansionTerm::new(int(3), 0, vec![], vec![])
            .derivative()
            .is_empty());
    }
}
