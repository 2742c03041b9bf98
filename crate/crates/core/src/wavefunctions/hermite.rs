//! Physicists' Hermite polynomials and the derivative structure of
//! `H_n(ξ) e^{-ξ²/2}`.

/// Dense polynomial, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| i as f64 * c)
                .collect(),
        )
    }

    fn shifted(&self) -> Poly {
        let mut v = vec![0.0];
        v.extend_from_slice(&self.0);
        Poly(v)
    }

    fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly(
            (0..n)
                .map(|i| {
                    self.0.get(i).copied().unwrap_or(0.0) - other.0.get(i).copied().unwrap_or(0.0)
                })
                .collect(),
        )
    }

    fn scaled(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }
}

/// `H_n` from `H_{n+1} = 2ξ H_n - 2n H_{n-1}`.
pub fn hermite(n: usize) -> Poly {
    let mut prev = Poly(vec![1.0]);
    if n == 0 {
        return prev;
    }
    let mut cur = Poly(vec![0.0, 2.0]);
    for k in 1..n {
        let next = cur.shifted().scaled(2.0).sub(&prev.scaled(2.0 * k as f64));
        prev = cur;
        cur = next;
    }
    cur
}

/// `P_k` with `d^k/dξ^k [H_n e^{-ξ²/2}] = P_k(ξ) e^{-ξ²/2}`.
///
/// `P_0 = H_n`, `P_{k+1} = P_k' - ξ P_k`.
pub fn gaussian_derivative_polys(n: usize, max_order: usize) -> Vec<Poly> {
    let mut out = Vec::with_capacity(max_order + 1);
    out.push(hermite(n));
    for k in 0..max_order {
        let p = &out[k];
        out.push(p.derivative().sub(&p.shifted()));
    }
    out
}
