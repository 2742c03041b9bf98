//! Finite-difference weights on arbitrary node sets (Fornberg's recursion).

/// `weights[k][j]`: contribution of `f(nodes[j])` to the `k`-th derivative at `z`,
/// for `k = 0..=max_order`.
pub fn fornberg_weights(z: f64, nodes: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; max_order + 1];
    if n == 0 {
        return c;
    }
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Integer-offset central weights for derivative `order` on `-half..=half`
/// (unit spacing).
pub fn central_weights(order: usize, half: usize) -> Vec<f64> {
    let nodes: Vec<f64> = (-(half as i64)..=half as i64).map(|j| j as f64).collect();
    fornberg_weights(0.0, &nodes, order).swap_remove(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_central_stencils() {
        let w = central_weights(1, 1);
        assert_eq!(w, vec![-0.5, 0.0, 0.5]);
        let w = central_weights(2, 2);
        let expected = [-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn one_sided_weights_differentiate_polynomials_exactly() {
        let nodes = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5];
        let w = fornberg_weights(0.0, &nodes, 3);
        let f = |x: f64| 2.0 - x + 3.0 * x * x * x;
        let d: Vec<f64> = (0..4)
            .map(|k| nodes.iter().zip(&w[k]).map(|(x, c)| c * f(*x)).sum())
            .collect();
        assert!((d[0] - 2.0).abs() < 1e-12);
        assert!((d[1] + 1.0).abs() < 1e-10);
        assert!(d[2].abs() < 1e-8);
        assert!((d[3] - 18.0).abs() < 1e-7);
    }
}
