//! Finite-difference weights on arbitrary nodes (Fornberg's recursion).

/// Weights `w_j` with `f^{(m)}(x0) ≈ Σ w_j f(nodes[j])`, for every derivative
/// order `0..=m`; row `k` holds the weights of the `k`-th derivative.
pub fn fornberg_weights(x0: f64, nodes: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
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

/// First-derivative weights on the integer offsets `offsets`, evaluated at 0
/// and scaled for unit spacing.
pub fn first_derivative_on_offsets(offsets: &[i64]) -> Vec<f64> {
    let nodes: Vec<f64> = offsets.iter().map(|&o| o as f64).collect();
    fornberg_weights(0.0, &nodes, 1).swap_remove(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_three_point() {
        let w = first_derivative_on_offsets(&[-1, 0, 1]);
        assert!((w[0] + 0.5).abs() < 1e-15 && w[1].abs() < 1e-15 && (w[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn seven_point_stencils_are_sixth_order() {
        for shift in 0..=6i64 {
            let offsets: Vec<i64> = (0..7).map(|j| j - shift).collect();
            let w = first_derivative_on_offsets(&offsets);
            // exact on polynomials up to degree 6
            for deg in 0..=6i32 {
                let approx: f64 = offsets.iter().zip(&w).map(|(&o, &wj)| wj * (o as f64).powi(deg)).sum();
                let exact = if deg == 1 { 1.0 } else { 0.0 };
                assert!((approx - exact).abs() < 1e-9, "shift {shift} deg {deg}: {approx}");
            }
        }
    }

    #[test]
    fn second_derivative_row() {
        let w = fornberg_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        assert!((w[2][0] - 1.0).abs() < 1e-15 && (w[2][1] + 2.0).abs() < 1e-15);
    }
}
