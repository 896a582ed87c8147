//! Finite-difference derivatives of sampled curves (Fornberg weights).

/// Finite-difference weights for derivatives `0..=max_order` at `x0` on the
/// nodes `xs` (Fornberg's recursion). `weights[m][j]` multiplies `f(xs[j])`
/// in the m-th derivative.
pub fn fd_weights(x0: f64, xs: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    assert!(n > max_order, "need more nodes than the derivative order");
    let mut w = vec![vec![0.0_f64; max_order + 1]; n];
    w[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for m in (1..=mn).rev() {
                    w[i][m] = c1 * (m as f64 * w[i - 1][m - 1] - c5 * w[i - 1][m]) / c2;
                }
                w[i][0] = -c1 * c5 * w[i - 1][0] / c2;
            }
            for m in (1..=mn).rev() {
                w[j][m] = (c4 * w[j][m] - m as f64 * w[j][m - 1]) / c3;
            }
            w[j][0] = c4 * w[j][0] / c3;
        }
        c1 = c2;
    }
    // transpose to weights[m][node]
    (0..=max_order)
        .map(|m| (0..n).map(|j| w[j][m]).collect())
        .collect()
}

fn stencil_bounds(i: usize, len: usize, width: usize) -> (usize, usize) {
    let half = width / 2;
    let start = i.saturating_sub(half).min(len - width);
    (start, start + width)
}

/// Derivatives up to `max_order` of sampled 3-vectors at every sample.
///
/// Uses 7-point stencils where the grid allows (centered in the interior,
/// one-sided at the ends); `result[m - 1][i]` is the m-th derivative at
/// `times[i]`.
pub fn curve_derivatives(
    times: &[f64],
    points: &[[f64; 3]],
    max_order: usize,
) -> Vec<Vec<[f64; 3]>> {
    assert_eq!(times.len(), points.len());
    let n = times.len();
    let width = 7.min(n);
    assert!(width > max_order, "too few samples for derivative order");
    let mut out = vec![vec![[0.0; 3]; n]; max_order];
    for i in 0..n {
        let (lo, hi) = stencil_bounds(i, n, width);
        let w = fd_weights(times[i], &times[lo..hi], max_order);
        for m in 1..=max_order {
            let mut acc = [0.0; 3];
            for (j, wj) in w[m].iter().enumerate() {
                for (a, acc_a) in acc.iter_mut().enumerate() {
                    *acc_a += wj * points[lo + j][a];
                }
            }
            out[m - 1][i] = acc;
        }
    }
    out
}

/// First derivative of a sampled scalar at every sample (7-point stencils).
pub fn sample_derivative(times: &[f64], values: &[f64]) -> Vec<f64> {
    assert_eq!(times.len(), values.len());
    let n = times.len();
    let width = 7.min(n);
    assert!(width >= 2, "need at least two samples");
    let mut out = vec![0.0; n];
    for i in 0..n {
        let (lo, hi) = stencil_bounds(i, n, width);
        let w = fd_weights(times[i], &times[lo..hi], 1);
        out[i] = w[1]
            .iter()
            .enumerate()
            .map(|(j, wj)| wj * values[lo + j])
            .sum();
    }
    out
}
