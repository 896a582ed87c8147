//! Adaptive Gauss–Kronrod quadrature (G7/K15) and sample-based integration.

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

// 15-point Kronrod abscissae on [-1, 1] (positive half) and weights,
// with the embedded 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One G7/K15 panel on [a, b]: returns (value, error estimate, |f| integral).
fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, evals: &mut usize) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    *evals += 15;

    let mut res_gauss = f_center * WG[3];
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.abs();
    let mut fv = [0.0_f64; 14];
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[2 * j] - mean).abs() + (fv[2 * j + 1] - mean).abs());
    }
    let err = rescale_error((res_kronrod - res_gauss) * half, res_abs * half.abs(), res_asc * half.abs());
    (res_kronrod * half, err, res_abs * half.abs())
}

const MAX_EVALS: usize = 2_000_000;

fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
    evals: &mut usize,
) -> (f64, f64) {
    let (v, e, res_abs) = kronrod15(f, a, b, evals);
    // stop at the panel's machine-precision floor: no amount of splitting
    // improves on ~eps * integral of |f|
    let floor = 100.0 * f64::EPSILON * res_abs;
    if e <= tol.max(floor) || depth >= 48 || *evals >= MAX_EVALS {
        return (v, e);
    }
    let mid = 0.5 * (a + b);
    let (v1, e1) = adapt(f, a, mid, 0.5 * tol, depth + 1, evals);
    let (v2, e2) = adapt(f, mid, b, 0.5 * tol, depth + 1, evals);
    (v1 + v2, e1 + e2)
}

/// Adaptive integration of `f` over `[a, b]` to relative tolerance `rel_tol`
/// (with a floor for integrals near zero).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> QuadResult {
    if a == b {
        return QuadResult { value: 0.0, abs_error: 0.0, evaluations: 0 };
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut evals = 0;
    let (scale, _, _) = kronrod15(&f, lo, hi, &mut evals);
    let tol = rel_tol * scale.abs().max(1e-300);
    let (value, err) = adapt(&f, lo, hi, tol, 0, &mut evals);
    QuadResult { value: sign * value, abs_error: err, evaluations: evals }
}

/// Integral of sampled values over their grid.
///
/// Uses composite Simpson on uniform grids (with a 3/8 closing panel when the
/// interval count is odd) and the trapezoidal rule otherwise.
pub fn integrate_samples(times: &[f64], values: &[f64]) -> f64 {
    assert_eq!(times.len(), values.len());
    let n = times.len();
    if n < 2 {
        return 0.0;
    }
    if n == 2 {
        return 0.5 * (values[0] + values[1]) * (times[1] - times[0]);
    }
    let dt = times[1] - times[0];
    let uniform = times
        .windows(2)
        .all(|w| ((w[1] - w[0]) - dt).abs() <= 1e-9 * dt.abs().max(1e-300));
    if !uniform {
        return trapezoid(times, values);
    }
    let intervals = n - 1;
    let simpson_intervals = if intervals.is_multiple_of(2) { intervals } else { intervals - 3 };
    let mut total = 0.0;
    let mut i = 0;
    while i + 2 <= simpson_intervals {
        total += dt / 3.0 * (values[i] + 4.0 * values[i + 1] + values[i + 2]);
        i += 2;
    }
    if !intervals.is_multiple_of(2) {
        if intervals >= 3 {
            let j = n - 4;
            total += 3.0 * dt / 8.0
                * (values[j] + 3.0 * values[j + 1] + 3.0 * values[j + 2] + values[j + 3]);
        } else {
            // single leftover interval on a 2- or 3-point grid
            total += 0.5 * dt * (values[n - 2] + values[n - 1]);
        }
    }
    total
}

/// Plain trapezoidal rule on an arbitrary grid.
pub fn trapezoid(times: &[f64], values: &[f64]) -> f64 {
    assert_eq!(times.len(), values.len());
    times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (v[0] + v[1]) * (t[1] - t[0]))
        .sum()
}
