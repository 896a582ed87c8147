//! Jacobi elliptic functions and Legendre elliptic integrals.
//!
//! Conventions: functions of the *modulus* `k` are written `f(u|k)` and the
//! second-kind integral takes the *parameter* `m = k²`,
//!
//! ```text
//! E(φ|m) = ∫₀^φ (1 - m sin²ν)^(1/2) dν,
//! ```
//!
//! which is the form needed with negative parameter `m = -H²/h²` by the
//! speed-limit bounds. `sn`, `cn`, `dn` use the arithmetic-geometric-mean
//! descending transformation; the integrals use Carlson symmetric forms
//! (`R_F`, `R_D`) with duplication, which are valid for `m ≤ 1` including
//! `m < 0`.

use std::f64::consts::{FRAC_PI_2, PI};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EllipticError {
    #[error("elliptic modulus k must lie in [0, 1], got {0}")]
    InvalidModulus(f64),
    #[error("elliptic parameter m must satisfy m <= 1, got {0}")]
    InvalidParameter(f64),
    #[error("complete integral of the first kind diverges at k = 1")]
    DivergentInput,
}

/// Real modulus `k ∈ [0, 1]` together with the parameter `m = k²`.
///
/// Keeping both makes the convention explicit at call sites that mix the
/// two notations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticModulus {
    k: f64,
    m: f64,
}

impl EllipticModulus {
    pub fn new(k: f64) -> Result<Self, EllipticError> {
        if !(0.0..=1.0).contains(&k) {
            return Err(EllipticError::InvalidModulus(k));
        }
        Ok(EllipticModulus { k, m: k * k })
    }

    /// The circular (trigonometric) limit `k = 0`.
    pub fn zero() -> Self {
        EllipticModulus { k: 0.0, m: 0.0 }
    }

    pub fn k(self) -> f64 {
        self.k
    }

    pub fn m(self) -> f64 {
        self.m
    }
}

/// Real parameter `m ≤ 1` of the second-kind integral; negative values allowed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticParameter {
    m: f64,
}

impl EllipticParameter {
    pub fn new(m: f64) -> Result<Self, EllipticError> {
        if !(m.is_finite() && m <= 1.0) {
            return Err(EllipticError::InvalidParameter(m));
        }
        Ok(EllipticParameter { m })
    }

    pub fn m(self) -> f64 {
        self.m
    }
}

impl From<EllipticModulus> for EllipticParameter {
    fn from(k: EllipticModulus) -> Self {
        EllipticParameter { m: k.m() }
    }
}

/// `(sn, cn, dn)(u|k)` by the descending AGM transformation.
///
/// Total on all real `u`; the identities `sn² + cn² = 1` and
/// `dn² + k² sn² = 1` hold to better than 1e-12.
pub fn jacobi_sncndn(u: f64, k: EllipticModulus) -> (f64, f64, f64) {
    let m = k.m();
    if m == 0.0 {
        return (u.sin(), u.cos(), 1.0);
    }
    if m == 1.0 {
        let c = 1.0 / u.cosh();
        return (u.tanh(), c, c);
    }
    if u == 0.0 {
        return (0.0, 1.0, 1.0);
    }

    // Reduce by the real period 4K to keep the amplitude recursion accurate.
    let quarter = complete_k(k).expect("k < 1 checked above");
    let period = 4.0 * quarter;
    let u = u - period * (u / period).round();

    // AGM chain: a_{n+1} = (a_n + b_n)/2, b_{n+1} = sqrt(a_n b_n),
    // c_{n+1} = (a_n - b_n)/2, starting from (1, k', k).
    let mut a = vec![1.0_f64];
    let mut c = vec![k.k()];
    let mut b = ((1.0 - k.k()) * (1.0 + k.k())).sqrt();
    while c[c.len() - 1].abs() > f64::EPSILON * a[a.len() - 1] {
        let an = a[a.len() - 1];
        a.push(0.5 * (an + b));
        c.push(0.5 * (an - b));
        b = (an * b).sqrt();
        if a.len() > 32 {
            break;
        }
    }
    let n = a.len() - 1;

    // Amplitude recursion: phi_N = 2^N a_N u, then
    // phi_{n-1} = (phi_n + asin((c_n/a_n) sin phi_n)) / 2.
    let mut phi = (1u64 << n) as f64 * a[n] * u;
    for i in (1..=n).rev() {
        let s = (c[i] / a[i] * phi.sin()).clamp(-1.0, 1.0);
        phi = 0.5 * (phi + s.asin());
    }
    let sn = phi.sin();
    let cn = phi.cos();
    // dn² = 1 - m sn² = cn² + (1 - m) sn², a sum of nonnegative terms, so
    // this form has no cancellation anywhere on the real line.
    let kp2 = (1.0 - k.k()) * (1.0 + k.k());
    let dn = (cn * cn + kp2 * sn * sn).sqrt();
    (sn, cn, dn)
}

/// Complete elliptic integral of the first kind `K(k)` by the AGM.
///
/// Diverges at `k = 1`, reported as [`EllipticError::DivergentInput`].
pub fn complete_k(k: EllipticModulus) -> Result<f64, EllipticError> {
    if k.k() == 1.0 {
        return Err(EllipticError::DivergentInput);
    }
    let mut a = 1.0_f64;
    let mut b = ((1.0 - k.k()) * (1.0 + k.k())).sqrt();
    for _ in 0..64 {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    Ok(PI / (2.0 * a))
}

/// Incomplete elliptic integral of the second kind `E(φ|m)`, any real `φ`,
/// parameter `m ≤ 1` (negative allowed).
///
/// Uses the periodic extension `E(φ + π|m) = E(φ|m) + 2E(m)` and Carlson
/// symmetric integrals on the principal range.
pub fn incomplete_e(phi: f64, m: EllipticParameter) -> f64 {
    let m = m.m();
    if m == 0.0 {
        return phi;
    }
    if phi == 0.0 {
        return 0.0;
    }
    let n = (phi / PI).round();
    let psi = phi - n * PI;
    let mut value = incomplete_e_principal(psi, m);
    if n != 0.0 {
        value += 2.0 * n * incomplete_e_principal(FRAC_PI_2, m);
    }
    value
}

/// Complete integral of the second kind, `E(m) = E(π/2|m)`.
pub fn complete_e(m: EllipticParameter) -> f64 {
    incomplete_e(FRAC_PI_2, m)
}

/// `E(ψ|m)` on the principal range `|ψ| ≤ π/2`.
fn incomplete_e_principal(psi: f64, m: f64) -> f64 {
    if psi == 0.0 {
        return 0.0;
    }
    if m == 1.0 {
        return psi.sin();
    }
    let s = psi.sin();
    let c = psi.cos();
    let s2 = s * s;
    let y = 1.0 - m * s2; // >= 1 - m >= 0 for m < 1
    s * carlson_rf(c * c, y, 1.0) - m / 3.0 * s * s2 * carlson_rd(c * c, y, 1.0)
}

/// Carlson symmetric integral `R_F(x, y, z)` by duplication.
///
/// Requires `x, y, z >= 0` with at most one of them zero.
fn carlson_rf(mut x: f64, mut y: f64, mut z: f64) -> f64 {
    const ERRTOL: f64 = 0.0025;
    let mut mu;
    let (mut dx, mut dy, mut dz);
    let mut iter = 0;
    loop {
        let sx = x.sqrt();
        let sy = y.sqrt();
        let sz = z.sqrt();
        let lam = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        mu = (x + y + z) / 3.0;
        dx = 1.0 - x / mu;
        dy = 1.0 - y / mu;
        dz = 1.0 - z / mu;
        iter += 1;
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL || iter > 500 {
            break;
        }
    }
    let e2 = dx * dy - dz * dz;
    let e3 = dx * dy * dz;
    (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / mu.sqrt()
}

/// Carlson symmetric integral `R_D(x, y, z)` by duplication.
///
/// Requires `x, y >= 0`, at most one zero, and `z > 0`.
fn carlson_rd(mut x: f64, mut y: f64, mut z: f64) -> f64 {
    const ERRTOL: f64 = 0.0015;
    let mut sum = 0.0;
    let mut fac = 1.0;
    let mut mu;
    let (mut dx, mut dy, mut dz);
    let mut iter = 0;
    loop {
        let sx = x.sqrt();
        let sy = y.sqrt();
        let sz = z.sqrt();
        let lam = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (z + lam));
        fac *= 0.25;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        mu = 0.2 * (x + y + 3.0 * z);
        dx = (mu - x) / mu;
        dy = (mu - y) / mu;
        dz = (mu - z) / mu;
        iter += 1;
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL || iter > 500 {
            break;
        }
    }
    let ea = dx * dy;
    let eb = dz * dz;
    let ec = ea - eb;
    let ed = ea - 6.0 * eb;
    let ee = ed + ec + ec;
    3.0 * sum
        + fac
            * (1.0 + ed * (-3.0 / 14.0 + 9.0 / 88.0 * ed - 4.5 / 26.0 * dz * ee)
                + dz * (ee / 6.0 + dz * (-9.0 / 22.0 * ec + dz * 3.0 / 26.0 * ea)))
            / (mu * mu.sqrt())
}
