//! Differential geometry of sampled 3D curves: spherical angles,
//! precession/nutation rates, Frenet data (speed, curvature, torsion, arc
//! length), circulation of closed contours, and closure-period detection.

use std::f64::consts::PI;
use thiserror::Error;

use crate::dynamics::FieldParams;
use crate::elliptic::jacobi_sncndn;
use crate::numdiff::curve_derivatives;
use crate::spin::CoherenceVector;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("vector norm {0} too small for spherical angles")]
    DegenerateVector(f64),
    #[error("curve needs at least {needed} samples, got {got}")]
    CurveTooShort { needed: usize, got: usize },
    #[error("curve grid must be strictly increasing")]
    NonMonotonicGrid,
    #[error("times and points must have equal length")]
    LengthMismatch,
    #[error("contour endpoints differ by {0}, not closed")]
    NotClosed(f64),
    #[error("not applicable: {0}")]
    NotApplicable(String),
}

/// Polar angle `θ ∈ [0, π]` (north pole at θ = 0) and azimuth `φ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalAngles {
    pub theta: f64,
    pub phi: f64,
}

/// Spherical angles of a 3-vector; the reconstruction
/// `|r|(sinθcosφ, sinθsinφ, cosθ)` returns the input.
pub fn to_spherical(r: &[f64; 3]) -> Result<SphericalAngles, GeometryError> {
    let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if norm <= 1e-12 {
        return Err(GeometryError::DegenerateVector(norm));
    }
    let theta = (r[2] / norm).clamp(-1.0, 1.0).acos();
    let mut phi = r[1].atan2(r[0]);
    if phi < 0.0 {
        phi += 2.0 * PI;
    }
    if phi >= 2.0 * PI {
        phi = 0.0;
    }
    Ok(SphericalAngles { theta, phi })
}

impl CoherenceVector {
    /// Spherical angles of the coherence vector.
    pub fn angles(&self) -> Result<SphericalAngles, GeometryError> {
        to_spherical(&self.r)
    }
}

/// Nutation and precession rates `(θ', φ')` at resonance for the consistent
/// drive: `θ' = h sgn(sin ht)`, `φ' = ω dn(ωt|k)` (which is `ω` at `k = 0`).
///
/// `sgn(0) = 0` at the turning instants (a measure-zero set).
pub fn resonance_rates(t: f64, p: &FieldParams) -> Result<(f64, f64), GeometryError> {
    if !p.resonant() || !p.consistent() {
        return Err(GeometryError::NotApplicable(
            "rates require a consistent resonant drive".into(),
        ));
    }
    let h = p.transverse();
    let theta_rate = h * sgn((h * t).sin());
    let (_, _, dn) = jacobi_sncndn(p.omega * t, p.modulus);
    Ok((theta_rate, p.omega * dn))
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// A sampled spatial curve on a strictly increasing time grid.
#[derive(Debug, Clone)]
pub struct Curve3D {
    times: Vec<f64>,
    points: Vec<[f64; 3]>,
}

impl Curve3D {
    pub fn new(times: Vec<f64>, points: Vec<[f64; 3]>) -> Result<Curve3D, GeometryError> {
        if times.len() != points.len() {
            return Err(GeometryError::LengthMismatch);
        }
        if times.len() < 2 {
            return Err(GeometryError::CurveTooShort { needed: 2, got: times.len() });
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(GeometryError::NonMonotonicGrid);
        }
        Ok(Curve3D { times, points })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Speed, curvature, torsion and accumulated arc length along a curve.
///
/// Torsion is `None` where the osculating plane degenerates
/// (`|r'×r''|² < 1e-10 |r'|⁶`) instead of blowing up.
#[derive(Debug, Clone)]
pub struct FrenetData {
    pub speed: Vec<f64>,
    pub curvature: Vec<f64>,
    pub torsion: Vec<Option<f64>>,
    pub arclength: Vec<f64>,
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Frenet analysis by finite differences (7-point stencils in the interior,
/// one-sided at the ends).
pub fn frenet_analyze(c: &Curve3D) -> Result<FrenetData, GeometryError> {
    if c.len() < 5 {
        return Err(GeometryError::CurveTooShort { needed: 5, got: c.len() });
    }
    let derivs = curve_derivatives(c.times(), c.points(), 3);
    let n = c.len();
    let mut speed = Vec::with_capacity(n);
    let mut curvature = Vec::with_capacity(n);
    let mut torsion = Vec::with_capacity(n);
    for i in 0..n {
        let r1 = derivs[0][i];
        let r2 = derivs[1][i];
        let r3 = derivs[2][i];
        let v = norm(r1);
        speed.push(v);
        let c12 = cross(r1, r2);
        let c12n = norm(c12);
        if v < 1e-300 {
            curvature.push(0.0);
            torsion.push(None);
            continue;
        }
        curvature.push(c12n / (v * v * v));
        let denom = c12n * c12n;
        if denom < 1e-10 * v.powi(6) {
            torsion.push(None);
        } else {
            torsion.push(Some(dot(c12, r3) / denom));
        }
    }
    let mut arclength = Vec::with_capacity(n);
    let mut acc = 0.0;
    arclength.push(0.0);
    for i in 1..n {
        acc += 0.5 * (speed[i - 1] + speed[i]) * (c.times()[i] - c.times()[i - 1]);
        arclength.push(acc);
    }
    Ok(FrenetData { speed, curvature, torsion, arclength })
}

/// Circulation `∮ r'·dr = ∫ |r'|² dt` of a closed contour (trapezoidal).
///
/// The contour must close: `|r(T) - r(0)| ≤ 1e-8`.
pub fn circulation(c: &Curve3D) -> Result<f64, GeometryError> {
    let first = c.points()[0];
    let last = c.points()[c.len() - 1];
    let gap = norm([last[0] - first[0], last[1] - first[1], last[2] - first[2]]);
    if gap > 1e-8 {
        return Err(GeometryError::NotClosed(gap));
    }
    if c.len() < 5 {
        return Err(GeometryError::CurveTooShort { needed: 5, got: c.len() });
    }
    let derivs = curve_derivatives(c.times(), c.points(), 1);
    let speed_sq: Vec<f64> = derivs[0].iter().map(|r| dot(*r, *r)).collect();
    Ok(crate::quadrature::trapezoid(c.times(), &speed_sq))
}

/// Smallest closure period of the deviation curve at `k = 0` resonance:
/// `T_c = 2πm/h = πl/ω` with integers `m, l ≤ 10⁴`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosurePeriod {
    pub t_c: f64,
    pub m: u64,
    pub l: u64,
}

/// Detects `T_c` by continued-fraction rational approximation of `2ω/h`
/// (tolerance 1e-9); `None` when the ratio is not commensurate within the
/// integer cap, or outside the `k = 0` resonance regime.
pub fn closure_period(p: &FieldParams) -> Option<ClosurePeriod> {
    if !p.resonant() || !p.consistent() || p.modulus.k() != 0.0 {
        return None;
    }
    let h = p.transverse();
    if h <= 0.0 {
        return None;
    }
    let x = 2.0 * p.omega / h;
    let (l, m) = rational_approx(x, 10_000, 1e-9 * x.max(1.0))?;
    Some(ClosurePeriod { t_c: 2.0 * PI * m as f64 / h, m, l })
}

/// Best rational approximation `p/q ≈ x` by continued-fraction convergents,
/// accepting the first convergent within `tol`; `None` if the cap is hit.
fn rational_approx(x: f64, cap: u64, tol: f64) -> Option<(u64, u64)> {
    if !(x.is_finite() && x > 0.0) {
        return None;
    }
    let mut a = x.floor();
    let mut frac = x - a;
    let (mut p0, mut q0) = (1u64, 0u64);
    let (mut p1, mut q1) = (a as u64, 1u64);
    for _ in 0..64 {
        if q1 > 0 {
            let approx = p1 as f64 / q1 as f64;
            if (approx - x).abs() <= tol {
                return if p1 <= cap && q1 <= cap && p1 > 0 {
                    Some((p1, q1))
                } else {
                    None
                };
            }
        }
        if frac < 1e-18 {
            return None;
        }
        let r = 1.0 / frac;
        a = r.floor();
        frac = r - a;
        let p2 = (a as u64).checked_mul(p1)?.checked_add(p0)?;
        let q2 = (a as u64).checked_mul(q1)?.checked_add(q0)?;
        if p2 > cap || q2 > cap {
            return None;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    None
}
