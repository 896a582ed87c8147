//! Quantum-speed-limit machinery: energy variance, hodograph length, the
//! speed-normalization factor, pole-to-pole distance with its universal-π
//! limit, Mandelstam–Tamm averaged bounds, and the τ_QSL / τ1_QSL bound
//! formulas with their strong-longitudinal-field limits.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

use crate::dynamics::{hamiltonian_at, Trajectory};
use crate::elliptic::{complete_e, incomplete_e, jacobi_sncndn, EllipticModulus, EllipticParameter};
use crate::matrix::{real_trace_product, CMatrix};
use crate::numdiff::curve_derivatives;
use crate::quadrature::{integrate, integrate_samples};
use crate::spin::{CoherenceVector, QuantumState, Spin};

#[derive(Debug, Error, PartialEq)]
pub enum QslError {
    #[error(transparent)]
    Spin(#[from] crate::spin::SpinError),
    #[error("initial state is not pure (purity {0})")]
    NotPureState(f64),
    #[error("trajectory covers [{covered_from}, {covered_to}] but [{0}, {1}] is required", .required.0, .required.1)]
    InsufficientCoverage {
        covered_from: f64,
        covered_to: f64,
        required: (f64, f64),
    },
    #[error("not applicable: {0}")]
    NotApplicable(String),
}

/// `Var(Ĥ) = Tr(ρĤ²) - (Tr ρĤ)²`, clamped at zero against roundoff.
pub fn energy_variance(state: &QuantumState, hmat: &CMatrix) -> Result<f64, QslError> {
    if state.dim() != hmat.nrows() || hmat.nrows() != hmat.ncols() {
        return Err(crate::spin::SpinError::DimensionMismatch {
            expected: state.dim(),
            found: hmat.nrows(),
        }
        .into());
    }
    // mean-centered form: exact (no cancellation) at eigenstates
    let mean = real_trace_product(state.rho(), hmat);
    let centered =
        hmat - CMatrix::identity(hmat.nrows(), hmat.ncols()) * num_complex::Complex64::new(mean, 0.0);
    let rho_h = state.rho() * &centered;
    let var = real_trace_product(&rho_h, &centered);
    debug_assert!(var > -1e-12, "variance {var} below roundoff floor");
    Ok(var.max(0.0))
}

/// Energy variance and standard deviation sampled along a trajectory, with
/// the time-averaged standard deviation over the whole grid.
#[derive(Debug, Clone)]
pub struct EnergyStats {
    pub times: Vec<f64>,
    pub variance: Vec<f64>,
    pub std_dev: Vec<f64>,
    pub mean_std_dev: f64,
}

pub fn energy_stats(traj: &Trajectory) -> EnergyStats {
    let times = traj.times().to_vec();
    let variance: Vec<f64> = times
        .iter()
        .zip(traj.states())
        .map(|(&t, s)| {
            let h = hamiltonian_at(t, traj.params(), traj.system());
            energy_variance(s, &h).expect("dimensions match by construction")
        })
        .collect();
    let std_dev: Vec<f64> = variance.iter().map(|v| v.sqrt()).collect();
    let span = times.last().unwrap() - times[0];
    let mean_std_dev = if span > 0.0 {
        integrate_samples(&times, &std_dev) / span
    } else {
        std_dev[0]
    };
    EnergyStats { times, variance, std_dev, mean_std_dev }
}

/// Speed normalization `p = 3/(2(S+1))`; equals 1 only for spin 1/2.
pub fn p_factor(spin: Spin) -> f64 {
    1.5 / (spin.value() + 1.0)
}

/// Geodesic-model normalization `p = 3 r_b²/(4 S(S+1))`.
pub fn geodesic_p(spin: Spin, r_b: f64) -> f64 {
    assert!(r_b > 0.0, "geodesic radius must be positive");
    3.0 * r_b * r_b / (4.0 * spin.casimir())
}

/// Hodograph length two ways: `s = ∫ 2√p ΔE dt` from the energy variance
/// and `l = ∫ r_B √(Σ p_i'²) dt` from the unit polarization vector.
///
/// For a pure state under unitary evolution on an adequate grid the two
/// agree to ~1e-6 relative.
pub fn hodograph_length(traj: &Trajectory, p_factor: f64) -> Result<(f64, f64), QslError> {
    let purity = traj.states()[0].purity();
    if purity < 1.0 - 1e-10 {
        return Err(QslError::NotPureState(purity));
    }
    let stats = energy_stats(traj);
    let weighted: Vec<f64> = stats
        .std_dev
        .iter()
        .map(|de| 2.0 * p_factor.sqrt() * de)
        .collect();
    let s = integrate_samples(&stats.times, &weighted);

    let r_b = traj.spin().bloch_radius();
    let points = traj.coherence_points();
    let unit: Vec<[f64; 3]> = points
        .iter()
        .map(|r| {
            let n = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
            if n < 1e-300 {
                [0.0, 0.0, 0.0]
            } else {
                [r[0] / n, r[1] / n, r[2] / n]
            }
        })
        .collect();
    let du = curve_derivatives(traj.times(), &unit, 1);
    let speeds: Vec<f64> = du[0]
        .iter()
        .map(|d| r_b * (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt())
        .collect();
    let l = integrate_samples(traj.times(), &speeds);
    Ok((s, l))
}

/// Pole-to-pole distance on the Bloch sphere during `τ = π/h` at resonance:
/// `s = r_B ∫₀^{π/h} √(h² + H² sin²(ht) dn²(Ht|k)) dt ≥ π r_B`.
///
/// Valid where the resonance closed form holds: spin 1/2 or 1, or `k = 0`.
pub fn pole_distance(
    h: f64,
    hz: f64,
    k: EllipticModulus,
    spin: Spin,
) -> Result<f64, QslError> {
    assert!(h > 0.0 && hz >= 0.0, "need h > 0 and H >= 0");
    if k.k() != 0.0 && spin.value() > 1.0 {
        return Err(QslError::NotApplicable(
            "for k != 0 the pole distance is defined only for spin 1/2 and 1".into(),
        ));
    }
    let tau = PI / h;
    let integrand = |t: f64| {
        let (_, _, dn) = jacobi_sncndn(hz * t, k);
        let s = (h * t).sin();
        (h * h + hz * hz * s * s * dn * dn).sqrt()
    };
    let r = integrate(integrand, 0.0, tau, 1e-11);
    Ok(spin.bloch_radius() * r.value)
}

/// Lower bound on the pole-to-pole time: `τ_QSL = π²√S / (√2 h E(-H²/h²))`.
pub fn tau_qsl(spin: Spin, h: f64, hz: f64) -> f64 {
    assert!(h > 0.0 && hz >= 0.0, "need h > 0 and H >= 0");
    let m = EllipticParameter::new(-(hz / h) * (hz / h)).expect("m <= 0 is valid");
    PI * PI * spin.value().sqrt() / (2.0_f64.sqrt() * h * complete_e(m))
}

/// The `h → 0` limit of [`tau_qsl`]: `π²√S / (√2 H)`.
pub fn tau_qsl_limit(spin: Spin, hz: f64) -> f64 {
    assert!(hz > 0.0, "need H > 0");
    PI * PI * spin.value().sqrt() / (2.0_f64.sqrt() * hz)
}

/// Lower bound on the first-orthogonal-state time `τ₁ = π/(2Sh)`:
/// `τ1_QSL = π² / (2h (2S)^{3/2} E(π/(2S) | -H²/h²))`.
pub fn tau1_qsl(spin: Spin, h: f64, hz: f64) -> f64 {
    assert!(h > 0.0 && hz >= 0.0, "need h > 0 and H >= 0");
    let two_s = 2.0 * spin.value();
    let m = EllipticParameter::new(-(hz / h) * (hz / h)).expect("m <= 0 is valid");
    PI * PI / (2.0 * h * two_s.powf(1.5) * incomplete_e(PI / two_s, m))
}

/// Integer closest to `x`, ties to even (pinned so that the spin-1 ratio
/// below reproduces 2).
fn round_nearest(x: f64) -> f64 {
    x.round_ties_even()
}

/// The `h → 0` closed form quoted for [`tau1_qsl`]:
/// `π² / (H (2S)^{3/2} ((-1)^{r[1/(2S)]} (1 - |cos(π/(2S))|) + 2 r[1/(2S)]))`
/// with `r[x]` the nearest integer.
pub fn tau1_qsl_limit(spin: Spin, hz: f64) -> f64 {
    assert!(hz > 0.0, "need H > 0");
    let two_s = 2.0 * spin.value();
    let r = round_nearest(1.0 / two_s);
    let sign = if (r as i64) % 2 == 0 { 1.0 } else { -1.0 };
    let g = sign * (1.0 - (PI / two_s).cos().abs()) + 2.0 * r;
    PI * PI / (hz * two_s.powf(1.5) * g)
}

/// Limit ratio `lim_{h→0} τ_QSL / τ1_QSL` (independent of `H`).
pub fn qsl_ratio_limit(spin: Spin) -> f64 {
    tau_qsl_limit(spin, 1.0) / tau1_qsl_limit(spin, 1.0)
}

/// Which averaging horizon a Mandelstam–Tamm check covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtHorizon {
    /// Pole-to-pole horizon `τ = π/h`; fills both margins.
    Full,
    /// First-orthogonal-state horizon `τ₁ = π/(2Sh)` only.
    FirstOrthogonal,
}

/// Bound values and inequality margins for one trajectory.
///
/// `mt_margin = ΔE_τ·τ - √(S/2)π` and `mt1_margin = ΔE_τ1·τ₁ - π/(2√(2S))`
/// are nonnegative (up to 1e-9 quadrature slack) whenever the resonance
/// closed form was valid for the generating dynamics (`eq5_valid`).
///
/// The orderings `tau >= tau_qsl` and `tau1 >= tau1_qsl` are guaranteed
/// unconditionally only for S = 1/2 (resp. S <= 2); for larger spins the
/// quoted bound formulas overshoot at moderate `H/h` and order correctly
/// once `E(-H²/h²) >= π√(S/2)` (strong longitudinal field).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QslReport {
    pub spin: f64,
    pub h: f64,
    pub hz: f64,
    pub tau: f64,
    pub tau1: f64,
    pub tau_qsl: f64,
    pub tau1_qsl: f64,
    pub avg_std_dev_tau: Option<f64>,
    pub avg_std_dev_tau1: f64,
    pub mt_margin: Option<f64>,
    pub mt1_margin: f64,
    pub p_factor: f64,
    pub eq5_valid: bool,
}

/// Integral of sampled values over `[times[0], t_stop]`, interpolating the
/// final fragment linearly.
fn integrate_to(times: &[f64], values: &[f64], t_stop: f64) -> Option<f64> {
    let last = *times.last()?;
    if t_stop > last + 1e-9 * t_stop.abs().max(1.0) {
        return None;
    }
    if t_stop <= times[0] {
        return Some(0.0);
    }
    let mut i_end = times.partition_point(|&t| t <= t_stop);
    i_end -= 1; // last index with times[i] <= t_stop
    let mut total = integrate_samples(&times[..=i_end], &values[..=i_end]);
    if times[i_end] < t_stop && i_end + 1 < times.len() {
        let (t0, t1) = (times[i_end], times[i_end + 1]);
        let w = (t_stop - t0) / (t1 - t0);
        let v_stop = values[i_end] * (1.0 - w) + values[i_end + 1] * w;
        total += 0.5 * (values[i_end] + v_stop) * (t_stop - t0);
    }
    Some(total)
}

/// Computes the time-averaged energy standard deviation over the requested
/// horizon(s) and fills a [`QslReport`] with the Mandelstam–Tamm margins.
pub fn mt_check(traj: &Trajectory, horizon: MtHorizon) -> Result<QslReport, QslError> {
    let p = traj.params();
    if !p.consistent() || !p.resonant() {
        return Err(QslError::NotApplicable(
            "Mandelstam-Tamm horizons are defined for consistent resonant drives".into(),
        ));
    }
    if p.transverse() <= 0.0 {
        return Err(QslError::NotApplicable(
            "horizons pi/h and pi/(2Sh) are undefined for zero transverse amplitude".into(),
        ));
    }
    let purity = traj.states()[0].purity();
    if purity < 1.0 - 1e-10 {
        return Err(QslError::NotPureState(purity));
    }
    let spin = traj.spin();
    let s = spin.value();
    let h = p.transverse();
    let tau = PI / h;
    let tau1 = tau / (2.0 * s);
    let required_to = match horizon {
        MtHorizon::Full => tau,
        MtHorizon::FirstOrthogonal => tau1,
    };
    let t0 = traj.times()[0];
    let t_last = *traj.times().last().unwrap();
    if t0 > 1e-12 || t_last < required_to - 1e-9 * required_to.max(1.0) {
        return Err(QslError::InsufficientCoverage {
            covered_from: t0,
            covered_to: t_last,
            required: (0.0, required_to),
        });
    }

    let stats = energy_stats(traj);
    let int_tau1 = integrate_to(&stats.times, &stats.std_dev, tau1)
        .expect("coverage checked above");
    let avg_tau1 = int_tau1 / tau1;
    let mt1_margin = avg_tau1 * tau1 - PI / (2.0 * (2.0 * s).sqrt());

    let (avg_tau, mt_margin) = match integrate_to(&stats.times, &stats.std_dev, tau) {
        Some(int_tau) => {
            let avg = int_tau / tau;
            (Some(avg), Some(avg * tau - (s / 2.0).sqrt() * PI))
        }
        None => (None, None),
    };

    let eq5_valid = p.modulus.k() == 0.0 || s <= 1.0;
    Ok(QslReport {
        spin: s,
        h,
        hz: p.hz,
        tau,
        tau1,
        tau_qsl: tau_qsl(spin, h, p.hz),
        tau1_qsl: tau1_qsl(spin, h, p.hz),
        avg_std_dev_tau: avg_tau,
        avg_std_dev_tau1: avg_tau1,
        mt_margin,
        mt1_margin,
        p_factor: p_factor(spin),
        eq5_valid,
    })
}

/// Equatorial geodesic model: `R(t) = r_b (cos ηt, sin ηt, 0)`, which covers
/// the half circle of length `π r_b` during `π/η`.
pub fn geodesic_model(eta: f64, r_b: f64, t: f64) -> CoherenceVector {
    assert!(eta > 0.0, "precession rate must be positive");
    let (s, c) = (eta * t).sin_cos();
    CoherenceVector {
        r: [r_b * c, r_b * s, 0.0],
        bloch_radius: r_b,
    }
}
