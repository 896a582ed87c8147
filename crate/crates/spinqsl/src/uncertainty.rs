//! Spin covariance matrices, standard-deviation dynamics and their
//! conservation law, harmonic/geometric/arithmetic product bounds, and the
//! mutual/conditional uncertainty measures.

use nalgebra::Matrix3;
use thiserror::Error;

use crate::dynamics::{FieldParams, Trajectory};
use crate::geometry::Curve3D;
use crate::matrix::{real_trace_product, CMatrix};
use crate::spin::{QuantumState, Spin, SpinSystem};

#[derive(Debug, Error, PartialEq)]
pub enum UncertaintyError {
    #[error(transparent)]
    Spin(#[from] crate::spin::SpinError),
}

/// Symmetrized covariance matrix of the spin components with derived data.
///
/// `eigenvalues` are sorted descending; along resonance trajectories of the
/// highest-weight state they are `(S/2, S/2, 0)`.
#[derive(Debug, Clone)]
pub struct CovarianceReport {
    pub cov: [[f64; 3]; 3],
    pub eigenvalues: [f64; 3],
    pub std_devs: [f64; 3],
    pub sum_of_variances: f64,
}

fn clamped_sqrt(v: f64) -> f64 {
    debug_assert!(v > -1e-12, "variance {v} below roundoff floor");
    v.max(0.0).sqrt()
}

/// `Cov(S_i, S_k) = ½ Tr[ρ(C_i C_k + C_k C_i)] - Tr[ρ C_i] Tr[ρ C_k]`.
pub fn covariance(
    state: &QuantumState,
    sys: &SpinSystem,
) -> Result<CovarianceReport, UncertaintyError> {
    if state.dim() != sys.dim() {
        return Err(crate::spin::SpinError::DimensionMismatch {
            expected: sys.dim(),
            found: state.dim(),
        }
        .into());
    }
    // mean-centered operators avoid cancellation near eigenstates, where
    // the raw <C_i C_k> - <C_i><C_k> form loses half the digits
    let centered: Vec<CMatrix> = (0..3)
        .map(|i| {
            let mean = state.expectation(sys.c(i));
            sys.c(i) - CMatrix::identity(sys.dim(), sys.dim()) * num_complex::Complex64::new(mean, 0.0)
        })
        .collect();
    let mut cov = [[0.0; 3]; 3];
    for i in 0..3 {
        let rho_ai = state.rho() * &centered[i];
        for k in i..3 {
            // Re Tr(rho A_i A_k) equals the symmetrized half-anticommutator
            // covariance for Hermitian rho, A_i, A_k.
            let value = real_trace_product(&rho_ai, &centered[k]);
            cov[i][k] = value;
            cov[k][i] = value;
        }
    }
    let m = Matrix3::from_fn(|i, j| cov[i][j]);
    let mut eig: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let std_devs = [
        clamped_sqrt(cov[0][0]),
        clamped_sqrt(cov[1][1]),
        clamped_sqrt(cov[2][2]),
    ];
    let sum_of_variances = cov[0][0] + cov[1][1] + cov[2][2];
    Ok(CovarianceReport {
        cov,
        eigenvalues: [eig[0], eig[1], eig[2]],
        std_devs,
        sum_of_variances,
    })
}

/// Whether the variance-sum conservation `Σ(ΔS_i)² = S` is asserted for
/// these parameters: resonance in the consistent drive, at any spin for
/// `k = 0` and for spin 1/2 and 1 otherwise.
pub fn conservation_applies(p: &FieldParams, spin: Spin) -> bool {
    p.resonant() && p.consistent() && (p.modulus.k() == 0.0 || spin.value() <= 1.0)
}

/// Standard-deviation curve `(ΔS1, ΔS2, ΔS3)(t)` along a trajectory.
pub fn deviation_curve(traj: &Trajectory) -> Curve3D {
    let points: Vec<[f64; 3]> = traj
        .states()
        .iter()
        .map(|s| {
            covariance(s, traj.system())
                .expect("trajectory states match their system")
                .std_devs
        })
        .collect();
    Curve3D::new(traj.times().to_vec(), points).expect("trajectory grid is strictly increasing")
}

/// Closed form of the deviations at `k = 0` resonance from the
/// highest-weight state:
/// `(ΔS1,ΔS2,ΔS3) = ½√(S/2)(√(3+cos2ht+2sin²ht·cos2ωt), √(3+cos2ht-2sin²ht·cos2ωt), 2|sin ht|)`.
pub fn deviation_closed_form(t: f64, spin: Spin, h: f64, omega: f64) -> [f64; 3] {
    let scale = 0.5 * (spin.value() / 2.0).sqrt();
    let c2h = (2.0 * h * t).cos();
    let s2 = (h * t).sin().powi(2);
    let c2w = (2.0 * omega * t).cos();
    [
        scale * (3.0 + c2h + 2.0 * s2 * c2w).sqrt(),
        scale * (3.0 + c2h - 2.0 * s2 * c2w).sqrt(),
        scale * 2.0 * (h * t).sin().abs(),
    ]
}

/// Pair or triple of deviations entering a product bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSelector {
    Pair(usize, usize),
    Triple,
}

/// Harmonic, geometric and arithmetic means of the selected deviations;
/// `HM ≤ GM ≤ AM` with equality exactly at equal entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductBounds {
    pub harmonic: f64,
    pub geometric: f64,
    pub arithmetic: f64,
}

pub fn product_bounds(std_devs: [f64; 3], which: BoundSelector) -> ProductBounds {
    let values: Vec<f64> = match which {
        BoundSelector::Pair(i, k) => vec![std_devs[i], std_devs[k]],
        BoundSelector::Triple => std_devs.to_vec(),
    };
    let n = values.len() as f64;
    let arithmetic = values.iter().sum::<f64>() / n;
    let geometric = values.iter().product::<f64>().powf(1.0 / n);
    let harmonic = if values.contains(&0.0) {
        0.0
    } else {
        n / values.iter().map(|v| 1.0 / v).sum::<f64>()
    };
    ProductBounds { harmonic, geometric, arithmetic }
}

/// Mutual uncertainty, conditional uncertainty and conditional variance for
/// every ordered pair of spin components:
/// `M(S_i:S_k) = ΔS_i + ΔS_k - Δ(S_i+S_k)`,
/// `Δ(S_i|S_k) = Δ(S_i+S_k) - ΔS_k`,
/// `Var(S_i|S_k) = Var(S_i+S_k) - Var(S_k)`,
/// with `Δ(S_i+S_k)` the standard deviation of the operator `C_i + C_k`.
#[derive(Debug, Clone)]
pub struct UncertaintyReport {
    pub mutual: [[f64; 3]; 3],
    pub conditional: [[f64; 3]; 3],
    pub conditional_variance: [[f64; 3]; 3],
}

pub fn conditional_measures(
    state: &QuantumState,
    sys: &SpinSystem,
) -> Result<UncertaintyReport, UncertaintyError> {
    if state.dim() != sys.dim() {
        return Err(crate::spin::SpinError::DimensionMismatch {
            expected: sys.dim(),
            found: state.dim(),
        }
        .into());
    }
    let var_of = |op: &CMatrix| -> f64 {
        let mean = state.expectation(op);
        let centered =
            op - CMatrix::identity(op.nrows(), op.ncols()) * num_complex::Complex64::new(mean, 0.0);
        let rho_op = state.rho() * &centered;
        real_trace_product(&rho_op, &centered).max(0.0)
    };
    let single_var: Vec<f64> = (0..3).map(|i| var_of(sys.c(i))).collect();
    let single_dev: Vec<f64> = single_var.iter().map(|&v| clamped_sqrt(v)).collect();

    let mut mutual = [[0.0; 3]; 3];
    let mut conditional = [[0.0; 3]; 3];
    let mut conditional_variance = [[0.0; 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            let sum_op = sys.c(i) + sys.c(k);
            let sum_var = var_of(&sum_op);
            let sum_dev = clamped_sqrt(sum_var);
            mutual[i][k] = single_dev[i] + single_dev[k] - sum_dev;
            conditional[i][k] = sum_dev - single_dev[k];
            conditional_variance[i][k] = sum_var - single_var[k];
        }
    }
    Ok(UncertaintyReport { mutual, conditional, conditional_variance })
}
