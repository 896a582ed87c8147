//! Driving-field model, Hamiltonian, a structurally unitary numerical
//! propagator, and the diagonal-frame (alpha) closed-form propagator with
//! the resonance solution for the coherence vector.

use num_complex::Complex64;
use thiserror::Error;

use crate::elliptic::{complete_k, jacobi_sncndn, EllipticModulus};
use crate::matrix::{CMatrix, HermitianEigen};
use crate::spin::{coherence_vector, CoherenceVector, QuantumState, Spin, SpinSystem};

#[derive(Debug, Error, PartialEq)]
pub enum DynamicsError {
    #[error("field amplitudes must be nonnegative and omega positive (h1={h1}, h2={h2}, H={hz}, omega={omega})")]
    InvalidField { h1: f64, h2: f64, hz: f64, omega: f64 },
    #[error("invalid propagation grid: {0}")]
    InvalidGrid(String),
    #[error("closed form not applicable: {0}")]
    NotApplicable(String),
    #[error(transparent)]
    Spin(#[from] crate::spin::SpinError),
}

/// Driving-field description, in frequency units (magnetic moment and ħ
/// are 1): transverse amplitudes `h1, h2`, longitudinal amplitude `H`
/// (field `hz`), frequency `omega` and elliptic modulus `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldParams {
    pub h1: f64,
    pub h2: f64,
    pub hz: f64,
    pub omega: f64,
    pub modulus: EllipticModulus,
}

impl FieldParams {
    pub fn new(
        h1: f64,
        h2: f64,
        hz: f64,
        omega: f64,
        modulus: EllipticModulus,
    ) -> Result<FieldParams, DynamicsError> {
        if !(h1 >= 0.0 && h2 >= 0.0 && hz >= 0.0 && omega > 0.0) {
            return Err(DynamicsError::InvalidField { h1, h2, hz, omega });
        }
        Ok(FieldParams { h1, h2, hz, omega, modulus })
    }

    /// Equal transverse amplitudes `h1 = h2 = h` (the "consistent" drive).
    pub fn consistent_drive(
        h: f64,
        hz: f64,
        omega: f64,
        modulus: EllipticModulus,
    ) -> Result<FieldParams, DynamicsError> {
        FieldParams::new(h, h, hz, omega, modulus)
    }

    /// Detuning `δ = H - ω`; resonance means `δ = 0`.
    pub fn detuning(&self) -> f64 {
        self.hz - self.omega
    }

    pub fn consistent(&self) -> bool {
        self.h1 == self.h2
    }

    pub fn resonant(&self) -> bool {
        self.detuning() == 0.0
    }

    /// Common transverse amplitude, defined for consistent drives.
    pub fn transverse(&self) -> f64 {
        self.h1
    }
}

/// Field vector `(h1 cn(ωt|k), h2 sn(ωt|k), H dn(ωt|k))`.
pub fn field_at(t: f64, p: &FieldParams) -> [f64; 3] {
    let (sn, cn, dn) = jacobi_sncndn(p.omega * t, p.modulus);
    [p.h1 * cn, p.h2 * sn, p.hz * dn]
}

/// Hamiltonian `Ĥ(t) = Σ_i C_i h_i(t)`.
pub fn hamiltonian_at(t: f64, p: &FieldParams, sys: &SpinSystem) -> CMatrix {
    let h = field_at(t, p);
    sys.c1() * Complex64::new(h[0], 0.0)
        + sys.c2() * Complex64::new(h[1], 0.0)
        + sys.c3() * Complex64::new(h[2], 0.0)
}

/// Unitary trajectory of a state under the driving field.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<QuantumState>,
    coherence: Vec<CoherenceVector>,
    params: FieldParams,
    system: SpinSystem,
}

impl Trajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[QuantumState] {
        &self.states
    }

    pub fn coherence(&self) -> &[CoherenceVector] {
        &self.coherence
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    pub fn system(&self) -> &SpinSystem {
        &self.system
    }

    pub fn spin(&self) -> Spin {
        self.system.spin()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Coherence samples as raw 3-vectors (the Bloch hodograph).
    pub fn coherence_points(&self) -> Vec<[f64; 3]> {
        self.coherence.iter().map(|c| c.r).collect()
    }

    fn from_states(
        times: Vec<f64>,
        states: Vec<QuantumState>,
        params: FieldParams,
        system: SpinSystem,
    ) -> Result<Trajectory, DynamicsError> {
        if times.len() < 2 || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(DynamicsError::InvalidGrid(
                "trajectory grid must be strictly increasing with at least two points".into(),
            ));
        }
        let coherence = states
            .iter()
            .map(|s| coherence_vector(s, &system))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Trajectory { times, states, coherence, params, system })
    }
}

/// Step count resolving the fastest field timescale with ~100 points per
/// unit of phase: `ceil(100 · t_end · max(h1, h2, H, ω))`.
pub fn default_step_count(t_end: f64, p: &FieldParams) -> usize {
    let fastest = p.h1.max(p.h2).max(p.hz).max(p.omega);
    ((100.0 * t_end * fastest).ceil() as usize).max(1)
}

/// Second-order midpoint-exponential propagation of `ρ' = -i[H(t), ρ]`.
///
/// Each step applies `exp(-i Δt Ĥ(t_mid))`, built by eigendecomposition, so
/// every step is unitary to roundoff and purity is preserved along the
/// whole trajectory.
pub fn propagate_numeric(
    rho0: &QuantumState,
    p: &FieldParams,
    sys: &SpinSystem,
    t_end: f64,
    n_steps: usize,
) -> Result<Trajectory, DynamicsError> {
    if n_steps < 1 || !t_end.is_finite() || t_end <= 0.0 {
        return Err(DynamicsError::InvalidGrid(format!(
            "need t_end > 0 and n_steps >= 1, got t_end={t_end}, n_steps={n_steps}"
        )));
    }
    if rho0.dim() != sys.dim() {
        return Err(crate::spin::SpinError::DimensionMismatch {
            expected: sys.dim(),
            found: rho0.dim(),
        }
        .into());
    }
    let dt = t_end / n_steps as f64;
    let mut rho = rho0.rho().clone();
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity(n_steps + 1);
    times.push(0.0);
    states.push(rho0.clone());
    for i in 0..n_steps {
        let t_mid = (i as f64 + 0.5) * dt;
        let h = hamiltonian_at(t_mid, p, sys);
        let u = crate::matrix::expm_i_hermitian(&h, dt);
        rho = &u * rho * u.adjoint();
        // re-symmetrize to keep roundoff from accumulating
        let adj = rho.adjoint();
        rho = (rho + adj) * Complex64::new(0.5, 0.0);
        times.push((i + 1) as f64 * dt);
        states.push(QuantumState::from_unitary_evolution(rho.clone()));
    }
    Trajectory::from_states(times, states, *p, sys.clone())
}

/// Whether the diagonal-frame construction yields a time-independent
/// transformed Hamiltonian for the given parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validity {
    Exact,
    NotApplicable,
}

/// Diagonal-frame propagator `U(t) = α(t)⁻¹ exp(-i t h₀)` built from
/// `α = diag(f(S), …, f(-S))`, `f(m) = cn(mωt|k) + i sn(mωt|k)`.
///
/// The construction is probed numerically: `validity` is `Exact` only when
/// the transformed Hamiltonian `ĥ(t) = α Ĥ α⁻¹ - i α ∂ₜα⁻¹` stays equal to
/// `ĥ(0)` over the probe grid (Frobenius norm ≤ 1e-8).
pub struct AlphaPropagator {
    params: FieldParams,
    system: SpinSystem,
    h0: CMatrix,
    h0_eigen: HermitianEigen,
    validity: Validity,
    max_deviation: f64,
}

/// Probe grid covering the slowest period of the frame functions.
pub fn default_probe_grid(p: &FieldParams) -> Vec<f64> {
    let t_max = match complete_k(p.modulus) {
        Ok(quarter) => 8.0 * quarter / p.omega,
        Err(_) => 20.0 / p.omega,
    };
    let n = 129;
    (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect()
}

/// Builds the diagonal-frame propagator and probes its validity.
pub fn build_alpha_propagator(
    p: &FieldParams,
    sys: &SpinSystem,
    probe_times: &[f64],
) -> AlphaPropagator {
    let h0 = transformed_hamiltonian(0.0, p, sys);
    let mut max_deviation = 0.0_f64;
    for &t in probe_times {
        let dev = (transformed_hamiltonian(t, p, sys) - &h0).norm();
        max_deviation = max_deviation.max(dev);
    }
    let validity = if max_deviation <= 1e-8 {
        Validity::Exact
    } else {
        Validity::NotApplicable
    };
    let h0_eigen = HermitianEigen::new(&h0);
    AlphaPropagator {
        params: *p,
        system: sys.clone(),
        h0,
        h0_eigen,
        validity,
        max_deviation,
    }
}

/// Frame factors `f(m) = cn(mωt|k) + i sn(mωt|k)` for m = S, S-1, …, -S.
fn frame_factors(t: f64, p: &FieldParams, spin: Spin) -> Vec<Complex64> {
    let d = spin.dimension();
    let s = spin.value();
    (0..d)
        .map(|j| {
            let m = s - j as f64;
            let (sn, cn, _) = jacobi_sncndn(m * p.omega * t, p.modulus);
            Complex64::new(cn, sn)
        })
        .collect()
}

/// `ĥ(t) = α Ĥ(t) α⁻¹ - i α ∂ₜα⁻¹`, with `∂ₜα⁻¹` by analytic
/// differentiation of `conj(f)` using `sn' = cn·dn`, `cn' = -sn·dn`.
pub fn transformed_hamiltonian(t: f64, p: &FieldParams, sys: &SpinSystem) -> CMatrix {
    let spin = sys.spin();
    let d = spin.dimension();
    let s = spin.value();
    let f = frame_factors(t, p, spin);
    let finv: Vec<Complex64> = f.iter().map(|z| z.conj() / z.norm_sqr()).collect();
    let h = hamiltonian_at(t, p, sys);
    let mut out = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            out[(i, j)] = f[i] * h[(i, j)] * finv[j];
        }
    }
    let im = Complex64::new(0.0, 1.0);
    for j in 0..d {
        let m = s - j as f64;
        let (sn, cn, dn) = jacobi_sncndn(m * p.omega * t, p.modulus);
        // d/dt conj(f(m)) = m ω (-sn·dn - i·cn·dn)
        let dfinv = Complex64::new(-sn * dn, -cn * dn) * (m * p.omega);
        out[(j, j)] -= im * f[j] * dfinv;
    }
    out
}

impl AlphaPropagator {
    pub fn validity(&self) -> Validity {
        self.validity
    }

    /// Largest probe-grid deviation `‖ĥ(t) - ĥ(0)‖`.
    pub fn max_deviation(&self) -> f64 {
        self.max_deviation
    }

    /// The transformed Hamiltonian at t = 0 (always Hermitian).
    pub fn h0(&self) -> &CMatrix {
        &self.h0
    }

    /// Diagonal frame matrix `α(t)`; `α(0) = I`.
    pub fn alpha(&self, t: f64) -> CMatrix {
        let f = frame_factors(t, &self.params, self.system.spin());
        CMatrix::from_diagonal(&nalgebra::DVector::from_vec(f))
    }

    /// Full propagator `U(t) = α(t)⁻¹ exp(-i t h₀)`, available when Exact.
    pub fn propagator(&self, t: f64) -> Option<CMatrix> {
        if self.validity != Validity::Exact {
            return None;
        }
        let f = frame_factors(t, &self.params, self.system.spin());
        let finv: Vec<Complex64> = f.iter().map(|z| z.conj() / z.norm_sqr()).collect();
        let alpha_inv = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(finv));
        Some(alpha_inv * self.h0_eigen.expm_i(t))
    }

    /// Evolves `rho0` over the given times using the closed-form propagator.
    pub fn evolve(&self, rho0: &QuantumState, times: &[f64]) -> Result<Trajectory, DynamicsError> {
        if self.validity != Validity::Exact {
            return Err(DynamicsError::NotApplicable(format!(
                "transformed Hamiltonian drifts by {:.3e} over the probe grid",
                self.max_deviation
            )));
        }
        if rho0.dim() != self.system.dim() {
            return Err(crate::spin::SpinError::DimensionMismatch {
                expected: self.system.dim(),
                found: rho0.dim(),
            }
            .into());
        }
        let mut states = Vec::with_capacity(times.len());
        for &t in times {
            let u = self.propagator(t).expect("validity checked above");
            let rho = &u * rho0.rho() * u.adjoint();
            let adj = rho.adjoint();
            states.push(QuantumState::from_unitary_evolution(
                (rho + adj) * Complex64::new(0.5, 0.0),
            ));
        }
        Trajectory::from_states(times.to_vec(), states, self.params, self.system.clone())
    }
}

/// Resonance closed form for the coherence vector of the highest-weight
/// initial state:
/// `R = r_B (sn(ωt|k) sin(ht), -cn(ωt|k) sin(ht), cos(ht))`.
///
/// Requires a consistent resonant drive and, when `k ≠ 0`, spin 1/2 or 1
/// (for higher spins the form holds only in the circular limit `k = 0`).
pub fn analytic_resonance_spin(
    t: f64,
    p: &FieldParams,
    spin: Spin,
) -> Result<CoherenceVector, DynamicsError> {
    if !p.consistent() {
        return Err(DynamicsError::NotApplicable(
            "requires h1 = h2 (consistent drive)".into(),
        ));
    }
    if !p.resonant() {
        return Err(DynamicsError::NotApplicable(
            "requires resonance omega = H".into(),
        ));
    }
    if p.modulus.k() != 0.0 && spin.value() > 1.0 {
        return Err(DynamicsError::NotApplicable(
            "for k != 0 the closed form holds only for spin 1/2 and 1".into(),
        ));
    }
    let h = p.transverse();
    let (sn, cn, _) = jacobi_sncndn(p.omega * t, p.modulus);
    let (s, c) = (h * t).sin_cos();
    let r_b = spin.bloch_radius();
    Ok(CoherenceVector {
        r: [r_b * sn * s, -r_b * cn * s, r_b * c],
        bloch_radius: r_b,
    })
}
