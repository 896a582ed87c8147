//! Spin-S operator matrices, the orthogonal Hermitian basis, density
//! matrices, and coherence (Bloch) vectors.
//!
//! Basis ordering is by decreasing magnetic quantum number, so the first
//! basis state is the highest-weight state `|S, S⟩` and `C3` is
//! `diag(S, S-1, …, -S)`.

use nalgebra::DVector;
use num_complex::Complex64;
use thiserror::Error;

use crate::matrix::{hermitian_defect, real_trace_product, CMatrix};

/// Largest spin with matrix support; matrices are dense and small.
pub const MAX_MATRIX_SPIN: f64 = 10.0;

#[derive(Debug, Error, PartialEq)]
pub enum SpinError {
    #[error("spin must be a positive half-integer, got {0}")]
    InvalidSpin(f64),
    #[error("spin {0} exceeds the matrix-backed range (S <= {MAX_MATRIX_SPIN})")]
    SpinTooLarge(f64),
    #[error("operator dimension {found} does not match spin system dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
}

#[derive(Debug, Error, PartialEq)]
pub enum StateError {
    #[error("density matrix must be square, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("density matrix trace must be 1, got {0}")]
    BadTrace(f64),
    #[error("density matrix is not Hermitian (defect {0})")]
    NotHermitian(f64),
    #[error("density matrix has negative eigenvalue {0}")]
    NotPositive(f64),
    #[error("state vector has zero norm")]
    ZeroNorm,
}

/// Half-integer spin quantum number, stored as `2S`.
///
/// Any positive half-integer is a valid `Spin` (the scalar bound formulas
/// take large spins); only matrix construction is capped at
/// [`MAX_MATRIX_SPIN`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Spin {
    two_s: u32,
}

impl Spin {
    pub fn new(s: f64) -> Result<Spin, SpinError> {
        let two_s = 2.0 * s;
        if !(s > 0.0 && s <= 1e6 && two_s.fract() == 0.0) {
            return Err(SpinError::InvalidSpin(s));
        }
        Ok(Spin { two_s: two_s as u32 })
    }

    pub fn value(self) -> f64 {
        f64::from(self.two_s) / 2.0
    }

    /// Hilbert-space dimension `2S + 1`.
    pub fn dimension(self) -> usize {
        self.two_s as usize + 1
    }

    /// `S(S + 1)`.
    pub fn casimir(self) -> f64 {
        let s = self.value();
        s * (s + 1.0)
    }

    /// Bloch-sphere radius `√(3S/(S+1))` of the highest-weight state.
    pub fn bloch_radius(self) -> f64 {
        let s = self.value();
        (3.0 * s / (s + 1.0)).sqrt()
    }

    /// Coherence-vector normalization `√(3/(S(S+1)))`.
    pub fn coherence_scale(self) -> f64 {
        (3.0 / self.casimir()).sqrt()
    }
}

/// Spin components `C1, C2, C3` plus the full set of `(2S+1)²` mutually
/// trace-orthogonal Hermitian matrices with `basis[0] = I`.
#[derive(Debug, Clone)]
pub struct SpinSystem {
    spin: Spin,
    c: [CMatrix; 3],
    basis: Vec<CMatrix>,
}

/// Convenience constructor taking the spin as a bare number.
pub fn make_spin_system(s: f64) -> Result<SpinSystem, SpinError> {
    SpinSystem::new(Spin::new(s)?)
}

impl SpinSystem {
    pub fn new(spin: Spin) -> Result<SpinSystem, SpinError> {
        if spin.value() > MAX_MATRIX_SPIN {
            return Err(SpinError::SpinTooLarge(spin.value()));
        }
        let d = spin.dimension();
        let s = spin.value();
        let m = |j: usize| s - j as f64;

        let mut c3 = CMatrix::zeros(d, d);
        for j in 0..d {
            c3[(j, j)] = Complex64::new(m(j), 0.0);
        }
        // raising operator: <m+1| C+ |m> = sqrt(S(S+1) - m(m+1))
        let mut cp = CMatrix::zeros(d, d);
        for j in 1..d {
            let mm = m(j);
            cp[(j - 1, j)] = Complex64::new((s * (s + 1.0) - mm * (mm + 1.0)).sqrt(), 0.0);
        }
        let cm = cp.adjoint();
        let c1 = (&cp + &cm) * Complex64::new(0.5, 0.0);
        let c2 = (&cp - &cm) * Complex64::new(0.0, -0.5);

        let basis = build_orthogonal_basis(d, &c1, &c2, &c3);
        Ok(SpinSystem { spin, c: [c1, c2, c3], basis })
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn dim(&self) -> usize {
        self.spin.dimension()
    }

    /// Spin component `C1`, `C2` or `C3` (`i` in `0..3`).
    pub fn c(&self, i: usize) -> &CMatrix {
        &self.c[i]
    }

    pub fn c1(&self) -> &CMatrix {
        &self.c[0]
    }

    pub fn c2(&self) -> &CMatrix {
        &self.c[1]
    }

    pub fn c3(&self) -> &CMatrix {
        &self.c[2]
    }

    /// The full trace-orthogonal Hermitian basis, `basis[0] = I`,
    /// `basis[1..=3] = C1..C3`.
    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }
}

/// Trace-orthogonal Hermitian completion of `{I, C1, C2, C3}`.
///
/// Starts from the generalized Gell-Mann set (symmetric, antisymmetric and
/// diagonal Hermitian matrices), which is already trace-orthogonal except
/// where it overlaps the spin components, and removes those overlaps by
/// Gram–Schmidt within each overlapping block.
fn build_orthogonal_basis(d: usize, c1: &CMatrix, c2: &CMatrix, c3: &CMatrix) -> Vec<CMatrix> {
    let mut basis: Vec<CMatrix> = Vec::with_capacity(d * d);
    basis.push(CMatrix::identity(d, d));
    basis.push(c1.clone());
    basis.push(c2.clone());
    basis.push(c3.clone());

    let e = |i: usize, j: usize, z: Complex64| {
        let mut m = CMatrix::zeros(d, d);
        m[(i, j)] = z;
        m
    };
    let one = Complex64::new(1.0, 0.0);
    let im = Complex64::new(0.0, 1.0);

    // Off-diagonal pairs. Adjacent pairs overlap C1 (symmetric combination)
    // and C2 (antisymmetric combination); all others are orthogonal already.
    let mut sym_adjacent = Vec::new();
    let mut asym_adjacent = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            let sym = e(i, j, one) + e(j, i, one);
            let asym = e(i, j, im) + e(j, i, -im);
            if j == i + 1 {
                sym_adjacent.push(sym);
                asym_adjacent.push(asym);
            } else {
                basis.push(sym);
                basis.push(asym);
            }
        }
    }
    basis.extend(orthogonal_complement(sym_adjacent, &[c1]));
    basis.extend(orthogonal_complement(asym_adjacent, &[c2]));

    // Diagonal matrices span {I, C3, ...}; keep the complement.
    let identity = CMatrix::identity(d, d);
    let diagonals: Vec<CMatrix> = (0..d).map(|i| e(i, i, one)).collect();
    basis.extend(orthogonal_complement(diagonals, &[&identity, c3]));

    debug_assert_eq!(basis.len(), d * d);
    basis
}

/// Gram–Schmidt the candidates against `fixed` and each other, dropping the
/// directions absorbed by `fixed`.
fn orthogonal_complement(candidates: Vec<CMatrix>, fixed: &[&CMatrix]) -> Vec<CMatrix> {
    let mut kept: Vec<CMatrix> = Vec::new();
    let norm2 = |m: &CMatrix| real_trace_product(m, m);
    for mut cand in candidates {
        // two passes for numerical orthogonality
        for _ in 0..2 {
            for f in fixed {
                let coeff = real_trace_product(&cand, f) / norm2(f);
                cand -= *f * Complex64::new(coeff, 0.0);
            }
            for kb in &kept {
                let coeff = real_trace_product(&cand, kb) / norm2(kb);
                cand -= kb * Complex64::new(coeff, 0.0);
            }
        }
        if norm2(&cand).sqrt() > 1e-8 {
            kept.push(cand);
        }
    }
    kept
}

/// Density matrix with validated invariants.
#[derive(Debug, Clone)]
pub struct QuantumState {
    rho: CMatrix,
}

impl QuantumState {
    /// Validates trace 1 and Hermiticity to 1e-13 and positive
    /// semidefiniteness (eigenvalues ≥ -1e-12).
    pub fn from_density(rho: CMatrix) -> Result<QuantumState, StateError> {
        if rho.nrows() != rho.ncols() {
            return Err(StateError::NotSquare(rho.nrows(), rho.ncols()));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > 1e-13 || tr.im.abs() > 1e-13 {
            return Err(StateError::BadTrace(tr.re));
        }
        let defect = hermitian_defect(&rho);
        if defect > 1e-13 {
            return Err(StateError::NotHermitian(defect));
        }
        let eig = rho.clone().symmetric_eigen();
        if let Some(&min) = eig
            .eigenvalues
            .iter()
            .min_by(|a, b| a.partial_cmp(b).unwrap())
        {
            if min < -1e-12 {
                return Err(StateError::NotPositive(min));
            }
        }
        Ok(QuantumState { rho })
    }

    /// Pure state from amplitudes (normalized internally).
    pub fn pure(amplitudes: &[Complex64]) -> Result<QuantumState, StateError> {
        let v = DVector::from_row_slice(amplitudes);
        let n = v.norm();
        if n < 1e-150 {
            return Err(StateError::ZeroNorm);
        }
        let v = v / Complex64::new(n, 0.0);
        let rho = &v * v.adjoint();
        Ok(QuantumState { rho })
    }

    /// The highest-weight state `|S,S⟩⟨S,S|` (first diagonal entry 1).
    pub fn highest_weight(dim: usize) -> QuantumState {
        let mut rho = CMatrix::zeros(dim, dim);
        rho[(0, 0)] = Complex64::new(1.0, 0.0);
        QuantumState { rho }
    }

    pub fn maximally_mixed(dim: usize) -> QuantumState {
        QuantumState {
            rho: CMatrix::identity(dim, dim) * Complex64::new(1.0 / dim as f64, 0.0),
        }
    }

    /// Internal constructor for states produced by unitary evolution,
    /// which preserves the invariants by construction.
    pub(crate) fn from_unitary_evolution(rho: CMatrix) -> QuantumState {
        QuantumState { rho }
    }

    pub fn rho(&self) -> &CMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        real_trace_product(&self.rho, &self.rho)
    }

    /// `Re Tr(ρ A)`.
    pub fn expectation(&self, op: &CMatrix) -> f64 {
        real_trace_product(&self.rho, op)
    }
}

/// Normalized coherence (Bloch) vector `R_i = √(3/(S(S+1))) Tr(ρ C_i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceVector {
    pub r: [f64; 3],
    pub bloch_radius: f64,
}

impl CoherenceVector {
    pub fn norm(&self) -> f64 {
        (self.r[0] * self.r[0] + self.r[1] * self.r[1] + self.r[2] * self.r[2]).sqrt()
    }
}

/// Coherence vector of `rho` in the system's spin components.
///
/// The normalization puts the highest-weight state at radius
/// `r_B = √(3S/(S+1))`.
pub fn coherence_vector(
    state: &QuantumState,
    sys: &SpinSystem,
) -> Result<CoherenceVector, SpinError> {
    if state.dim() != sys.dim() {
        return Err(SpinError::DimensionMismatch {
            expected: sys.dim(),
            found: state.dim(),
        });
    }
    let scale = sys.spin().coherence_scale();
    let r = [
        scale * state.expectation(sys.c1()),
        scale * state.expectation(sys.c2()),
        scale * state.expectation(sys.c3()),
    ];
    Ok(CoherenceVector { r, bloch_radius: sys.spin().bloch_radius() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
        a * b - b * a
    }

    #[test]
    fn rejects_invalid_spins() {
        assert!(Spin::new(0.0).is_err());
        assert!(Spin::new(-0.5).is_err());
        assert!(Spin::new(0.7).is_err());
        assert!(Spin::new(f64::NAN).is_err());
        assert!(Spin::new(0.5).is_ok());
        assert!(Spin::new(50.0).is_ok(), "scalar formulas take large spins");
        assert!(make_spin_system(10.0).is_ok());
        assert!(matches!(
            make_spin_system(10.5),
            Err(SpinError::SpinTooLarge(_))
        ));
    }

    #[test]
    fn spin_half_matches_pauli_over_two() {
        let sys = make_spin_system(0.5).unwrap();
        assert_eq!(sys.dim(), 2);
        assert!((sys.c1()[(0, 1)].re - 0.5).abs() < 1e-15);
        assert!((sys.c2()[(0, 1)].im + 0.5).abs() < 1e-15);
        assert!((sys.c3()[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((sys.c3()[(1, 1)].re + 0.5).abs() < 1e-15);
    }

    #[test]
    fn spin_one_c3_diagonal() {
        let sys = make_spin_system(1.0).unwrap();
        assert_eq!(sys.dim(), 3);
        for (j, want) in [1.0, 0.0, -1.0].iter().enumerate() {
            assert!((sys.c3()[(j, j)].re - want).abs() < 1e-15);
        }
    }

    #[test]
    fn commutation_and_casimir() {
        for &s in &[0.5, 1.0, 1.5, 2.0, 5.0] {
            let sys = make_spin_system(s).unwrap();
            let d = sys.dim();
            let i = Complex64::new(0.0, 1.0);
            for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
                let lhs = commutator(sys.c(a), sys.c(b));
                let rhs = sys.c(c) * i;
                assert!((lhs - rhs).norm() < 1e-13, "commutator failed at S={s}");
            }
            let casimir = sys.c1() * sys.c1() + sys.c2() * sys.c2() + sys.c3() * sys.c3();
            let expect = CMatrix::identity(d, d) * Complex64::new(s * (s + 1.0), 0.0);
            assert!((casimir - expect).norm() < 1e-12, "Casimir failed at S={s}");
        }
    }

    #[test]
    fn casimir_spin_two_is_six() {
        let sys = make_spin_system(2.0).unwrap();
        let casimir = sys.c1() * sys.c1() + sys.c2() * sys.c2() + sys.c3() * sys.c3();
        assert!((casimir[(0, 0)].re - 6.0).abs() < 1e-13);
    }

    #[test]
    fn basis_is_complete_and_orthogonal() {
        for &s in &[0.5, 1.0, 2.5] {
            let sys = make_spin_system(s).unwrap();
            let d = sys.dim();
            let basis = sys.basis();
            assert_eq!(basis.len(), d * d);
            assert!((basis[0].clone() - CMatrix::identity(d, d)).norm() < 1e-15);
            for m in basis {
                assert!(hermitian_defect(m) < 1e-13);
            }
            for i in 0..basis.len() {
                for j in (i + 1)..basis.len() {
                    let overlap = real_trace_product(&basis[i], &basis[j]);
                    assert!(
                        overlap.abs() < 1e-12,
                        "basis {i} and {j} overlap {overlap} at S={s}"
                    );
                }
            }
        }
    }

    #[test]
    fn highest_weight_coherence_is_north_pole() {
        for &s in &[0.5, 1.0, 3.0] {
            let sys = make_spin_system(s).unwrap();
            let rho = QuantumState::highest_weight(sys.dim());
            let cv = coherence_vector(&rho, &sys).unwrap();
            assert!(cv.r[0].abs() < 1e-14);
            assert!(cv.r[1].abs() < 1e-14);
            assert!((cv.r[2] - sys.spin().bloch_radius()).abs() < 1e-13);
        }
    }

    #[test]
    fn maximally_mixed_coherence_vanishes() {
        let sys = make_spin_system(1.5).unwrap();
        let rho = QuantumState::maximally_mixed(sys.dim());
        let cv = coherence_vector(&rho, &sys).unwrap();
        assert!(cv.norm() < 1e-14);
    }

    #[test]
    fn plus_x_qubit_coherence() {
        let sys = make_spin_system(0.5).unwrap();
        let amp = [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        let rho = QuantumState::pure(&amp).unwrap();
        let cv = coherence_vector(&rho, &sys).unwrap();
        assert!((cv.r[0] - 1.0).abs() < 1e-14);
        assert!(cv.r[1].abs() < 1e-14);
        assert!(cv.r[2].abs() < 1e-14);
        assert!((cv.bloch_radius - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bloch_radius_increases_toward_sqrt3() {
        let mut prev = 0.0;
        for two_s in 1..=20 {
            let s = Spin::new(two_s as f64 / 2.0).unwrap();
            let r = s.bloch_radius();
            assert!(r > prev);
            assert!(r < 3.0_f64.sqrt());
            prev = r;
        }
    }

    #[test]
    fn state_validation_catches_bad_inputs() {
        let mut rho = CMatrix::zeros(2, 2);
        rho[(0, 0)] = Complex64::new(0.7, 0.0);
        assert!(matches!(
            QuantumState::from_density(rho.clone()),
            Err(StateError::BadTrace(_))
        ));
        rho[(1, 1)] = Complex64::new(0.3, 0.0);
        rho[(0, 1)] = Complex64::new(0.9, 0.0);
        rho[(1, 0)] = Complex64::new(0.9, 0.0);
        // Hermitian, trace 1, but indefinite.
        assert!(matches!(
            QuantumState::from_density(rho),
            Err(StateError::NotPositive(_))
        ));
    }

    #[test]
    fn dimension_mismatch_reported() {
        let sys = make_spin_system(0.5).unwrap();
        let rho = QuantumState::maximally_mixed(3);
        assert!(matches!(
            coherence_vector(&rho, &sys),
            Err(SpinError::DimensionMismatch { .. })
        ));
    }

    proptest! {
        #[test]
        fn coherence_is_linear_in_rho(w in 0.0..1.0_f64) {
            let sys = make_spin_system(1.0).unwrap();
            let a = QuantumState::highest_weight(3);
            let b = QuantumState::maximally_mixed(3);
            let mix = QuantumState::from_density(
                a.rho() * Complex64::new(w, 0.0) + b.rho() * Complex64::new(1.0 - w, 0.0),
            ).unwrap();
            let ca = coherence_vector(&a, &sys).unwrap();
            let cb = coherence_vector(&b, &sys).unwrap();
            let cm = coherence_vector(&mix, &sys).unwrap();
            for i in 0..3 {
                let expect = w * ca.r[i] + (1.0 - w) * cb.r[i];
                prop_assert!((cm.r[i] - expect).abs() < 1e-12);
            }
        }

        #[test]
        fn qubit_coherence_norm_bounded(
            re0 in -1.0..1.0_f64, im0 in -1.0..1.0_f64,
            re1 in -1.0..1.0_f64, im1 in -1.0..1.0_f64,
        ) {
            prop_assume!((re0*re0 + im0*im0 + re1*re1 + im1*im1) > 1e-6);
            let sys = make_spin_system(0.5).unwrap();
            let rho = QuantumState::pure(&[
                Complex64::new(re0, im0),
                Complex64::new(re1, im1),
            ]).unwrap();
            let cv = coherence_vector(&rho, &sys).unwrap();
            prop_assert!(cv.norm() <= 1.0 + 1e-12);
        }
    }
}
