//! Small helpers on dense complex matrices (dimensions here never exceed 21).

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Dense complex matrix used for operators and density matrices.
pub type CMatrix = DMatrix<Complex64>;

/// Maximum entrywise deviation from Hermiticity, `max |A - A†|`.
pub fn hermitian_defect(a: &CMatrix) -> f64 {
    let adj = a.adjoint();
    (a - adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `Re Tr(A B)` without materializing the product.
pub fn real_trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let p = a[(i, j)] * b[(j, i)];
            acc += p.re;
        }
    }
    acc
}

/// `Tr(A B)` without materializing the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// `exp(-i t H)` for Hermitian `H`, via eigendecomposition.
///
/// The result is unitary up to floating-point roundoff because it is
/// assembled as `V exp(-i t Λ) V†` with orthonormal eigenvectors.
pub fn expm_i_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    debug_assert!(hermitian_defect(h) < 1e-10 * (1.0 + h.norm()));
    let eig = h.clone().symmetric_eigen();
    let phases = eig
        .eigenvalues
        .map(|lambda| Complex64::from_polar(1.0, -t * lambda));
    let d = CMatrix::from_diagonal(&phases);
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Eigendecomposition of a Hermitian matrix, reusable for repeated exponentials.
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(h: &CMatrix) -> Self {
        let eig = h.clone().symmetric_eigen();
        HermitianEigen {
            eigenvalues: eig.eigenvalues.iter().copied().collect(),
            eigenvectors: eig.eigenvectors,
        }
    }

    /// `exp(-i t H)` from the stored decomposition.
    pub fn expm_i(&self, t: f64) -> CMatrix {
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues
                .iter()
                .map(|&lambda| Complex64::from_polar(1.0, -t * lambda)),
        ));
        &self.eigenvectors * d * self.eigenvectors.adjoint()
    }
}
