//! Small shared helpers for dense complex matrices.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::CMatrix;

/// Eigenvalues of a Hermitian matrix. Unordered, but deterministic for a
/// fixed input.
pub(crate) fn hermitian_eigenvalues(m: &CMatrix) -> DVector<f64> {
    m.symmetric_eigenvalues()
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues plus the
/// matrix whose columns are the matching eigenvectors.
pub(crate) fn hermitian_eigen(m: &CMatrix) -> (DVector<f64>, CMatrix) {
    let eig = m.clone().symmetric_eigen();
    (eig.eigenvalues, eig.eigenvectors)
}

/// Largest entrywise modulus of `a - b`. Panics on shape mismatch.
pub(crate) fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Runs `fill(col, column_slice)` for every column of a `dim` x `dim`
/// column-major buffer, in parallel when the `parallel` feature is enabled.
/// Each column is written independently, so the output does not depend on
/// the schedule.
pub(crate) fn for_each_column<F>(data: &mut [Complex64], dim: usize, fill: F)
where
    F: Fn(usize, &mut [Complex64]) + Send + Sync,
{
    debug_assert_eq!(data.len(), dim * dim);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        data.par_chunks_mut(dim)
            .enumerate()
            .for_each(|(col, chunk)| fill(col, chunk));
    }
    #[cfg(not(feature = "parallel"))]
    {
        data.chunks_mut(dim)
            .enumerate()
            .for_each(|(col, chunk)| fill(col, chunk));
    }
}
