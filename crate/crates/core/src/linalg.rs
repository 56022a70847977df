//! Dense linear-algebra helpers: Hermitian spectra with clipping, PSD factors,
//! singular values.

use nalgebra::SymmetricEigen;

use nalgebra::ComplexField;

use crate::scalar::{lit, CMatrix, Real};

/// Eigenvalues below this magnitude are treated as exact zeros when a rank or
/// a factor of a density matrix is needed.
pub const RANK_CUTOFF: f64 = 1e-12;

/// Eigenpairs of a Hermitian matrix, eigenvalues in nonincreasing order.
#[derive(Debug, Clone)]
pub struct Spectrum<T: Real> {
    pub values: Vec<T>,
    /// Column `i` is the eigenvector of `values[i]`.
    pub vectors: CMatrix<T>,
}

/// Hermitian eigendecomposition, sorted nonincreasing. The input is assumed
/// Hermitian; only its lower triangle is read by the solver.
pub fn hermitian_spectrum<T: Real>(m: &CMatrix<T>) -> Spectrum<T> {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Spectrum { values, vectors }
}

/// Eigenvalues only, nonincreasing.
pub fn hermitian_eigenvalues<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    let mut v: Vec<T> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    v
}

/// Eigenvalues in `[-tol, 0)` become 0; anything more negative is kept so the
/// caller can still detect it.
pub fn clip_eigenvalues<T: Real>(values: &mut [T], tol: T) {
    for v in values.iter_mut() {
        if *v < T::zero() && *v >= -tol {
            *v = T::zero();
        }
    }
}

/// A factor `F` (d x r) with `F F^dag = m` for a PSD matrix `m`, built from the
/// eigenpairs above [`RANK_CUTOFF`]. Columns are `sqrt(lambda_k) e_k` in
/// nonincreasing eigenvalue order.
pub fn psd_factor<T: Real>(m: &CMatrix<T>) -> (Vec<T>, CMatrix<T>) {
    let spec = hermitian_spectrum(m);
    let cutoff = lit::<T>(RANK_CUTOFF);
    let kept: Vec<usize> = (0..spec.values.len())
        .filter(|&i| spec.values[i] > cutoff)
        .collect();
    let d = m.nrows();
    let factor = CMatrix::from_fn(d, kept.len(), |r, c| {
        let k = kept[c];
        spec.vectors[(r, k)] * spec.values[k].sqrt()
    });
    (kept.iter().map(|&k| spec.values[k]).collect(), factor)
}

/// Singular values in nonincreasing order.
pub fn singular_values<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<T> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    s
}

/// Max entrywise modulus of `a - b`.
pub fn max_abs_diff<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (*x - *y).modulus())
        .fold(T::zero(), |acc, v| if v > acc { v } else { acc })
}

/// Entrywise complex conjugate.
pub fn conj<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    m.map(|z| z.conj())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    #[test]
    fn factor_reproduces_psd_matrix() {
        let m = CMatrix::<f64>::from_row_slice(
            2,
            2,
            &[
                cplx(0.7, 0.0),
                cplx(0.1, -0.2),
                cplx(0.1, 0.2),
                cplx(0.3, 0.0),
            ],
        );
        let (_, f) = psd_factor(&m);
        assert!(max_abs_diff(&(&f * f.adjoint()), &m) < 1e-14);
    }

    #[test]
    fn rank_one_factor_has_one_column() {
        let m = CMatrix::<f64>::from_element(2, 2, cplx(0.5, 0.0));
        let (vals, f) = psd_factor(&m);
        assert_eq!(f.ncols(), 1);
        assert!((vals[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn clipping_only_touches_small_negatives() {
        let mut v = vec![0.5, -1e-12, -0.1];
        clip_eigenvalues(&mut v, 1e-10);
        assert_eq!(v, vec![0.5, 0.0, -0.1]);
    }
}
