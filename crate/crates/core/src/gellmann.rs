//! Generalized Gell-Mann matrices, the `d² - 1` traceless Hermitian generators
//! of SU(d).
//!
//! Indices follow the basis labels `1..=d`.

use crate::error::{Error, Result};
use crate::scalar::{cplx, czero, lit, CMatrix, Real, C};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GgmKind {
    /// `|j⟩⟨k| + |k⟩⟨j|`
    Symmetric { j: usize, k: usize },
    /// `-i|j⟩⟨k| + i|k⟩⟨j|`
    Antisymmetric { j: usize, k: usize },
    /// `√(2/(l(l+1))) (Σ_{j≤l} |j⟩⟨j| - l|l+1⟩⟨l+1|)`
    Diagonal { l: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GellMannOperator<T: Real> {
    pub dim: usize,
    pub kind: GgmKind,
    pub matrix: CMatrix<T>,
}

fn check_pair(d: usize, j: usize, k: usize) -> Result<()> {
    if j == 0 || j >= k || k > d {
        return Err(Error::IndexOrder { j, k, dim: d });
    }
    Ok(())
}

pub fn symmetric_ggm<T: Real>(d: usize, j: usize, k: usize) -> Result<GellMannOperator<T>> {
    check_pair(d, j, k)?;
    let mut m = CMatrix::from_element(d, d, czero());
    m[(j - 1, k - 1)] = cplx(T::one(), T::zero());
    m[(k - 1, j - 1)] = cplx(T::one(), T::zero());
    Ok(GellMannOperator {
        dim: d,
        kind: GgmKind::Symmetric { j, k },
        matrix: m,
    })
}

pub fn antisymmetric_ggm<T: Real>(d: usize, j: usize, k: usize) -> Result<GellMannOperator<T>> {
    check_pair(d, j, k)?;
    let mut m = CMatrix::from_element(d, d, czero());
    m[(j - 1, k - 1)] = cplx(T::zero(), -T::one());
    m[(k - 1, j - 1)] = cplx(T::zero(), T::one());
    Ok(GellMannOperator {
        dim: d,
        kind: GgmKind::Antisymmetric { j, k },
        matrix: m,
    })
}

pub fn diagonal_ggm<T: Real>(d: usize, l: usize) -> Result<GellMannOperator<T>> {
    if l == 0 || l >= d {
        return Err(Error::IndexOutOfRange {
            index: l,
            max: d.saturating_sub(1),
        });
    }
    let lf = lit::<T>(l as f64);
    let coeff = (lit::<T>(2.0) / (lf * (lf + T::one()))).sqrt();
    let mut m = CMatrix::from_element(d, d, czero());
    for i in 0..l {
        m[(i, i)] = cplx(coeff, T::zero());
    }
    m[(l, l)] = cplx(-coeff * lf, T::zero());
    Ok(GellMannOperator {
        dim: d,
        kind: GgmKind::Diagonal { l },
        matrix: m,
    })
}

/// Pairs `(j, k)`, `1 ≤ j < k ≤ d`, in lexicographic order.
pub fn index_pairs(d: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=d).flat_map(move |j| ((j + 1)..=d).map(move |k| (j, k)))
}

/// All generators: symmetric pairs, then antisymmetric pairs, then diagonal.
pub fn ggm_basis<T: Real>(d: usize) -> Result<Vec<GellMannOperator<T>>> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let mut out = Vec::with_capacity(d * d - 1);
    for (j, k) in index_pairs(d) {
        out.push(symmetric_ggm(d, j, k)?);
    }
    for (j, k) in index_pairs(d) {
        out.push(antisymmetric_ggm(d, j, k)?);
    }
    for l in 1..d {
        out.push(diagonal_ggm(d, l)?);
    }
    Ok(out)
}

/// Coefficients `c_a = tr(Λ_a M) / 2` of a traceless matrix in the basis.
pub fn expansion_coefficients<T: Real>(basis: &[GellMannOperator<T>], m: &CMatrix<T>) -> Vec<C<T>> {
    let half = lit::<T>(0.5);
    basis
        .iter()
        .map(|g| (&g.matrix * m).trace() * half)
        .collect()
}

/// `Σ_a c_a Λ_a`.
pub fn reconstruct<T: Real>(basis: &[GellMannOperator<T>], coeffs: &[C<T>]) -> CMatrix<T> {
    let d = basis[0].dim;
    basis
        .iter()
        .zip(coeffs)
        .fold(CMatrix::from_element(d, d, czero()), |acc, (g, &c)| {
            acc + g.matrix.map(|z| z * c)
        })
}
