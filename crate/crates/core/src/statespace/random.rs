//! Seeded random states: Haar pure states, Ginibre-induced mixed states,
//! Dirichlet-distributed incoherent states and Haar unitaries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{DensityMatrix, PureState};
use nalgebra::ComplexField;

use crate::error::{Error, Result};
use crate::scalar::{cplx, czero, lit, CMatrix, CVector, Real, C};

/// Deterministic generator for `(seed, stream)`. Distinct streams of one seed
/// are independent, which is how roof restarts and suite samples get their
/// own randomness.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> C<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    cplx(lit(re), lit(im))
}

fn ginibre<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix<T> {
    // column-major fill order keeps the stream layout independent of nalgebra internals
    let mut m = CMatrix::from_element(rows, cols, czero());
    for c in 0..cols {
        for r in 0..rows {
            m[(r, c)] = gaussian(rng);
        }
    }
    m
}

/// Haar-random pure state of dimension `d`.
pub fn random_pure<T: Real>(d: usize, seed: u64) -> PureState<T> {
    random_pure_with(d, &mut seeded_rng(seed, 0))
}

pub fn random_pure_with<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> PureState<T> {
    assert!(d >= 1, "dimension must be positive");
    loop {
        let v = CVector::from_iterator(d, (0..d).map(|_| gaussian::<T, R>(rng)));
        if let Ok(psi) = PureState::from_unnormalized(v) {
            return psi;
        }
    }
}

/// `G G† / tr(G G†)` with `G` a `d x rank` complex Ginibre matrix.
pub fn random_density<T: Real>(d: usize, rank: usize, seed: u64) -> Result<DensityMatrix<T>> {
    random_density_with(d, rank, &mut seeded_rng(seed, 0))
}

pub fn random_density_with<T: Real, R: Rng + ?Sized>(
    d: usize,
    rank: usize,
    rng: &mut R,
) -> Result<DensityMatrix<T>> {
    if rank == 0 || rank > d {
        return Err(Error::RankOutOfRange { rank, dim: d });
    }
    let g = ginibre::<T, R>(d, rank, rng);
    let w = &g * g.adjoint();
    let tr = w.trace().re;
    let m = w.map(|z| z / tr);
    // exact Hermitian up to rounding; symmetrize so downstream checks see it
    let half = lit::<T>(0.5);
    let m = (&m + m.adjoint()).map(|z| z * half);
    Ok(DensityMatrix::from_trusted(m))
}

/// Diagonal state with weights uniform on the probability simplex.
pub fn random_incoherent<T: Real>(d: usize, seed: u64) -> DensityMatrix<T> {
    random_incoherent_with(d, &mut seeded_rng(seed, 0))
}

pub fn random_incoherent_with<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix<T> {
    assert!(d >= 1, "dimension must be positive");
    // normalized unit exponentials are Dirichlet(1, ..., 1)
    let e: Vec<f64> = (0..d).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = e.iter().sum();
    let diag = CVector::from_iterator(d, e.iter().map(|x| cplx(lit(x / total), T::zero())));
    DensityMatrix::from_trusted(CMatrix::from_diagonal(&diag))
}

/// Haar-random `n x n` unitary (QR of a Ginibre matrix with the phase of
/// `R`'s diagonal moved into `Q`).
pub fn random_unitary_with<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix<T> {
    let g = ginibre::<T, R>(n, n, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..n {
        let d = r[(c, c)];
        let norm = d.modulus();
        if norm > T::zero() {
            let phase = d / norm;
            for row in 0..n {
                q[(row, c)] *= phase;
            }
        }
    }
    q
}
