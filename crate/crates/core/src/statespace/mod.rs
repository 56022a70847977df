//! Quantum states in a fixed reference basis.
//!
//! Basis labels in the literature run `1..=d`; storage here is 0-based, so
//! label `|j⟩` lives at index `j - 1`. Composite systems use S-major order:
//! `|i⟩^S |a⟩^A` is row `i * dim_a + a` (0-based).

mod random;

pub use random::{
    random_density, random_density_with, random_incoherent, random_incoherent_with, random_pure,
    random_pure_with, random_unitary_with, seeded_rng,
};

use nalgebra::ComplexField;

use crate::error::{Error, Result};
use crate::linalg::{self, RANK_CUTOFF};
use crate::scalar::{cone, czero, entropy_term, lit, to_f64, CMatrix, CVector, Real, C};

/// Default tolerance for positivity, trace and normalization checks.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Probabilities below this are dropped from ensembles and outcome lists.
pub const PRUNE_PROBABILITY: f64 = 1e-14;

/// A validated density matrix: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    matrix: CMatrix<T>,
}

/// A validated unit-norm state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T: Real> {
    amplitudes: CVector<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleMember<T: Real> {
    pub probability: T,
    pub state: PureState<T>,
}

/// Probability-weighted pure states realizing a density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble<T: Real> {
    members: Vec<EnsembleMember<T>>,
}

/// Dimensions of a bipartite system `S ⊗ A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartiteSplit {
    pub dim_s: usize,
    pub dim_a: usize,
}

/// Which factor of a bipartite system to keep in a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    S,
    A,
}

/// Checks Hermiticity, trace and positivity of `raw` and wraps it.
///
/// An asymmetry below `tol` is removed by averaging with the adjoint.
pub fn validate_density<T: Real>(raw: CMatrix<T>, tol: T) -> Result<DensityMatrix<T>> {
    let (rows, cols) = raw.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if rows == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if raw.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let adj = raw.adjoint();
    let asymmetry = linalg::max_abs_diff(&raw, &adj);
    if asymmetry > tol {
        return Err(Error::NotHermitian {
            asymmetry: to_f64(asymmetry),
        });
    }
    let half = lit::<T>(0.5);
    let matrix = (&raw + &adj).map(|z| z * half);
    let trace = matrix.trace();
    let deviation = (trace - cone()).modulus();
    if deviation > tol {
        return Err(Error::TraceNotOne {
            deviation: to_f64(deviation),
        });
    }
    let min = linalg::hermitian_eigenvalues(&matrix)
        .last()
        .copied()
        .unwrap_or_else(T::zero);
    if min < -tol {
        return Err(Error::NotPositive {
            min_eigenvalue: to_f64(min),
        });
    }
    Ok(DensityMatrix { matrix })
}

impl<T: Real> DensityMatrix<T> {
    /// Validates with [`DEFAULT_TOL`].
    pub fn new(raw: CMatrix<T>) -> Result<Self> {
        validate_density(raw, lit(DEFAULT_TOL))
    }

    /// Wraps a matrix produced by an operation that preserves the invariants
    /// exactly up to rounding (outer products, Kronecker products, ...).
    pub(crate) fn from_trusted(matrix: CMatrix<T>) -> Self {
        debug_assert!(matrix.is_square());
        DensityMatrix { matrix }
    }

    /// Maximally mixed state `I/d`.
    pub fn maximally_mixed(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension(d));
        }
        let w = T::one() / lit::<T>(d as f64);
        Ok(Self::from_trusted(CMatrix::from_diagonal(
            &CVector::from_element(d, C::new(w, T::zero())),
        )))
    }

    /// Diagonal (incoherent) state from a probability vector.
    pub fn diagonal(weights: &[T]) -> Result<Self> {
        let diag =
            CVector::from_iterator(weights.len(), weights.iter().map(|&w| C::new(w, T::zero())));
        Self::new(CMatrix::from_diagonal(&diag))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    /// Entry at 0-based `(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> C<T> {
        self.matrix[(row, col)]
    }

    /// Entrywise complex conjugate in the reference basis.
    pub fn conj(&self) -> Self {
        Self::from_trusted(linalg::conj(&self.matrix))
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> T {
        self.matrix
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
    }

    /// Eigenvalues, nonincreasing, with `[-DEFAULT_TOL, 0)` clipped to zero.
    pub fn eigenvalues(&self) -> Vec<T> {
        let mut v = linalg::hermitian_eigenvalues(&self.matrix);
        linalg::clip_eigenvalues(&mut v, lit(DEFAULT_TOL));
        v
    }

    /// Number of eigenvalues above the rank cutoff.
    pub fn rank(&self) -> usize {
        let cutoff = lit::<T>(RANK_CUTOFF);
        self.eigenvalues().iter().filter(|&&v| v > cutoff).count()
    }

    /// The state vector if `ρ` is a projector within `tol` (largest eigenvalue
    /// at least `1 - tol`).
    pub fn as_pure(&self, tol: T) -> Option<PureState<T>> {
        let spec = linalg::hermitian_spectrum(&self.matrix);
        if spec.values[0] < T::one() - tol {
            return None;
        }
        PureState::from_unnormalized(spec.vectors.column(0).into_owned()).ok()
    }

    /// Spectral decomposition as an ensemble (eigenvalues above the rank cutoff).
    pub fn spectral_ensemble(&self) -> Ensemble<T> {
        let spec = linalg::hermitian_spectrum(&self.matrix);
        let cutoff = lit::<T>(RANK_CUTOFF);
        let total: T = spec
            .values
            .iter()
            .filter(|&&v| v > cutoff)
            .fold(T::zero(), |a, &b| a + b);
        let members = spec
            .values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > cutoff)
            .map(|(i, &v)| EnsembleMember {
                probability: v / total,
                state: PureState::from_unnormalized(spec.vectors.column(i).into_owned())
                    .expect("eigenvectors are unit vectors"),
            })
            .collect();
        Ensemble { members }
    }
}

impl<T: Real> PureState<T> {
    /// Validates `|‖amplitudes‖² - 1| <= tol`.
    pub fn new(amplitudes: CVector<T>, tol: T) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let deviation = (amplitudes.norm_squared() - T::one()).abs();
        if deviation > tol {
            return Err(Error::NotNormalized {
                deviation: to_f64(deviation),
            });
        }
        Ok(PureState { amplitudes })
    }

    /// Normalizes a nonzero vector.
    pub fn from_unnormalized(v: CVector<T>) -> Result<Self> {
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = v.norm();
        if v.is_empty() || norm <= T::zero() {
            return Err(Error::NotNormalized { deviation: 1.0 });
        }
        Ok(PureState {
            amplitudes: v.unscale(norm),
        })
    }

    /// Reference basis state with 0-based `index` (label `|index + 1⟩`).
    pub fn basis(d: usize, index: usize) -> Result<Self> {
        if index >= d {
            return Err(Error::IndexOutOfRange {
                index: index + 1,
                max: d,
            });
        }
        let mut v = CVector::from_element(d, czero());
        v[index] = cone();
        Ok(PureState { amplitudes: v })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector<T> {
        &self.amplitudes
    }

    pub fn conj(&self) -> Self {
        PureState {
            amplitudes: self.amplitudes.map(|z| z.conj()),
        }
    }

    /// `|self⟩ ⊗ |other⟩` in S-major order.
    pub fn tensor(&self, other: &PureState<T>) -> PureState<T> {
        PureState {
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
        }
    }

    /// Applies a matrix and renormalizes; fails if the image vanishes.
    pub fn apply(&self, op: &CMatrix<T>) -> Result<PureState<T>> {
        if op.ncols() != self.dim() {
            return Err(Error::DimMismatch {
                expected: op.ncols(),
                got: self.dim(),
            });
        }
        PureState::from_unnormalized(op * &self.amplitudes)
    }

    /// `|amplitude_i|²` in basis order.
    pub fn populations(&self) -> Vec<T> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }
}

impl<T: Real> Ensemble<T> {
    /// Checks probabilities are in `[0, 1]` and sum to one within `tol`, and all
    /// members share a dimension.
    pub fn new(members: Vec<EnsembleMember<T>>, tol: T) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidEnsemble("empty ensemble".into()))?;
        let dim = first.state.dim();
        let mut total = T::zero();
        for m in &members {
            if m.state.dim() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    got: m.state.dim(),
                });
            }
            if !m.probability.is_finite() || m.probability < -tol || m.probability > T::one() + tol
            {
                return Err(Error::InvalidEnsemble(format!(
                    "probability {} outside [0, 1]",
                    to_f64(m.probability)
                )));
            }
            total += m.probability;
        }
        if (total - T::one()).abs() > tol {
            return Err(Error::InvalidEnsemble(format!(
                "probabilities sum to {}",
                to_f64(total)
            )));
        }
        Ok(Ensemble { members })
    }

    pub(crate) fn from_trusted(members: Vec<EnsembleMember<T>>) -> Self {
        Ensemble { members }
    }

    pub fn members(&self) -> &[EnsembleMember<T>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.members[0].state.dim()
    }

    /// Probability-weighted average of a pure-state functional.
    pub fn average<F: Fn(&PureState<T>) -> T>(&self, f: F) -> T {
        self.members
            .iter()
            .fold(T::zero(), |acc, m| acc + m.probability * f(&m.state))
    }
}

impl BipartiteSplit {
    pub fn new(dim_s: usize, dim_a: usize) -> Result<Self> {
        if dim_s == 0 || dim_a == 0 {
            return Err(Error::InvalidDimension(0));
        }
        Ok(BipartiteSplit { dim_s, dim_a })
    }

    pub fn total(&self) -> usize {
        self.dim_s * self.dim_a
    }

    pub fn check(&self, dim: usize) -> Result<()> {
        if dim != self.total() {
            return Err(Error::DimMismatch {
                expected: self.total(),
                got: dim,
            });
        }
        Ok(())
    }
}

/// `|ψ⟩⟨ψ|`.
pub fn pure_to_density<T: Real>(psi: &PureState<T>) -> DensityMatrix<T> {
    let a = psi.amplitudes();
    DensityMatrix::from_trusted(a * a.adjoint())
}

/// `Σ p_i |ψ_i⟩⟨ψ_i|`.
pub fn ensemble_to_density<T: Real>(ensemble: &Ensemble<T>) -> DensityMatrix<T> {
    let d = ensemble.dim();
    let mut acc = CMatrix::from_element(d, d, czero());
    for m in ensemble.members() {
        let a = m.state.amplitudes();
        acc += (a * a.adjoint()).map(|z| z * m.probability);
    }
    DensityMatrix::from_trusted(acc)
}

/// Zeroes the off-diagonal entries.
pub fn dephase<T: Real>(rho: &DensityMatrix<T>) -> DensityMatrix<T> {
    let d = rho.dim();
    let m = CMatrix::from_fn(d, d, |r, c| {
        if r == c {
            C::new(rho.matrix[(r, r)].re, T::zero())
        } else {
            czero()
        }
    });
    DensityMatrix::from_trusted(m)
}

/// Shannon entropy in bits of a probability vector.
pub fn shannon_entropy<T: Real>(probabilities: &[T]) -> T {
    probabilities
        .iter()
        .fold(T::zero(), |acc, &p| acc + entropy_term(p))
}

/// `-Σ λ log₂ λ` over the (clipped) spectrum.
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> T {
    shannon_entropy(&rho.eigenvalues())
}

/// Kronecker product `a ⊗ b`, S-major.
pub fn tensor<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> DensityMatrix<T> {
    DensityMatrix::from_trusted(a.matrix.kronecker(&b.matrix))
}

/// Reduced state of the kept factor.
pub fn partial_trace<T: Real>(
    rho: &DensityMatrix<T>,
    split: BipartiteSplit,
    keep: Subsystem,
) -> Result<DensityMatrix<T>> {
    split.check(rho.dim())?;
    Ok(DensityMatrix::from_trusted(partial_trace_matrix(
        &rho.matrix,
        split,
        keep,
    )))
}

pub(crate) fn partial_trace_matrix<T: Real>(
    m: &CMatrix<T>,
    split: BipartiteSplit,
    keep: Subsystem,
) -> CMatrix<T> {
    let (ds, da) = (split.dim_s, split.dim_a);
    match keep {
        Subsystem::S => CMatrix::from_fn(ds, ds, |i, j| {
            (0..da).fold(czero(), |acc, a| acc + m[(i * da + a, j * da + a)])
        }),
        Subsystem::A => CMatrix::from_fn(da, da, |a, b| {
            (0..ds).fold(czero(), |acc, i| acc + m[(i * da + a, i * da + b)])
        }),
    }
}

/// `|Ψ_d⟩ = Σ_j |j⟩ / √d`.
pub fn maximally_coherent_state<T: Real>(d: usize) -> Result<PureState<T>> {
    mcs_with_phases(d, &vec![T::zero(); d])
}

/// `Σ_j e^{iθ_j} |j⟩ / √d`.
pub fn mcs_with_phases<T: Real>(d: usize, phases: &[T]) -> Result<PureState<T>> {
    if d == 0 {
        return Err(Error::InvalidDimension(d));
    }
    if phases.len() != d {
        return Err(Error::DimMismatch {
            expected: d,
            got: phases.len(),
        });
    }
    let amp = T::one() / lit::<T>(d as f64).sqrt();
    let v = CVector::from_iterator(
        d,
        phases.iter().map(|&t| C::new(t.cos() * amp, t.sin() * amp)),
    );
    Ok(PureState { amplitudes: v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    fn m2(e: [(f64, f64); 4]) -> CMatrix<f64> {
        CMatrix::from_row_slice(2, 2, &e.map(|(r, i)| cplx(r, i)))
    }

    #[test]
    fn validate_accepts_maximally_mixed_and_plus() {
        let id = m2([(0.5, 0.0), (0.0, 0.0), (0.0, 0.0), (0.5, 0.0)]);
        assert!(validate_density(id, 1e-8).is_ok());
        let plus = m2([(0.5, 0.0), (0.5, 0.0), (0.5, 0.0), (0.5, 0.0)]);
        assert!(validate_density(plus, 1e-8).is_ok());
    }

    #[test]
    fn validate_rejects_negative_eigenvalue() {
        let bad = m2([(1.1, 0.0), (0.0, 0.0), (0.0, 0.0), (-0.1, 0.0)]);
        match validate_density(bad, 1e-8) {
            Err(Error::NotPositive { min_eigenvalue }) => {
                assert!((min_eigenvalue + 0.1).abs() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_asymmetry_and_trace() {
        let asym = m2([(0.5, 0.0), (0.2, 0.0), (0.0, 0.0), (0.5, 0.0)]);
        assert!(matches!(
            validate_density(asym, 1e-8),
            Err(Error::NotHermitian { .. })
        ));
        let tr = m2([(0.6, 0.0), (0.0, 0.0), (0.0, 0.0), (0.6, 0.0)]);
        assert!(matches!(
            validate_density(tr, 1e-8),
            Err(Error::TraceNotOne { .. })
        ));
        let nan = m2([(f64::NAN, 0.0), (0.0, 0.0), (0.0, 0.0), (0.5, 0.0)]);
        assert_eq!(validate_density(nan, 1e-8), Err(Error::NonFinite));
    }

    #[test]
    fn small_asymmetry_is_symmetrized() {
        let raw = m2([(0.5, 0.0), (0.1, 1e-10), (0.1, 0.0), (0.5, 0.0)]);
        let rho = validate_density(raw, 1e-8).unwrap();
        assert_eq!(rho.entry(0, 1), rho.entry(1, 0).conj());
    }

    #[test]
    fn projectors_of_simple_states() {
        let one = PureState::<f64>::basis(2, 0).unwrap();
        let p = pure_to_density(&one);
        assert_eq!(p.entry(0, 0), cplx(1.0, 0.0));
        assert_eq!(p.entry(1, 1), cplx(0.0, 0.0));

        let mcs = maximally_coherent_state::<f64>(2).unwrap();
        let p = pure_to_density(&mcs);
        for z in p.matrix().iter() {
            assert!((z - cplx(0.5, 0.0)).norm() < 1e-15);
        }

        let s = 0.5f64.sqrt();
        let psi =
            PureState::new(CVector::from_vec(vec![cplx(s, 0.0), cplx(0.0, s)]), 1e-12).unwrap();
        let p = pure_to_density(&psi);
        let expected = m2([(0.5, 0.0), (0.0, -0.5), (0.0, 0.5), (0.5, 0.0)]);
        assert!(linalg::max_abs_diff(p.matrix(), &expected) < 1e-15);
    }

    #[test]
    fn ensembles_to_density() {
        let e0 = PureState::<f64>::basis(2, 0).unwrap();
        let e1 = PureState::<f64>::basis(2, 1).unwrap();
        let single = Ensemble::new(
            vec![EnsembleMember {
                probability: 1.0,
                state: e0.clone(),
            }],
            1e-12,
        )
        .unwrap();
        let r = ensemble_to_density(&single);
        assert_eq!(r.entry(0, 0), cplx(1.0, 0.0));

        let half = DensityMatrix::<f64>::maximally_mixed(2).unwrap();
        let mixed = Ensemble::new(
            vec![
                EnsembleMember {
                    probability: 0.5,
                    state: e0,
                },
                EnsembleMember {
                    probability: 0.5,
                    state: e1,
                },
            ],
            1e-12,
        )
        .unwrap();
        assert!(linalg::max_abs_diff(ensemble_to_density(&mixed).matrix(), half.matrix()) < 1e-15);

        let plus = mcs_with_phases::<f64>(2, &[0.0, 0.0]).unwrap();
        let minus = mcs_with_phases::<f64>(2, &[0.0, std::f64::consts::PI]).unwrap();
        let pm = Ensemble::new(
            vec![
                EnsembleMember {
                    probability: 0.5,
                    state: plus,
                },
                EnsembleMember {
                    probability: 0.5,
                    state: minus,
                },
            ],
            1e-12,
        )
        .unwrap();
        assert!(linalg::max_abs_diff(ensemble_to_density(&pm).matrix(), half.matrix()) < 1e-15);
    }

    #[test]
    fn ensemble_validation() {
        let e0 = PureState::<f64>::basis(2, 0).unwrap();
        let e3 = PureState::<f64>::basis(3, 0).unwrap();
        let bad_sum = vec![EnsembleMember {
            probability: 0.7,
            state: e0.clone(),
        }];
        assert!(matches!(
            Ensemble::new(bad_sum, 1e-10),
            Err(Error::InvalidEnsemble(_))
        ));
        let bad_dim = vec![
            EnsembleMember {
                probability: 0.5,
                state: e0,
            },
            EnsembleMember {
                probability: 0.5,
                state: e3,
            },
        ];
        assert!(matches!(
            Ensemble::new(bad_dim, 1e-10),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn dephasing_examples() {
        let plus = pure_to_density(&maximally_coherent_state::<f64>(2).unwrap());
        let half = DensityMatrix::<f64>::maximally_mixed(2).unwrap();
        assert!(linalg::max_abs_diff(dephase(&plus).matrix(), half.matrix()) < 1e-15);

        let mcs3 = pure_to_density(&maximally_coherent_state::<f64>(3).unwrap());
        let third = DensityMatrix::<f64>::maximally_mixed(3).unwrap();
        assert!(linalg::max_abs_diff(dephase(&mcs3).matrix(), third.matrix()) < 1e-15);

        let diag = DensityMatrix::diagonal(&[0.2, 0.3, 0.5]).unwrap();
        assert_eq!(dephase(&diag), diag);
    }

    #[test]
    fn entropy_examples() {
        let pure = pure_to_density(&random_pure::<f64>(3, 4));
        assert!(von_neumann_entropy(&pure).abs() < 1e-12);
        for d in 1..=8 {
            let mixed = DensityMatrix::<f64>::maximally_mixed(d).unwrap();
            assert!((von_neumann_entropy(&mixed) - (d as f64).log2()).abs() < 1e-12);
        }
    }

    #[test]
    fn tensor_examples() {
        let half = DensityMatrix::<f64>::maximally_mixed(2).unwrap();
        let quarter = DensityMatrix::<f64>::maximally_mixed(4).unwrap();
        assert!(linalg::max_abs_diff(tensor(&half, &half).matrix(), quarter.matrix()) < 1e-15);

        let one = pure_to_density(&PureState::<f64>::basis(2, 0).unwrap());
        let p = 0.3;
        let out = tensor(&DensityMatrix::diagonal(&[p, 1.0 - p]).unwrap(), &one);
        let expected = DensityMatrix::diagonal(&[p, 0.0, 1.0 - p, 0.0]).unwrap();
        assert!(linalg::max_abs_diff(out.matrix(), expected.matrix()) < 1e-15);

        let plus = pure_to_density(&maximally_coherent_state::<f64>(2).unwrap());
        let prod = tensor(&plus, &one);
        assert_eq!(prod.rank(), 1);
    }

    #[test]
    fn partial_trace_examples() {
        let s = 0.5f64.sqrt();
        let bell = PureState::new(
            CVector::from_vec(vec![
                cplx(s, 0.0),
                cplx(0.0, 0.0),
                cplx(0.0, 0.0),
                cplx(s, 0.0),
            ]),
            1e-12,
        )
        .unwrap();
        let split = BipartiteSplit::new(2, 2).unwrap();
        let red = partial_trace(&pure_to_density(&bell), split, Subsystem::S).unwrap();
        let half = DensityMatrix::<f64>::maximally_mixed(2).unwrap();
        assert!(linalg::max_abs_diff(red.matrix(), half.matrix()) < 1e-15);

        let bad = BipartiteSplit::new(3, 2).unwrap();
        assert!(matches!(
            partial_trace(&pure_to_density(&bell), bad, Subsystem::S),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    #[allow(clippy::needless_range_loop)] // index form mirrors the sum being checked
    fn schmidt_form_reduces_to_populations() {
        // brute-force contraction over the ancilla index
        let a = [cplx(0.6, 0.0), cplx(0.0, 0.48), cplx(-0.64, 0.0)];
        let norm: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let d = 3;
        let mut v = CVector::from_element(d * d, cplx(0.0, 0.0));
        for i in 0..d {
            v[i * d + i] = a[i] / norm;
        }
        let psi = PureState::new(v, 1e-12).unwrap();
        let full = pure_to_density(&psi);
        let split = BipartiteSplit::new(d, d).unwrap();
        let red = partial_trace(&full, split, Subsystem::S).unwrap();
        for i in 0..d {
            for j in 0..d {
                let mut oracle = cplx(0.0, 0.0);
                for k in 0..d {
                    oracle += full.entry(i * d + k, j * d + k);
                }
                assert!((red.entry(i, j) - oracle).norm() < 1e-15);
            }
            assert!((red.entry(i, i).re - (a[i] / norm).norm_sqr()).abs() < 1e-15);
        }
    }

    #[test]
    fn mcs_constructors() {
        let m = maximally_coherent_state::<f64>(4).unwrap();
        assert!(m
            .amplitudes()
            .iter()
            .all(|z| (z - cplx(0.5, 0.0)).norm() < 1e-15));
        let one = maximally_coherent_state::<f64>(1).unwrap();
        assert_eq!(one.amplitudes()[0], cplx(1.0, 0.0));
        let flipped = mcs_with_phases::<f64>(2, &[0.0, std::f64::consts::PI]).unwrap();
        assert!((flipped.amplitudes()[1] - cplx(-(0.5f64.sqrt()), 0.0)).norm() < 1e-15);
        assert_eq!(
            mcs_with_phases::<f64>(3, &[0.0; 3]).unwrap(),
            maximally_coherent_state::<f64>(3).unwrap()
        );
        let phased = mcs_with_phases::<f64>(5, &[0.1, 1.0, 2.0, 3.0, 6.0]).unwrap();
        for z in phased.amplitudes().iter() {
            assert!((z.norm() - 0.2f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn works_in_single_precision() {
        let rho = random_density::<f32>(3, 2, 11).unwrap();
        assert!(validate_density(rho.matrix().clone(), 1e-5).is_ok());
        let s = von_neumann_entropy(&dephase(&rho));
        assert!(s >= von_neumann_entropy(&rho) - 1e-5);
    }
}
