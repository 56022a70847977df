//! Closed-form coherence quantifiers in the fixed reference basis.

use std::fmt;
use std::str::FromStr;

use nalgebra::ComplexField;

use crate::error::{Error, Result};
use crate::gellmann::{index_pairs, symmetric_ggm};
use crate::linalg::{self, psd_factor};
use crate::scalar::{entropy_term, lit, to_f64, Real};
use crate::statespace::{
    dephase, pure_to_density, shannon_entropy, von_neumann_entropy, DensityMatrix, PureState,
};

/// How a reported value relates to the true quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certification {
    Exact,
    UpperBound,
    LowerBound,
}

impl fmt::Display for Certification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certification::Exact => "exact",
            Certification::UpperBound => "upper-bound",
            Certification::LowerBound => "lower-bound",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    L1,
    RelativeEntropy,
    PureCoherenceConcurrence,
    PureIntrinsicRandomness,
    QubitCoherenceConcurrence,
    QubitIntrinsicRandomness,
}

impl MeasureKind {
    pub fn tag(&self) -> &'static str {
        match self {
            MeasureKind::L1 => "l1",
            MeasureKind::RelativeEntropy => "relent",
            MeasureKind::PureCoherenceConcurrence => "cc-pure",
            MeasureKind::PureIntrinsicRandomness => "ri-pure",
            MeasureKind::QubitCoherenceConcurrence => "qubit-cc",
            MeasureKind::QubitIntrinsicRandomness => "qubit-ri",
        }
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "l1" => MeasureKind::L1,
            "relent" => MeasureKind::RelativeEntropy,
            "cc-pure" => MeasureKind::PureCoherenceConcurrence,
            "ri-pure" => MeasureKind::PureIntrinsicRandomness,
            "qubit-cc" => MeasureKind::QubitCoherenceConcurrence,
            "qubit-ri" => MeasureKind::QubitIntrinsicRandomness,
            other => return Err(Error::BadParams(format!("unknown measure '{other}'"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport<T: Real> {
    pub measure: MeasureKind,
    pub value: T,
    pub certification: Certification,
    pub detail: String,
}

/// `Σ_{i≠j} |ρ_ij|`.
pub fn l1_coherence<T: Real>(rho: &DensityMatrix<T>) -> T {
    let d = rho.dim();
    let mut s = T::zero();
    for r in 0..d {
        for c in 0..d {
            if r != c {
                s += rho.entry(r, c).modulus();
            }
        }
    }
    s
}

/// Square roots of the two largest eigenvalues of `ρ Λ_s^{jk} ρ* Λ_s^{jk}`
/// (1-based labels), nonincreasing.
///
/// With `ρ = F F†` the nonzero spectrum of `ρΛρ*Λ` equals that of `N N†` for
/// `N = F† Λ F*`, so the square roots are the singular values of `N`. This
/// avoids taking square roots of eigenvalues that are zero up to rounding.
pub fn ggm_pair_roots<T: Real>(rho: &DensityMatrix<T>, j: usize, k: usize) -> Result<(T, T)> {
    let (_, f) = psd_factor(rho.matrix());
    pair_roots(&f, rho.dim(), j, k)
}

fn pair_roots<T: Real>(f: &crate::CMatrix<T>, d: usize, j: usize, k: usize) -> Result<(T, T)> {
    let lambda = symmetric_ggm::<T>(d, j, k)?.matrix;
    let n = f.adjoint() * lambda * linalg::conj(f);
    let s = linalg::singular_values(&n);
    let first = s.first().copied().unwrap_or_else(T::zero);
    let second = s.get(1).copied().unwrap_or_else(T::zero);
    Ok((first, second))
}

/// `Σ_{j<k} |√η₁ - √η₂|` over the symmetric generators.
pub fn l1_coherence_via_ggm<T: Real>(rho: &DensityMatrix<T>) -> T {
    let d = rho.dim();
    let (_, f) = psd_factor(rho.matrix());
    index_pairs(d).fold(T::zero(), |acc, (j, k)| {
        let (a, b) = pair_roots(&f, d, j, k).expect("pairs from index_pairs are ordered");
        acc + (a - b).abs()
    })
}

/// `S(Δ(ρ)) - S(ρ)` in bits, floored at zero.
pub fn relative_entropy_coherence<T: Real>(rho: &DensityMatrix<T>) -> T {
    let v = von_neumann_entropy(&dephase(rho)) - von_neumann_entropy(rho);
    if v < T::zero() {
        T::zero()
    } else {
        v
    }
}

/// `Σ_{j<k} |⟨ψ|Λ_s^{jk}|ψ*⟩|`.
pub fn pure_coherence_concurrence<T: Real>(psi: &PureState<T>) -> T {
    let d = psi.dim();
    let a = psi.amplitudes();
    let a_conj = psi.conj();
    index_pairs(d).fold(T::zero(), |acc, (j, k)| {
        let g = symmetric_ggm::<T>(d, j, k).expect("ordered pair").matrix;
        let overlap = a.dotc(&(g * a_conj.amplitudes()));
        acc + overlap.modulus()
    })
}

/// Shannon entropy of the populations, in bits.
pub fn pure_intrinsic_randomness<T: Real>(psi: &PureState<T>) -> T {
    shannon_entropy(&psi.populations())
}

/// Binary entropy `H((1 + √(1 - c²)) / 2)`.
pub fn binary_entropy_of_concurrence<T: Real>(c: T) -> Result<T> {
    let slack = lit::<T>(1e-12);
    if !c.is_finite() || c < -slack || c > T::one() + slack {
        return Err(Error::OutOfRange(to_f64(c)));
    }
    let c = c.clamp(T::zero(), T::one());
    let x = (T::one() + (T::one() - c * c).max(T::zero()).sqrt()) * lit::<T>(0.5);
    Ok(entropy_term(x) + entropy_term(T::one() - x))
}

fn require_qubit<T: Real>(rho: &DensityMatrix<T>) -> Result<()> {
    if rho.dim() != 2 {
        return Err(Error::DimMismatch {
            expected: 2,
            got: rho.dim(),
        });
    }
    Ok(())
}

/// `2|ρ₁₂|`.
pub fn qubit_coherence_concurrence<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    require_qubit(rho)?;
    Ok(lit::<T>(2.0) * rho.entry(0, 1).modulus())
}

/// `H((1 + √(1 - C²)) / 2)` with `C = 2|ρ₁₂|`.
pub fn qubit_intrinsic_randomness<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let c = qubit_coherence_concurrence(rho)?.min(T::one());
    binary_entropy_of_concurrence(c)
}

/// Largest off-diagonal modulus at most `tol`.
pub fn is_incoherent<T: Real>(rho: &DensityMatrix<T>, tol: T) -> bool {
    max_off_diagonal(rho) <= tol
}

pub fn max_off_diagonal<T: Real>(rho: &DensityMatrix<T>) -> T {
    let d = rho.dim();
    let mut m = T::zero();
    for r in 0..d {
        for c in 0..d {
            if r != c {
                m = m.max(rho.entry(r, c).modulus());
            }
        }
    }
    m
}

/// Every amplitude modulus within `tol` of `1/√d`.
pub fn is_mcs<T: Real>(psi: &PureState<T>, tol: T) -> bool {
    let target = T::one() / lit::<T>(psi.dim() as f64).sqrt();
    psi.amplitudes()
        .iter()
        .all(|z| (z.modulus() - target).abs() <= tol)
}

/// Evaluates one of the closed-form measures on a density matrix. The
/// pure-state measures require a rank-one input (within `pure_tol`).
pub fn measure_report<T: Real>(
    rho: &DensityMatrix<T>,
    kind: MeasureKind,
    pure_tol: T,
) -> Result<MeasureReport<T>> {
    let as_pure = || {
        rho.as_pure(pure_tol)
            .ok_or_else(|| Error::BadParams(format!("measure '{}' needs a pure state", kind.tag())))
    };
    let (value, detail) = match kind {
        MeasureKind::L1 => (l1_coherence(rho), String::new()),
        MeasureKind::RelativeEntropy => (relative_entropy_coherence(rho), "bits".to_string()),
        MeasureKind::PureCoherenceConcurrence => {
            (pure_coherence_concurrence(&as_pure()?), String::new())
        }
        MeasureKind::PureIntrinsicRandomness => {
            (pure_intrinsic_randomness(&as_pure()?), "bits".to_string())
        }
        MeasureKind::QubitCoherenceConcurrence => {
            (qubit_coherence_concurrence(rho)?, String::new())
        }
        MeasureKind::QubitIntrinsicRandomness => {
            (qubit_intrinsic_randomness(rho)?, "bits".to_string())
        }
    };
    Ok(MeasureReport {
        measure: kind,
        value,
        certification: Certification::Exact,
        detail,
    })
}

/// Convenience for pure inputs given as vectors.
pub fn pure_measure_report<T: Real>(
    psi: &PureState<T>,
    kind: MeasureKind,
) -> Result<MeasureReport<T>> {
    measure_report(&pure_to_density(psi), kind, lit(1e-8))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cplx, CMatrix, CVector};
    use crate::statespace::{
        maximally_coherent_state, mcs_with_phases, random_density, random_incoherent, random_pure,
    };

    fn qubit(p: f64, off: f64) -> DensityMatrix<f64> {
        DensityMatrix::new(CMatrix::from_row_slice(
            2,
            2,
            &[
                cplx(p, 0.0),
                cplx(off, 0.0),
                cplx(off, 0.0),
                cplx(1.0 - p, 0.0),
            ],
        ))
        .unwrap()
    }

    #[test]
    fn l1_examples() {
        assert_eq!(l1_coherence(&random_incoherent::<f64>(4, 3)), 0.0);
        for d in 1..=8 {
            let m = pure_to_density(&maximally_coherent_state::<f64>(d).unwrap());
            assert!((l1_coherence(&m) - (d as f64 - 1.0)).abs() < 1e-12);
        }
        assert!((l1_coherence(&qubit(0.5, 0.3)) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn pair_roots_match_closed_form() {
        let rho = random_density::<f64>(4, 3, 8).unwrap();
        for (j, k) in index_pairs(4) {
            let (a, b) = ggm_pair_roots(&rho, j, k).unwrap();
            let off = rho.entry(j - 1, k - 1).norm();
            let geo = (rho.entry(j - 1, j - 1).re * rho.entry(k - 1, k - 1).re).sqrt();
            assert!((a * a - (off + geo).powi(2)).abs() < 1e-12);
            assert!((b * b - (off - geo).powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn ggm_route_is_zero_on_diagonal_states() {
        let rho = random_incoherent::<f64>(5, 1);
        assert!(l1_coherence_via_ggm(&rho) < 1e-14);
    }

    #[test]
    fn ggm_route_matches_direct_sum() {
        for seed in 0..20 {
            let rho = random_density::<f64>(4, 4, seed).unwrap();
            assert!((l1_coherence_via_ggm(&rho) - l1_coherence(&rho)).abs() < 1e-9);
            let pure = random_density::<f64>(5, 1, seed).unwrap();
            assert!((l1_coherence_via_ggm(&pure) - l1_coherence(&pure)).abs() < 1e-9);
        }
    }

    #[test]
    fn relative_entropy_examples() {
        let plus = pure_to_density(&maximally_coherent_state::<f64>(2).unwrap());
        assert!((relative_entropy_coherence(&plus) - 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::<f64>::maximally_mixed(3).unwrap();
        assert!(relative_entropy_coherence(&mixed).abs() < 1e-12);
        for d in 2..=6 {
            let m = pure_to_density(&maximally_coherent_state::<f64>(d).unwrap());
            assert!((relative_entropy_coherence(&m) - (d as f64).log2()).abs() < 1e-10);
        }
    }

    #[test]
    fn pure_concurrence_examples() {
        for d in 2..=6 {
            let m = maximally_coherent_state::<f64>(d).unwrap();
            assert!((pure_coherence_concurrence(&m) - (d as f64 - 1.0)).abs() < 1e-12);
        }
        let p: f64 = 0.3;
        let psi = PureState::new(
            CVector::from_vec(vec![cplx(p.sqrt(), 0.0), cplx((1.0 - p).sqrt(), 0.0)]),
            1e-12,
        )
        .unwrap();
        assert!((pure_coherence_concurrence(&psi) - 2.0 * (p * (1.0 - p)).sqrt()).abs() < 1e-15);
        assert_eq!(
            pure_coherence_concurrence(&PureState::<f64>::basis(3, 1).unwrap()),
            0.0
        );
    }

    #[test]
    fn pure_randomness_examples() {
        for d in 2..=6 {
            let m = maximally_coherent_state::<f64>(d).unwrap();
            assert!((pure_intrinsic_randomness(&m) - (d as f64).log2()).abs() < 1e-12);
        }
        assert_eq!(
            pure_intrinsic_randomness(&PureState::<f64>::basis(3, 2).unwrap()),
            0.0
        );
        let psi = random_pure::<f64>(4, 9);
        let r = relative_entropy_coherence(&pure_to_density(&psi));
        assert!((pure_intrinsic_randomness(&psi) - r).abs() < 1e-10);
    }

    #[test]
    fn binary_entropy_values() {
        assert!((binary_entropy_of_concurrence(1.0f64).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(binary_entropy_of_concurrence(0.0f64).unwrap(), 0.0);
        let h09 = -0.9f64 * 0.9f64.log2() - 0.1 * 0.1f64.log2();
        assert!((binary_entropy_of_concurrence(0.6f64).unwrap() - h09).abs() < 1e-14);
        assert!((h09 - 0.468_995_593_589_281_2).abs() < 1e-15);
        assert!(matches!(
            binary_entropy_of_concurrence(1.5f64),
            Err(Error::OutOfRange(_))
        ));
        assert!(binary_entropy_of_concurrence(-0.1f64).is_err());
    }

    #[test]
    fn qubit_closed_forms() {
        assert!((qubit_coherence_concurrence(&qubit(0.5, 0.3)).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(qubit_coherence_concurrence(&qubit(0.3, 0.0)).unwrap(), 0.0);
        assert!((qubit_coherence_concurrence(&qubit(0.5, 0.5)).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(qubit_intrinsic_randomness(&qubit(0.4, 0.0)).unwrap(), 0.0);
        assert!((qubit_intrinsic_randomness(&qubit(0.5, 0.5)).unwrap() - 1.0).abs() < 1e-12);
        assert!(
            (qubit_intrinsic_randomness(&qubit(0.5, 0.3)).unwrap() - 0.468_995_593_589_281_2).abs()
                < 1e-12
        );
        let q3 = DensityMatrix::<f64>::maximally_mixed(3).unwrap();
        assert!(matches!(
            qubit_coherence_concurrence(&q3),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn classification_predicates() {
        assert!(is_incoherent(
            &DensityMatrix::<f64>::maximally_mixed(3).unwrap(),
            1e-12
        ));
        let plus = pure_to_density(&maximally_coherent_state::<f64>(2).unwrap());
        assert!(!is_incoherent(&plus, 1e-12));
        assert!(is_incoherent(&random_incoherent::<f64>(5, 4), 1e-12));

        let phased = mcs_with_phases::<f64>(3, &[0.3, 2.0, 5.0]).unwrap();
        assert!(is_mcs(&phased, 1e-12));
        assert!(!is_mcs(&PureState::<f64>::basis(2, 0).unwrap(), 1e-6));
        let uneven = PureState::new(
            CVector::from_vec(vec![cplx(0.6f64.sqrt(), 0.0), cplx(0.4f64.sqrt(), 0.0)]),
            1e-12,
        )
        .unwrap();
        assert!(!is_mcs(&uneven, 1e-6));
    }

    #[test]
    fn reports_require_the_right_input() {
        let mixed = random_density::<f64>(3, 3, 1).unwrap();
        assert!(measure_report(&mixed, MeasureKind::PureCoherenceConcurrence, 1e-8).is_err());
        let r = measure_report(&mixed, MeasureKind::L1, 1e-8).unwrap();
        assert_eq!(r.certification, Certification::Exact);
        let mcs = maximally_coherent_state::<f64>(3).unwrap();
        let r = pure_measure_report(&mcs, MeasureKind::PureCoherenceConcurrence).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10);
        assert_eq!(
            "qubit-ri".parse::<MeasureKind>().unwrap(),
            MeasureKind::QubitIntrinsicRandomness
        );
        assert!("nope".parse::<MeasureKind>().is_err());
    }
}
