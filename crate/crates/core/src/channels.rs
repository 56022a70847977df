//! Kraus channels, incoherence certification, and the incoherent unitaries
//! used to convert coherence into entanglement.

use rand::seq::SliceRandom;
use rand::Rng;

use nalgebra::ComplexField;

use crate::error::{Error, Result};
use crate::linalg::max_abs_diff;
use crate::scalar::{cone, cplx, czero, lit, to_f64, CMatrix, CVector, Real};
use crate::statespace::{
    pure_to_density, seeded_rng, tensor, validate_density, DensityMatrix, PureState, DEFAULT_TOL,
    PRUNE_PROBABILITY,
};

/// Validated Kraus representation of a CPTP map.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel<T: Real> {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<CMatrix<T>>,
    incoherent: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome<T: Real> {
    pub probability: T,
    pub state: DensityMatrix<T>,
}

/// Outcomes `(p_n, ρ_n)` of a selective measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeList<T: Real> {
    pub outcomes: Vec<Outcome<T>>,
}

/// Checks `Σ K†K = I` within `tol` and sets the incoherence flag iff every
/// Kraus operator has at most one entry of modulus above `tol` per column.
pub fn validate_icptp<T: Real>(kraus: Vec<CMatrix<T>>, tol: T) -> Result<KrausChannel<T>> {
    let first = kraus
        .first()
        .ok_or_else(|| Error::ShapeMismatch("no Kraus operators".into()))?;
    let (dim_out, dim_in) = first.shape();
    if dim_in == 0 || dim_out == 0 {
        return Err(Error::ShapeMismatch("empty Kraus operator".into()));
    }
    for (n, k) in kraus.iter().enumerate() {
        if k.shape() != (dim_out, dim_in) {
            return Err(Error::ShapeMismatch(format!(
                "operator {n} is {}x{}, expected {dim_out}x{dim_in}",
                k.nrows(),
                k.ncols()
            )));
        }
        if k.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
    }
    let sum = kraus
        .iter()
        .fold(CMatrix::from_element(dim_in, dim_in, czero()), |acc, k| {
            acc + k.adjoint() * k
        });
    let deviation = max_abs_diff(&sum, &CMatrix::identity(dim_in, dim_in));
    if deviation > tol {
        return Err(Error::NotComplete {
            deviation: to_f64(deviation),
        });
    }
    let incoherent = kraus.iter().all(|k| {
        k.column_iter()
            .all(|col| col.iter().filter(|z| z.modulus() > tol).count() <= 1)
    });
    Ok(KrausChannel {
        dim_in,
        dim_out,
        kraus,
        incoherent,
    })
}

impl<T: Real> KrausChannel<T> {
    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[CMatrix<T>] {
        &self.kraus
    }

    pub fn is_incoherent(&self) -> bool {
        self.incoherent
    }

    /// Single-Kraus channel; fails unless `u` is unitary within `tol`.
    pub fn unitary(u: CMatrix<T>, tol: T) -> Result<Self> {
        validate_icptp(vec![u], tol)
    }

    pub fn identity(d: usize) -> Self {
        KrausChannel {
            dim_in: d,
            dim_out: d,
            kraus: vec![CMatrix::identity(d, d)],
            incoherent: true,
        }
    }

    /// Projective measurement in the reference basis, `{|i⟩⟨i|}`.
    pub fn dephasing(d: usize) -> Self {
        let kraus = (0..d)
            .map(|i| {
                let mut k = CMatrix::from_element(d, d, czero());
                k[(i, i)] = cone();
                k
            })
            .collect();
        KrausChannel {
            dim_in: d,
            dim_out: d,
            kraus,
            incoherent: true,
        }
    }

    fn check_input(&self, dim: usize) -> Result<()> {
        if dim != self.dim_in {
            return Err(Error::DimMismatch {
                expected: self.dim_in,
                got: dim,
            });
        }
        Ok(())
    }

    /// `K ψ` for each Kraus operator with nonvanishing image, as
    /// `(p_n, |ψ_n⟩)`.
    pub fn apply_pure_selective(&self, psi: &PureState<T>) -> Result<Vec<(T, PureState<T>)>> {
        self.check_input(psi.dim())?;
        let cutoff = lit::<T>(PRUNE_PROBABILITY);
        let mut out = Vec::new();
        for k in &self.kraus {
            let v: CVector<T> = k * psi.amplitudes();
            let p = v.norm_squared();
            if p >= cutoff {
                out.push((p, PureState::from_unnormalized(v)?));
            }
        }
        Ok(out)
    }
}

/// `Σ K ρ K†`, revalidated.
pub fn apply_channel<T: Real>(
    ch: &KrausChannel<T>,
    rho: &DensityMatrix<T>,
) -> Result<DensityMatrix<T>> {
    ch.check_input(rho.dim())?;
    let out = ch.kraus.iter().fold(
        CMatrix::from_element(ch.dim_out, ch.dim_out, czero()),
        |acc, k| acc + k * rho.matrix() * k.adjoint(),
    );
    validate_density(out, lit(DEFAULT_TOL))
}

/// `p_n = tr[K_n ρ K_n†]`, `ρ_n = K_n ρ K_n† / p_n`; outcomes below
/// `PRUNE_PROBABILITY` are dropped.
pub fn selective_outcomes<T: Real>(
    ch: &KrausChannel<T>,
    rho: &DensityMatrix<T>,
) -> Result<OutcomeList<T>> {
    ch.check_input(rho.dim())?;
    let cutoff = lit::<T>(PRUNE_PROBABILITY);
    let mut outcomes = Vec::new();
    for k in &ch.kraus {
        let m = k * rho.matrix() * k.adjoint();
        let p = m.trace().re;
        if p < cutoff {
            continue;
        }
        let state = validate_density(m.map(|z| z / p), lit(DEFAULT_TOL))?;
        outcomes.push(Outcome {
            probability: p,
            state,
        });
    }
    Ok(OutcomeList { outcomes })
}

impl<T: Real> OutcomeList<T> {
    /// `Σ p_n ρ_n`.
    pub fn average_state(&self) -> Option<CMatrix<T>> {
        let d = self.outcomes.first()?.state.dim();
        Some(
            self.outcomes
                .iter()
                .fold(CMatrix::from_element(d, d, czero()), |acc, o| {
                    acc + o.state.matrix().map(|z| z * o.probability)
                }),
        )
    }

    pub fn total_probability(&self) -> T {
        self.outcomes
            .iter()
            .fold(T::zero(), |a, o| a + o.probability)
    }
}

/// Two-qubit CNOT, S controls, A is the target.
pub fn cnot_gate<T: Real>() -> KrausChannel<T> {
    generalized_cnot(2, 2).expect("2 >= 2")
}

/// `U = Σ_{i,j≤d} |i⟩⟨i| ⊗ |i⊕(j-1)⟩⟨j| + Σ_{i≤d, j>d} |i⟩⟨i| ⊗ |j⟩⟨j|` on
/// `d x d_A`, with `i⊕(j-1) = ((i + j - 2) mod d) + 1` on labels `1..=d`.
pub fn generalized_cnot<T: Real>(d: usize, dim_a: usize) -> Result<KrausChannel<T>> {
    if d == 0 {
        return Err(Error::InvalidDimension(d));
    }
    if dim_a < d {
        return Err(Error::AncillaTooSmall { dim_s: d, dim_a });
    }
    let n = d * dim_a;
    let mut u = CMatrix::from_element(n, n, czero());
    // 0-based: column (i, j) maps to row (i, (i + j) mod d) for j < d
    for i in 0..d {
        for j in 0..dim_a {
            let target = if j < d { (i + j) % d } else { j };
            u[(i * dim_a + target, i * dim_a + j)] = cone();
        }
    }
    Ok(KrausChannel {
        dim_in: n,
        dim_out: n,
        kraus: vec![u],
        incoherent: true,
    })
}

/// Ancilla reference state `|1⟩⟨1|` of dimension `dim_a`.
pub fn ancilla_reference<T: Real>(dim_a: usize) -> Result<DensityMatrix<T>> {
    Ok(pure_to_density(&PureState::basis(dim_a, 0)?))
}

/// `ρ ⊗ |1⟩⟨1|^A`.
pub fn attach_ancilla<T: Real>(rho: &DensityMatrix<T>, dim_a: usize) -> Result<DensityMatrix<T>> {
    if dim_a == 0 {
        return Err(Error::InvalidDimension(0));
    }
    Ok(tensor(rho, &ancilla_reference(dim_a)?))
}

/// `|ψ⟩ ⊗ |1⟩^A`.
pub fn attach_ancilla_pure<T: Real>(psi: &PureState<T>, dim_a: usize) -> Result<PureState<T>> {
    if dim_a == 0 {
        return Err(Error::InvalidDimension(0));
    }
    Ok(psi.tensor(&PureState::basis(dim_a, 0)?))
}

/// Random incoherent channel with `n_kraus` operators on dimension `d`.
///
/// Operator `n` sends column `c` to row `f_n(c)` with a complex amplitude
/// `a_{n,c}`, where `f_n` is a uniformly random permutation. Amplitudes are
/// rescaled per column so that `Σ_n |a_{n,c}|² = 1`; with injective `f_n`
/// this makes `Σ K†K = I` exact. When `n_kraus > 1` each amplitude is
/// dropped to zero with probability 1/4 (at least one survives per column),
/// so some operators have empty columns.
pub fn random_incoherent_channel<T: Real>(
    d: usize,
    n_kraus: usize,
    seed: u64,
) -> Result<KrausChannel<T>> {
    random_incoherent_channel_with(d, n_kraus, &mut seeded_rng(seed, 0))
}

pub fn random_incoherent_channel_with<T: Real, R: Rng + ?Sized>(
    d: usize,
    n_kraus: usize,
    rng: &mut R,
) -> Result<KrausChannel<T>> {
    if d == 0 {
        return Err(Error::InvalidDimension(d));
    }
    if n_kraus == 0 {
        return Err(Error::BadParams("need at least one Kraus operator".into()));
    }
    let maps: Vec<Vec<usize>> = (0..n_kraus)
        .map(|_| {
            let mut f: Vec<usize> = (0..d).collect();
            f.shuffle(rng);
            f
        })
        .collect();
    let mut kraus = vec![CMatrix::<T>::from_element(d, d, czero()); n_kraus];
    for c in 0..d {
        let mut mags: Vec<f64> = (0..n_kraus).map(|_| 1.0 - rng.random::<f64>()).collect();
        if n_kraus > 1 {
            let keep = rng.random_range(0..n_kraus);
            for (n, m) in mags.iter_mut().enumerate() {
                if n != keep && rng.random::<f64>() < 0.25 {
                    *m = 0.0;
                }
            }
        }
        let norm = mags.iter().map(|m| m * m).sum::<f64>().sqrt();
        for ((k, f), m) in kraus.iter_mut().zip(&maps).zip(&mags) {
            let phase = rng.random::<f64>() * std::f64::consts::TAU;
            let mag = m / norm;
            k[(f[c], c)] = cplx(lit(mag * phase.cos()), lit(mag * phase.sin()));
        }
    }
    validate_icptp(kraus, lit(1e-10))
}
