//! Entanglement concurrence: pure bipartite states (reduced-purity and
//! 2x2-minor forms) and the two-qubit spin-flip formula.

use crate::error::{Error, Result};
use crate::linalg::{self, psd_factor};
use crate::scalar::{cplx, czero, lit, CMatrix, Real};
use crate::statespace::{
    partial_trace, pure_to_density, BipartiteSplit, DensityMatrix, PureState, Subsystem,
};

/// Square roots of the eigenvalues of `ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`,
/// nonincreasing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinFlipSpectrum<T: Real> {
    pub lambdas: [T; 4],
}

/// `√(2(1 - tr ρ_S²))`, clipped to `[0, √(2(1 - 1/min(d_S, d_A)))]`.
pub fn pure_concurrence<T: Real>(psi: &PureState<T>, split: BipartiteSplit) -> Result<T> {
    split.check(psi.dim())?;
    let reduced = partial_trace(&pure_to_density(psi), split, Subsystem::S)?;
    let purity = reduced.purity();
    let two = lit::<T>(2.0);
    let max = (two * (T::one() - T::one() / lit::<T>(split.dim_s.min(split.dim_a) as f64))).sqrt();
    let c = (two * (T::one() - purity)).max(T::zero()).sqrt();
    Ok(c.min(max))
}

/// `2 √(Σ_{i<j, k<l} |ψ_ik ψ_jl - ψ_il ψ_jk|²)` for an unnormalized
/// coefficient vector in S-major order.
pub(crate) fn minor_sum<T: Real>(v: &[crate::C<T>], split: BipartiteSplit) -> T {
    let (ds, da) = (split.dim_s, split.dim_a);
    let mut s = T::zero();
    for i in 0..ds {
        for j in (i + 1)..ds {
            for k in 0..da {
                for l in (k + 1)..da {
                    let m = v[i * da + k] * v[j * da + l] - v[i * da + l] * v[j * da + k];
                    s += m.norm_sqr();
                }
            }
        }
    }
    s
}

pub fn pure_concurrence_determinant_form<T: Real>(
    psi: &PureState<T>,
    split: BipartiteSplit,
) -> Result<T> {
    split.check(psi.dim())?;
    let v: Vec<_> = psi.amplitudes().iter().copied().collect();
    Ok(lit::<T>(2.0) * minor_sum(&v, split).sqrt())
}

fn require_two_qubits<T: Real>(rho: &DensityMatrix<T>) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::DimMismatch {
            expected: 4,
            got: rho.dim(),
        });
    }
    Ok(())
}

/// `σ_y ⊗ σ_y` in the S-major two-qubit basis.
pub fn sigma_yy<T: Real>() -> CMatrix<T> {
    let mut m = CMatrix::from_element(4, 4, czero());
    // σ_y ⊗ σ_y = antidiag(-1, 1, 1, -1)
    m[(0, 3)] = cplx(-T::one(), T::zero());
    m[(1, 2)] = cplx(T::one(), T::zero());
    m[(2, 1)] = cplx(T::one(), T::zero());
    m[(3, 0)] = cplx(-T::one(), T::zero());
    m
}

/// With `ρ = F F†`, the nonzero spectrum of `ρ Σ ρ* Σ` is that of `N N†`
/// with `N = F† Σ F*`; the square roots are the singular values of `N`.
pub fn spin_flip_spectrum<T: Real>(rho: &DensityMatrix<T>) -> Result<SpinFlipSpectrum<T>> {
    require_two_qubits(rho)?;
    let (_, f) = psd_factor(rho.matrix());
    let n = f.adjoint() * sigma_yy::<T>() * linalg::conj(&f);
    let s = linalg::singular_values(&n);
    let mut lambdas = [T::zero(); 4];
    for (slot, v) in lambdas.iter_mut().zip(s) {
        *slot = v.max(T::zero());
    }
    Ok(SpinFlipSpectrum { lambdas })
}

/// `max(λ₁ - λ₂ - λ₃ - λ₄, 0)`.
pub fn wootters_concurrence<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let l = spin_flip_spectrum(rho)?.lambdas;
    Ok((l[0] - l[1] - l[2] - l[3]).max(T::zero()).min(T::one()))
}
