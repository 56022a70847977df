//! Scalar abstraction shared by every numerical routine in the crate.

use nalgebra::{Complex, DMatrix, DVector, RealField};

/// Real scalar type the library is generic over (`f32` or `f64`).
///
/// Everything that needs a Hermitian eigensolver or an SVD goes through
/// nalgebra, so the bound is `RealField`; `ToPrimitive` is used for
/// reporting and for the log-base conversion in entropies.
pub trait Real: RealField + Copy + num_traits::ToPrimitive {}

impl Real for f32 {}
impl Real for f64 {}

/// Complex amplitude over `T`.
pub type C<T> = Complex<T>;
/// Dense complex matrix over `T`.
pub type CMatrix<T> = DMatrix<Complex<T>>;
/// Dense complex column vector over `T`.
pub type CVector<T> = DVector<Complex<T>>;

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    nalgebra::convert(x)
}

#[inline]
pub(crate) fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub(crate) fn cplx<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn czero<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn cone<T: Real>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

/// `log2(x)` for a positive real.
#[inline]
pub(crate) fn log2<T: Real>(x: T) -> T {
    x.ln() / T::ln_2()
}

/// `-p log2 p` with the `0 log 0 = 0` convention.
#[inline]
pub(crate) fn entropy_term<T: Real>(p: T) -> T {
    if p <= T::zero() {
        T::zero()
    } else {
        -p * log2(p)
    }
}
