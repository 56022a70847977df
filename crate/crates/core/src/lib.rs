//! Coherence concurrence and related coherence and entanglement quantifiers.
//!
//! The numerical core is generic over the real scalar ([`Real`]: `f32` or
//! `f64`); the `*F64` aliases below are the types the CLI and the verification
//! harness use.

pub mod channels;
pub mod convexroof;
pub mod entanglement;
pub mod error;
pub mod gellmann;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod scalar;
pub mod statespace;
pub mod theorems;

pub use error::{Error, Result};
pub use scalar::{lit, CMatrix, CVector, Real, C};
pub use statespace::{
    BipartiteSplit, DensityMatrix, Ensemble, EnsembleMember, PureState, Subsystem,
};

pub type DensityMatrixF64 = statespace::DensityMatrix<f64>;
pub type DensityMatrixF32 = statespace::DensityMatrix<f32>;
pub type PureStateF64 = statespace::PureState<f64>;
pub type PureStateF32 = statespace::PureState<f32>;
pub type EnsembleF64 = statespace::Ensemble<f64>;
pub type KrausChannelF64 = channels::KrausChannel<f64>;
pub type KrausChannelF32 = channels::KrausChannel<f32>;
pub type RoofResultF64 = convexroof::RoofResult<f64>;
