//! Bell-inequality violations for two- and three-mode continuous-variable
//! states: Gaussian covariance-matrix states, a conditionally prepared
//! non-Gaussian state, and a truncated Fock-space oracle that cross-checks
//! every closed form.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar for the common cases.

pub mod bell;
pub mod conditional;
pub mod dp;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod homodyne;
pub mod linalg;
pub mod optim;
pub mod ps;
pub mod scalar;
pub mod special;

pub use bell::{BellValue, Settings};
pub use error::{Error, Result};
pub use scalar::{Complex, Real};

pub type GaussianStateF64 = gaussian::GaussianState<f64>;
pub type GaussianStateF32 = gaussian::GaussianState<f32>;
pub type TripartitePhotonNumbersF64 = gaussian::TripartitePhotonNumbers<f64>;
pub type TripartitePhotonNumbersF32 = gaussian::TripartitePhotonNumbers<f32>;
pub type ConditionalParamsF64 = conditional::ConditionalParams<f64>;
pub type ConditionalParamsF32 = conditional::ConditionalParams<f32>;
pub type DpSettingsF64 = dp::DpSettings<f64>;
pub type DpSettingsF32 = dp::DpSettings<f32>;
pub type PsSettingsF64 = ps::PsSettings<f64>;
pub type PsSettingsF32 = ps::PsSettings<f32>;
pub type PsCoefficientsF64 = ps::PsCoefficients<f64>;
pub type PsCoefficientsF32 = ps::PsCoefficients<f32>;
pub type BellValueF64 = bell::BellValue<f64>;
pub type BellValueF32 = bell::BellValue<f32>;
pub type MatrixF64 = linalg::Matrix<f64>;
pub type MatrixF32 = linalg::Matrix<f32>;
pub type ComplexF64 = Complex<f64>;
pub type ComplexF32 = Complex<f32>;
