//! FDA-MIMO integrated sensing and communication core.
//!
//! The crate models a frequency-diverse-array MIMO base station that senses
//! multiple point targets while embedding communication bits into complex
//! coefficients (CCIE). It provides:
//!
//! - [`array_model`]: steering-vector algebra and the frequency-offset
//!   design check that pushes the range ambiguity beyond the sensing range.
//! - [`ccie`]: the CCIE transmitter (index + QAM bits) and the maximum
//!   likelihood receiver.
//! - [`scene`]: snapshot synthesis for sensing CPIs and communication
//!   receive vectors, with symbol compensation.
//! - [`sensing`]: sample covariance, the joint 2-D spatial-spectrum search,
//!   its low-complexity Schur-complement variant, and LS velocity
//!   estimation.
//! - [`theory`]: closed-form Fisher information / CRBs, the BER upper
//!   bound, multiplication-count complexity models and bits-per-pulse
//!   rates.
//!
//! All floating-point math is generic over [`scalar::Scalar`]; `f64`
//! aliases are exported at the crate root.

pub mod array_model;
pub mod ccie;
pub mod linalg;
pub mod scalar;
pub mod scene;
pub mod sensing;
pub mod theory;

pub use scalar::{speed_of_light, Scalar};

use thiserror::Error as ThisError;

/// Crate-wide error type.
#[derive(Debug, ThisError)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("coefficient generation failed after {retries} retries (J={j}, L={l})")]
    CoefficientRetries { j: usize, l: usize, retries: usize },
}

/// Default scalar used by the CLI and most tests.
pub type Real = f64;
/// Complex sample in the default precision.
pub type C64 = num_complex::Complex<f64>;
/// Single-precision complex sample.
pub type C32 = num_complex::Complex<f32>;

/// `ArrayConfig` in the default precision.
pub type ArrayConfig64 = array_model::ArrayConfig<f64>;
/// `CcieConfig` in the default precision.
pub type CcieConfig64 = ccie::CcieConfig<f64>;
/// `Scene` in the default precision.
pub type Scene64 = scene::Scene<f64>;
