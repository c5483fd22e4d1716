//! Symbol-level constructive-interference precoding for multi-user
//! massive-MISO downlinks with an SVD-phase analog stage and 1-bit DACs,
//! together with zero-forcing baselines and a Monte Carlo BER engine.
//!
//! The signal path mirrors the hybrid architecture: a channel realization
//! `H` (K x Nt) feeds a constant-modulus analog precoder `F_RF` (Nt x N_RF)
//! built from the phases of the channel's right-singular vectors; the
//! digital stage designs the N_RF-dimensional transmit vector per symbol
//! slot. The CI design maximizes the minimum distance of every user's
//! noiseless received signal to its PSK detection thresholds, solved as a
//! small linear program over the relaxed 1-bit alphabet box and then sign
//! quantized.
//!
//! All numeric code is generic over the real scalar type (see
//! [`scalar::Scalar`]); `f64` aliases for the common types live at the
//! crate root.

pub mod analog;
pub mod baseline;
pub mod channel;
pub mod ciprecode;
pub mod constellation;
pub mod error;
pub mod lpsolve;
pub mod numlin;
pub mod rng;
pub mod scalar;
pub mod simulate;

pub use error::{Error, Result};
pub use num_complex::Complex;
pub use rng::RngStream;
pub use scalar::Scalar;

/// `f64` complex scalar.
pub type C64 = Complex<f64>;
/// `f32` complex scalar.
pub type C32 = Complex<f32>;
/// `f64` dense complex matrix.
pub type CMat64 = numlin::CMat<f64>;
/// `f32` dense complex matrix.
pub type CMat32 = numlin::CMat<f32>;
/// `f64` simulation config, the precision the CLI runs at.
pub type SimConfig64 = simulate::SimConfig<f64>;
/// `f64` LP problem.
pub type LpProblem64 = lpsolve::LpProblem<f64>;
