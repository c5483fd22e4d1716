//! Zero-forcing reference precoders: hybrid ZF with 1-bit DACs, hybrid ZF
//! with ideal DACs, and fully-digital ZF. All of them feed the same
//! power-normalized transmit chain as the CI scheme so BER comparisons stay
//! on identical power accounting.

use num_complex::Complex;

use crate::channel::ChannelRealization;
use crate::ciprecode::{quantize_one_bit, QuantizedSignal};
use crate::error::Result;
use crate::numlin::{pinv_right, CMat};
use crate::scalar::Scalar;

/// Channel-inverting precoder `W = H^H (H H^H)^{-1}`; `H W = I`, so each
/// user sees only its own symbol before quantization.
#[derive(Debug, Clone)]
pub struct ZfPrecoder<T> {
    w: CMat<T>,
}

impl<T: Scalar> ZfPrecoder<T> {
    pub fn new(h_eff: &CMat<T>) -> Result<Self> {
        Ok(ZfPrecoder {
            w: pinv_right(h_eff)?,
        })
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.w
    }

    /// Unquantized ZF signal `x = W s`.
    pub fn precode(&self, symbols: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        self.w.matvec(symbols)
    }
}

/// One-shot ZF signal for an effective channel.
pub fn zf_precode<T: Scalar>(h_eff: &CMat<T>, symbols: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    ZfPrecoder::new(h_eff)?.precode(symbols)
}

/// Hybrid ZF with 1-bit DACs: quantize the ZF signal onto the DAC alphabet.
pub fn zf_hybrid_1bit<T: Scalar>(
    h_e: &CMat<T>,
    symbols: &[Complex<T>],
) -> Result<QuantizedSignal<T>> {
    Ok(quantize_one_bit(&zf_precode(h_e, symbols)?))
}

/// Hybrid ZF with ideal (infinite-precision) DACs: the unquantized ZF signal
/// on the equivalent channel.
pub fn zf_hybrid_ideal<T: Scalar>(
    h_e: &CMat<T>,
    symbols: &[Complex<T>],
) -> Result<Vec<Complex<T>>> {
    zf_precode(h_e, symbols)
}

/// Fully-digital ZF: the analog stage is the identity and the signal lives
/// in antenna space.
pub fn zf_fully_digital<T: Scalar>(
    channel: &ChannelRealization<T>,
    symbols: &[Complex<T>],
) -> Result<Vec<Complex<T>>> {
    zf_precode(&channel.h, symbols)
}
