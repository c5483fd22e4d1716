//! Constant-modulus analog precoder built from the channel's right-singular
//! vectors, and the resulting equivalent user-to-RF-chain channel.

use num_complex::Complex;

use crate::channel::ChannelRealization;
use crate::error::{Error, Result};
use crate::numlin::{thin_svd_wide, CMat};
use crate::scalar::Scalar;

/// Nt x N_RF phase-shifter network: every entry has modulus exactly `1/Nt`.
#[derive(Debug, Clone)]
pub struct AnalogPrecoder<T> {
    f_rf: CMat<T>,
}

impl<T: Scalar> AnalogPrecoder<T> {
    pub fn matrix(&self) -> &CMat<T> {
        &self.f_rf
    }

    pub fn antennas(&self) -> usize {
        self.f_rf.rows()
    }

    pub fn rf_chains(&self) -> usize {
        self.f_rf.cols()
    }
}

/// Build the analog precoder from the phases of the first `n_rf` columns of
/// the channel's right-singular matrix V: entry `(m, k)` is
/// `(1/Nt) e^{j arg(v_k(m))}`. Exactly-zero entries of `v_k` have undefined
/// phase and map to phase 0. The seed fixes the orthonormal completion of V
/// past rank K, so the precoder is deterministic.
pub fn build_svd_precoder<T: Scalar>(
    channel: &ChannelRealization<T>,
    n_rf: usize,
    seed: u64,
) -> Result<AnalogPrecoder<T>> {
    let k = channel.h.rows();
    let nt = channel.h.cols();
    if n_rf < k {
        return Err(Error::param(
            "n_rf",
            format!("RF chain count {n_rf} must be at least the user count {k}"),
        ));
    }
    if n_rf > nt {
        return Err(Error::param(
            "n_rf",
            format!("RF chain count {n_rf} exceeds antenna count {nt}"),
        ));
    }
    let svd = thin_svd_wide(&channel.h, n_rf, seed)?;
    let unit = T::of(nt as f64).recip();
    let f_rf = CMat::from_fn(nt, n_rf, |m, kk| {
        let v = svd.v[(m, kk)];
        if v.norm_sqr() == T::zero() {
            Complex::new(unit, T::zero())
        } else {
            Complex::from_polar(unit, v.arg())
        }
    });
    Ok(AnalogPrecoder { f_rf })
}

/// Equivalent user-to-RF channel `H_e = H F_RF` (K x N_RF).
pub fn equivalent_channel<T: Scalar>(
    channel: &ChannelRealization<T>,
    precoder: &AnalogPrecoder<T>,
) -> Result<CMat<T>> {
    channel.h.matmul(precoder.matrix())
}
