//! Seeded generation of flat-fading Rayleigh channels and receiver noise.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numlin::CMat;
use crate::rng::RngStream;
use crate::scalar::Scalar;

/// One K x Nt downlink channel draw with i.i.d. standard complex Gaussian
/// entries.
#[derive(Debug, Clone)]
pub struct ChannelRealization<T> {
    pub h: CMat<T>,
}

/// Receiver noise model: circularly symmetric complex Gaussian with
/// covariance `variance * I`.
#[derive(Debug, Clone, Copy)]
pub struct NoiseModel<T> {
    variance: T,
}

/// Draw a K x Nt Rayleigh channel; each entry is `(g1 + j g2)/sqrt(2)` with
/// independent standard normal parts, so `E|h|^2 = 1`.
pub fn draw_channel<T: Scalar>(
    users: usize,
    antennas: usize,
    stream: &mut RngStream,
) -> Result<ChannelRealization<T>> {
    if users < 1 {
        return Err(Error::param("users", "need at least one user"));
    }
    if antennas < users {
        return Err(Error::param(
            "antennas",
            format!("antenna count {antennas} must be at least the user count {users}"),
        ));
    }
    let h = CMat::from_fn(users, antennas, |_, _| {
        let (re, im) = stream.standard_complex_gaussian();
        Complex::new(T::of(re), T::of(im))
    });
    Ok(ChannelRealization { h })
}

impl<T: Scalar> NoiseModel<T> {
    pub fn new(variance: T) -> Result<Self> {
        if !(variance > T::zero()) || !variance.is_finite() {
            return Err(Error::param(
                "variance",
                format!("noise variance must be positive and finite, got {variance}"),
            ));
        }
        Ok(NoiseModel { variance })
    }

    pub fn variance(&self) -> T {
        self.variance
    }

    /// Draw a length-K noise vector with i.i.d. CN(0, variance) entries.
    pub fn draw(&self, len: usize, stream: &mut RngStream) -> Vec<Complex<T>> {
        let sd = self.variance.sqrt();
        (0..len)
            .map(|_| {
                let (re, im) = stream.standard_complex_gaussian();
                Complex::new(T::of(re) * sd, T::of(im) * sd)
            })
            .collect()
    }
}
