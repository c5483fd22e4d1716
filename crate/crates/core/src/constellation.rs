//! M-PSK constellation geometry: symbol alphabets, detection-threshold
//! decomposition, nearest-point detection, and Gray bit mapping.
//!
//! Points sit at angles `2*pi*i / M` starting from angle zero. Bit error
//! rates are rotation invariant, so the simplest convention is fixed here.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::scalar::Scalar;

/// An M-ary PSK alphabet with unit-modulus points.
#[derive(Debug, Clone)]
pub struct PskConstellation<T> {
    order: usize,
    points: Vec<Complex<T>>,
}

/// A data symbol split along its two detection thresholds (the rays at
/// `+/- pi/M` around the symbol): `s = s_a + s_b`, with `s_a` parallel to the
/// clockwise threshold and `s_b` to the counter-clockwise one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdDecomposition<T> {
    pub s_a: Complex<T>,
    pub s_b: Complex<T>,
}

impl<T: Scalar> PskConstellation<T> {
    /// Build an M-PSK alphabet. M must be a power of two (for Gray bit
    /// mapping) and at least 4: at M = 2 the two detection thresholds
    /// coincide and the threshold decomposition degenerates.
    pub fn new(order: usize) -> Result<Self> {
        if order == 2 {
            return Err(Error::BadModulation {
                order,
                reason: "BPSK thresholds coincide; threshold decomposition is degenerate",
            });
        }
        if order < 4 || !order.is_power_of_two() {
            return Err(Error::BadModulation {
                order,
                reason: "order must be a power of two, at least 4",
            });
        }
        let points = (0..order)
            .map(|i| {
                let angle = T::of(2.0) * T::PI() * T::of(i as f64) / T::of(order as f64);
                Complex::from_polar(T::one(), angle)
            })
            .collect();
        Ok(PskConstellation { order, points })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.order.trailing_zeros() as usize
    }

    pub fn points(&self) -> &[Complex<T>] {
        &self.points
    }

    pub fn point(&self, index: usize) -> Complex<T> {
        self.points[index]
    }

    /// Decompose a PSK point along its two detection thresholds:
    /// `s_a = c e^{j(theta - pi/M)}`, `s_b = c e^{j(theta + pi/M)}` with
    /// `c = 1 / (2 cos(pi/M))` and `theta = arg(s)`, so that
    /// `s_a + s_b = s` exactly.
    ///
    /// The decomposition is M-generic in the angle: any unit-modulus value
    /// is accepted and split at its own angle, which keeps the geometry
    /// independent of the alphabet's rotation convention. Values off the
    /// unit circle are rejected.
    pub fn decompose(&self, s: Complex<T>) -> Result<ThresholdDecomposition<T>> {
        let modulus = s.norm();
        if (modulus - T::one()).abs() > T::POINT_TOL {
            return Err(Error::NotOnConstellation {
                re: s.re.to_f64().unwrap_or(f64::NAN),
                im: s.im.to_f64().unwrap_or(f64::NAN),
                order: self.order,
            });
        }
        let half_sector = T::PI() / T::of(self.order as f64);
        let theta = s.arg();
        let coeff = modulus * (T::of(2.0) * half_sector.cos()).recip();
        Ok(ThresholdDecomposition {
            s_a: Complex::from_polar(coeff, theta - half_sector),
            s_b: Complex::from_polar(coeff, theta + half_sector),
        })
    }

    /// Maximum-likelihood detection for unit-modulus alphabets: the index
    /// whose angle is nearest to `arg(y)`. Exact sector boundaries break
    /// toward the lower index; `y = 0` detects as index 0.
    pub fn detect(&self, y: Complex<T>) -> usize {
        let angle = y.arg(); // atan2(0, 0) = 0, so y = 0 lands on index 0
        let two_pi = T::of(2.0) * T::PI();
        let step = two_pi / T::of(self.order as f64);
        let mut best = 0usize;
        let mut best_dist = T::infinity();
        for i in 0..self.order {
            let mut d = (angle - step * T::of(i as f64)).abs() % two_pi;
            if d > T::PI() {
                d = two_pi - d;
            }
            if d < best_dist {
                best_dist = d;
                best = i;
            }
        }
        best
    }

    /// Uniform i.i.d. symbol indices, deterministic given the stream.
    pub fn random_indices(&self, count: usize, stream: &mut RngStream) -> Vec<usize> {
        (0..count).map(|_| stream.index(self.order)).collect()
    }

    /// Uniform i.i.d. symbols from the alphabet.
    pub fn random_symbols(&self, count: usize, stream: &mut RngStream) -> Vec<Complex<T>> {
        self.random_indices(count, stream)
            .into_iter()
            .map(|i| self.points[i])
            .collect()
    }
}

/// Gray code of a symbol index: adjacent constellation points differ in
/// exactly one bit.
#[inline]
pub fn gray_code(index: usize) -> usize {
    index ^ (index >> 1)
}

/// Number of differing bits between two symbol indices under Gray mapping.
#[inline]
pub fn gray_bit_errors(sent: usize, detected: usize) -> u32 {
    (gray_code(sent) ^ gray_code(detected)).count_ones()
}
