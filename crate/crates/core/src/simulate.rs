//! End-to-end transmit chain and the Monte Carlo BER engine.
//!
//! One channel realization carries one analog precoder and many symbol
//! slots. Realizations are the unit of parallelism: every (realization,
//! slot) pair derives its own RNG streams from the master seed, so the
//! aggregated counts are identical for any worker count. All schemes and
//! all SNR points of a sweep share the same channels, symbols and noise
//! draws (scaled per SNR), which keeps scheme comparisons paired.
//!
//! Power accounting: the transmit vector is normalized to unit power and
//! scaled by `sqrt(P)` with a budget of one power unit per served user
//! (`P = K`); per-user noise has variance `10^(-snr_db/10)`. Only the ratio
//! `P / sigma^2` matters to the (scale-invariant) PSK detector, so this
//! choice fixes the absolute meaning of the SNR axis: with it, the
//! qualitative behaviors the sweeps are meant to show (1-bit schemes
//! improving with the RF-chain count at moderate SNR, the
//! constructive-interference margin paying off) land inside the usual
//! -10..10 dB window.

use num_complex::Complex;
use rayon::prelude::*;

use crate::analog::{build_svd_precoder, equivalent_channel, AnalogPrecoder};
use crate::baseline::ZfPrecoder;
use crate::channel::draw_channel;
use crate::ciprecode::{quantize_one_bit, solve_relaxed};
use crate::constellation::{gray_bit_errors, PskConstellation};
use crate::error::{Error, Result};
use crate::numlin::CMat;
use crate::rng::RngStream;
use crate::scalar::Scalar;

/// Precoding schemes the engine can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// Constructive-interference symbol-level precoding with 1-bit DACs.
    CiOneBit,
    /// Zero-forcing on the equivalent channel, 1-bit quantized.
    ZfOneBit,
    /// Zero-forcing on the equivalent channel with ideal DACs.
    ZfHybridIdeal,
    /// Fully-digital zero-forcing on the antenna-space channel.
    ZfFullyDigital,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [
        Scheme::CiOneBit,
        Scheme::ZfOneBit,
        Scheme::ZfHybridIdeal,
        Scheme::ZfFullyDigital,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::CiOneBit => "ci-1bit",
            Scheme::ZfOneBit => "zf-1bit",
            Scheme::ZfHybridIdeal => "zf-hybrid-ideal",
            Scheme::ZfFullyDigital => "zf-fd",
        }
    }

    pub fn parse(name: &str) -> Option<Scheme> {
        Scheme::ALL.iter().copied().find(|s| s.name() == name)
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Monte Carlo experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig<T> {
    pub nt: usize,
    pub k: usize,
    pub n_rf: usize,
    pub mod_order: usize,
    pub snr_db_points: Vec<T>,
    /// When set, sweep the RF chain count instead of holding `n_rf` fixed.
    pub n_rf_points: Option<Vec<usize>>,
    pub symbols_per_channel: usize,
    pub channel_realizations: usize,
    pub master_seed: u64,
    pub schemes: Vec<Scheme>,
}

impl<T: Scalar> SimConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::param("k", "need at least one user"));
        }
        if self.n_rf < self.k {
            return Err(Error::param(
                "n_rf",
                format!("n_rf = {} violates n_rf >= k (k = {})", self.n_rf, self.k),
            ));
        }
        if self.nt < self.n_rf {
            return Err(Error::param(
                "nt",
                format!("n_rf = {} violates nt >= n_rf (nt = {})", self.n_rf, self.nt),
            ));
        }
        PskConstellation::<T>::new(self.mod_order)?;
        if self.snr_db_points.is_empty() {
            return Err(Error::param("snr_db", "need at least one SNR point"));
        }
        if self.symbols_per_channel < 1 {
            return Err(Error::param("symbols_per_channel", "must be positive"));
        }
        if self.channel_realizations < 1 {
            return Err(Error::param("channel_realizations", "must be positive"));
        }
        if self.schemes.is_empty() {
            return Err(Error::param("schemes", "need at least one scheme"));
        }
        if let Some(points) = &self.n_rf_points {
            if points.is_empty() {
                return Err(Error::param("n_rf_points", "sweep list is empty"));
            }
            for &p in points {
                if p < self.k || p > self.nt {
                    return Err(Error::param(
                        "n_rf_points",
                        format!("point {p} violates k <= n_rf <= nt (k = {}, nt = {})", self.k, self.nt),
                    ));
                }
            }
        }
        Ok(())
    }

    fn rf_values(&self) -> Vec<usize> {
        self.n_rf_points.clone().unwrap_or_else(|| vec![self.n_rf])
    }
}

/// One Monte Carlo measurement point.
#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub scheme: Scheme,
    pub snr_db: f64,
    pub n_rf: usize,
    pub bit_errors: u64,
    pub bits_total: u64,
    pub ber: f64,
    pub symbol_errors: u64,
    pub symbols_total: u64,
}

// Stream derivation tags; see the rng module docs.
const TAG_CHANNEL: u64 = 1;
const TAG_SYMBOLS: u64 = 2;
const TAG_NOISE: u64 = 3;
const TAG_ANALOG: u64 = 4;

/// Received vector `y = sqrt(P) (1/f) H F_RF x_BB + n` with
/// `f = ||F_RF x_BB||`, computed on the actual transmitted signal.
pub fn transmit_chain<T: Scalar>(
    f_rf: &AnalogPrecoder<T>,
    x_bb: &[Complex<T>],
    h: &CMat<T>,
    noise: &[Complex<T>],
    power: T,
) -> Result<Vec<Complex<T>>> {
    let z = f_rf.matrix().matvec(x_bb)?;
    let mut y = scaled_received(h, &z, power)?;
    if noise.len() != y.len() {
        return Err(Error::dim(
            "transmit_chain",
            format!("{} receivers but {} noise entries", y.len(), noise.len()),
        ));
    }
    for (yk, nk) in y.iter_mut().zip(noise) {
        *yk += *nk;
    }
    Ok(y)
}

/// Noiseless part of the chain given the analog-precoded vector `z = F x`:
/// normalizes to unit transmit power and applies the channel.
fn scaled_received<T: Scalar>(h: &CMat<T>, z: &[Complex<T>], power: T) -> Result<Vec<Complex<T>>> {
    let f = z
        .iter()
        .map(|v| v.norm_sqr())
        .fold(T::zero(), |a, b| a + b)
        .sqrt();
    if !(f > T::zero()) {
        return Err(Error::ZeroSignal);
    }
    let gain = Complex::new(power.sqrt() / f, T::zero());
    #[cfg(debug_assertions)]
    {
        let tx_power: T = z.iter().map(|v| (v / f).norm_sqr()).fold(T::zero(), |a, b| a + b);
        debug_assert!((tx_power - T::one()).abs() < T::of(1e-10));
    }
    let hz = h.matvec(z)?;
    Ok(hz.into_iter().map(|v| v * gain).collect())
}

struct Counts {
    bit_errors: u64,
    bits: u64,
    symbol_errors: u64,
    symbols: u64,
}

impl Counts {
    fn zero() -> Self {
        Counts {
            bit_errors: 0,
            bits: 0,
            symbol_errors: 0,
            symbols: 0,
        }
    }

    fn merge(&mut self, other: &Counts) {
        self.bit_errors += other.bit_errors;
        self.bits += other.bits;
        self.symbol_errors += other.symbol_errors;
        self.symbols += other.symbols;
    }
}

/// Run the Monte Carlo experiment described by the config.
pub fn run_ber<T: Scalar>(config: &SimConfig<T>) -> Result<Vec<BerRecord>> {
    config.validate()?;
    let rf_values = config.rf_values();
    let n_points = config.schemes.len() * rf_values.len() * config.snr_db_points.len();

    let partials: Vec<Vec<Counts>> = (0..config.channel_realizations as u64)
        .into_par_iter()
        .map(|realization| simulate_realization(config, &rf_values, realization, n_points))
        .collect::<Result<Vec<_>>>()?;

    let mut totals: Vec<Counts> = (0..n_points).map(|_| Counts::zero()).collect();
    for partial in &partials {
        for (tot, p) in totals.iter_mut().zip(partial) {
            tot.merge(p);
        }
    }

    let mut records = Vec::with_capacity(n_points);
    for (si, &scheme) in config.schemes.iter().enumerate() {
        for (ri, &n_rf) in rf_values.iter().enumerate() {
            for (ni, snr) in config.snr_db_points.iter().enumerate() {
                let c = &totals[point_index(si, ri, ni, rf_values.len(), config.snr_db_points.len())];
                records.push(BerRecord {
                    scheme,
                    snr_db: snr.to_f64().unwrap_or(f64::NAN),
                    n_rf,
                    bit_errors: c.bit_errors,
                    bits_total: c.bits,
                    ber: c.bit_errors as f64 / c.bits as f64,
                    symbol_errors: c.symbol_errors,
                    symbols_total: c.symbols,
                });
            }
        }
    }
    Ok(records)
}

/// Same as [`run_ber`] on a dedicated thread pool. `workers = None` uses the
/// global pool. Results are byte-identical for every worker count.
pub fn run_ber_with_workers<T: Scalar>(
    config: &SimConfig<T>,
    workers: Option<usize>,
) -> Result<Vec<BerRecord>> {
    match workers {
        None => run_ber(config),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::param("workers", e.to_string()))?;
            pool.install(|| run_ber(config))
        }
    }
}

#[inline]
fn point_index(scheme: usize, rf: usize, snr: usize, n_rf_points: usize, n_snr: usize) -> usize {
    (scheme * n_rf_points + rf) * n_snr + snr
}

fn simulate_realization<T: Scalar>(
    config: &SimConfig<T>,
    rf_values: &[usize],
    realization: u64,
    n_points: usize,
) -> Result<Vec<Counts>> {
    let constellation = PskConstellation::<T>::new(config.mod_order)?;
    let bits_per_symbol = constellation.bits_per_symbol() as u64;
    // One power unit per served user; see the module docs.
    let power = T::of(config.k as f64);
    let sigmas: Vec<T> = config
        .snr_db_points
        .iter()
        .map(|&snr| T::of(10.0).powf(-snr / T::of(10.0)).sqrt())
        .collect();

    let mut counts: Vec<Counts> = (0..n_points).map(|_| Counts::zero()).collect();

    let mut channel_stream = RngStream::derive(config.master_seed, &[realization, TAG_CHANNEL]);
    let channel = draw_channel::<T>(config.k, config.nt, &mut channel_stream)?;

    let needs_fd = config.schemes.contains(&Scheme::ZfFullyDigital);
    let zf_fd = if needs_fd {
        Some(ZfPrecoder::new(&channel.h)?)
    } else {
        None
    };

    for (ri, &n_rf) in rf_values.iter().enumerate() {
        let analog_seed =
            RngStream::derive_seed(config.master_seed, &[realization, TAG_ANALOG, n_rf as u64]);
        let f_rf = build_svd_precoder(&channel, n_rf, analog_seed)?;
        let h_e = equivalent_channel(&channel, &f_rf)?;
        let needs_zf_e = config.schemes.iter().any(|s| {
            matches!(s, Scheme::ZfOneBit | Scheme::ZfHybridIdeal)
        });
        let zf_e = if needs_zf_e {
            Some(ZfPrecoder::new(&h_e)?)
        } else {
            None
        };

        for slot in 0..config.symbols_per_channel as u64 {
            let mut symbol_stream =
                RngStream::derive(config.master_seed, &[realization, slot, TAG_SYMBOLS]);
            let tx_indices = constellation.random_indices(config.k, &mut symbol_stream);
            let symbols: Vec<Complex<T>> =
                tx_indices.iter().map(|&i| constellation.point(i)).collect();

            let mut noise_stream =
                RngStream::derive(config.master_seed, &[realization, slot, TAG_NOISE]);
            let noise_unit: Vec<Complex<T>> = (0..config.k)
                .map(|_| {
                    let (re, im) = noise_stream.standard_complex_gaussian();
                    Complex::new(T::of(re), T::of(im))
                })
                .collect();

            for (si, &scheme) in config.schemes.iter().enumerate() {
                // Analog-precoded transmit vector z = F x (or x itself for
                // the fully-digital baseline).
                let z = match scheme {
                    Scheme::CiOneBit => {
                        let relaxed = solve_relaxed(&h_e, &symbols, &constellation)?;
                        let q = quantize_one_bit(&relaxed.x_hat_bb);
                        f_rf.matrix().matvec(&q.x_bb)?
                    }
                    Scheme::ZfOneBit => {
                        let x = zf_e.as_ref().unwrap().precode(&symbols)?;
                        let q = quantize_one_bit(&x);
                        f_rf.matrix().matvec(&q.x_bb)?
                    }
                    Scheme::ZfHybridIdeal => {
                        let x = zf_e.as_ref().unwrap().precode(&symbols)?;
                        f_rf.matrix().matvec(&x)?
                    }
                    Scheme::ZfFullyDigital => zf_fd.as_ref().unwrap().precode(&symbols)?,
                };
                let y0 = scaled_received(&channel.h, &z, power)?;

                for (ni, sigma) in sigmas.iter().enumerate() {
                    let c = &mut counts[point_index(si, ri, ni, rf_values.len(), sigmas.len())];
                    for (k, (&base, &n0)) in y0.iter().zip(&noise_unit).enumerate() {
                        let y = base + n0 * *sigma;
                        let detected = constellation.detect(y);
                        c.bit_errors += u64::from(gray_bit_errors(tx_indices[k], detected));
                        c.bits += bits_per_symbol;
                        c.symbol_errors += u64::from(detected != tx_indices[k]);
                        c.symbols += 1;
                    }
                }
            }
        }
    }
    Ok(counts)
}
