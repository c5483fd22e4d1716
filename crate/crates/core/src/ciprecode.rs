//! Constructive-interference digital precoding.
//!
//! Per symbol slot, the transmit vector is designed directly: every user's
//! noiseless received signal is decomposed along the two detection
//! thresholds of its data symbol, and the design pushes the smallest
//! threshold margin as far out as possible. With the 1-bit DAC alphabet
//! relaxed to its bounding box, that max-min program becomes a linear
//! program in `[t; Re(x); Im(x)]`; the solution is then element-wise sign
//! quantized back onto the DAC alphabet.

use num_complex::Complex;

use crate::constellation::{PskConstellation, ThresholdDecomposition};
use crate::error::{Error, Result};
use crate::lpsolve::{self, LpProblem, LpStatus};
use crate::numlin::CMat;
use crate::scalar::Scalar;

/// Real coefficient rows tying the stacked real signal
/// `x0 = [Re(x); Im(x)]` to the per-user threshold margins.
///
/// `m0` has `2K` rows of length `2 N_RF`: row `k` gives user k's margin
/// along its clockwise threshold, row `K + k` the counter-clockwise one.
#[derive(Debug, Clone)]
pub struct CiCoefficients<T> {
    users: usize,
    n_rf: usize,
    pub m0: Vec<Vec<T>>,
    /// Per-user symbol decomposition the rows were built from.
    pub thresholds: Vec<ThresholdDecomposition<T>>,
    /// Users whose equivalent channel row is numerically zero. The LP still
    /// solves for these (their margins are pinned at zero) but the user is
    /// unserved.
    pub zero_channel_users: Vec<usize>,
}

/// Solution of the relaxed (box-constrained) design problem.
#[derive(Debug, Clone)]
pub struct RelaxedSignal<T> {
    /// Complex relaxed transmit vector, length N_RF.
    pub x_hat_bb: Vec<Complex<T>>,
    /// Optimal minimum threshold margin.
    pub t_star: T,
    /// All `2K` margins, ordered `[a_1 .. a_K, b_1 .. b_K]`.
    pub alphas: Vec<T>,
}

/// Transmit vector on the 1-bit DAC alphabet `{ +-1/sqrt(2) +- j/sqrt(2) }`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedSignal<T> {
    pub x_bb: Vec<Complex<T>>,
}

impl<T: Scalar> CiCoefficients<T> {
    pub fn users(&self) -> usize {
        self.users
    }

    pub fn n_rf(&self) -> usize {
        self.n_rf
    }

    /// Threshold margins `M0 * x0` of an arbitrary transmit vector.
    pub fn margins(&self, x_bb: &[Complex<T>]) -> Vec<T> {
        let x0 = stack_real(x_bb);
        self.m0
            .iter()
            .map(|row| dot(row, &x0))
            .collect()
    }

    /// The unrelaxed design objective `min_k,U alpha / f` for a given
    /// transmit vector, with `f = ||F_RF x||`.
    pub fn design_objective(&self, f_rf: &CMat<T>, x_bb: &[Complex<T>]) -> Result<T> {
        let tx = f_rf.matvec(x_bb)?;
        let f = tx
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt();
        if f <= T::zero() {
            return Err(Error::ZeroSignal);
        }
        let worst = self
            .margins(x_bb)
            .into_iter()
            .fold(T::infinity(), |a, b| a.min(b));
        Ok(worst / f)
    }
}

/// Build the margin coefficient rows from the equivalent channel and the
/// symbol vector.
///
/// With `s_k = s_k^A + s_k^B` decomposed along the detection thresholds and
/// `den_k = A_k^Re B_k^Im - A_k^Im B_k^Re`, the margins of a signal `x` are
///
/// ```text
/// a_k = [(B_k^Im h_k^Re - B_k^Re h_k^Im) Re(x) - (B_k^Im h_k^Im + B_k^Re h_k^Re) Im(x)] / den_k
/// b_k = [(A_k^Re h_k^Im - A_k^Im h_k^Re) Re(x) + (A_k^Re h_k^Re + A_k^Im h_k^Im) Im(x)] / den_k
/// ```
///
/// which is Cramer's rule for `h_k x = a_k s_k^A + b_k s_k^B` split into
/// real and imaginary parts.
pub fn build_coefficients<T: Scalar>(
    h_e: &CMat<T>,
    symbols: &[Complex<T>],
    constellation: &PskConstellation<T>,
) -> Result<CiCoefficients<T>> {
    let users = h_e.rows();
    let n_rf = h_e.cols();
    if symbols.len() != users {
        return Err(Error::dim(
            "build_coefficients",
            format!("{users} channel rows but {} symbols", symbols.len()),
        ));
    }

    let mut thresholds = Vec::with_capacity(users);
    let mut rows_a = Vec::with_capacity(users);
    let mut rows_b = Vec::with_capacity(users);
    let mut zero_channel_users = Vec::new();

    for (k, &s) in symbols.iter().enumerate() {
        let dec = constellation.decompose(s)?;
        let (a_re, a_im) = (dec.s_a.re, dec.s_a.im);
        let (b_re, b_im) = (dec.s_b.re, dec.s_b.im);
        let den = a_re * b_im - a_im * b_re;
        if den.abs() < T::DEGENERATE_TOL {
            return Err(Error::DegenerateThresholds {
                user: k,
                denominator: den.abs().to_f64().unwrap_or(0.0),
            });
        }

        let h_row = h_e.row(k);
        if h_row.iter().all(|z| z.norm_sqr() == T::zero()) {
            zero_channel_users.push(k);
        }

        let mut row_a = vec![T::zero(); 2 * n_rf];
        let mut row_b = vec![T::zero(); 2 * n_rf];
        for (n, h) in h_row.iter().enumerate() {
            let (h_re, h_im) = (h.re, h.im);
            row_a[n] = (b_im * h_re - b_re * h_im) / den;
            row_a[n_rf + n] = -(b_im * h_im + b_re * h_re) / den;
            row_b[n] = (a_re * h_im - a_im * h_re) / den;
            row_b[n_rf + n] = (a_re * h_re + a_im * h_im) / den;
        }
        rows_a.push(row_a);
        rows_b.push(row_b);
        thresholds.push(dec);
    }

    let mut m0 = rows_a;
    m0.append(&mut rows_b);
    Ok(CiCoefficients {
        users,
        n_rf,
        m0,
        thresholds,
        zero_channel_users,
    })
}

/// Assemble the LP `min -t  s.t.  t <= every margin,  |Re(x)|, |Im(x)| <=
/// 1/sqrt(2)` over the stacked variable `[t; x0]`.
///
/// The per-user received-signal constraint needs no rows of its own: the
/// margins are defined as `M0 x0`, so it holds identically.
pub fn build_lp<T: Scalar>(coeffs: &CiCoefficients<T>) -> LpProblem<T> {
    let n_vars = 2 * coeffs.n_rf + 1;
    let mut objective = vec![T::zero(); n_vars];
    objective[0] = -T::one();

    let rows: Vec<Vec<T>> = coeffs
        .m0
        .iter()
        .map(|m_row| {
            let mut row = Vec::with_capacity(n_vars);
            row.push(T::one());
            row.extend(m_row.iter().map(|&v| -v));
            row
        })
        .collect();
    let rhs = vec![T::zero(); rows.len()];

    let box_half = T::FRAC_1_SQRT_2();
    let mut lower = vec![-box_half; n_vars];
    let mut upper = vec![box_half; n_vars];
    lower[0] = T::neg_infinity();
    upper[0] = T::infinity();

    LpProblem::new(objective, rows, rhs, lower, upper)
        .expect("CI problem dimensions are consistent by construction")
}

/// Solve the relaxed design problem for one symbol slot.
pub fn solve_relaxed<T: Scalar>(
    h_e: &CMat<T>,
    symbols: &[Complex<T>],
    constellation: &PskConstellation<T>,
) -> Result<RelaxedSignal<T>> {
    let coeffs = build_coefficients(h_e, symbols, constellation)?;
    let problem = build_lp(&coeffs);
    let solution = lpsolve::solve(&problem)?;
    if solution.status != LpStatus::Optimal {
        return Err(Error::LpNotOptimal {
            status: solution.status.as_str(),
            context: "relaxed constructive-interference precoding",
        });
    }
    let n_rf = coeffs.n_rf;
    let x0 = &solution.x[1..];
    let x_hat_bb: Vec<Complex<T>> = (0..n_rf)
        .map(|n| Complex::new(x0[n], x0[n_rf + n]))
        .collect();
    let alphas = coeffs.margins(&x_hat_bb);
    Ok(RelaxedSignal {
        x_hat_bb,
        t_star: solution.x[0],
        alphas,
    })
}

/// Element-wise 1-bit quantization: `x_n = sgn(Re)/sqrt(2) + j sgn(Im)/sqrt(2)`
/// with `sgn(0) = +1`.
pub fn quantize_one_bit<T: Scalar>(x_hat: &[Complex<T>]) -> QuantizedSignal<T> {
    let amp = T::FRAC_1_SQRT_2();
    let sgn = |v: T| if v < T::zero() { -amp } else { amp };
    QuantizedSignal {
        x_bb: x_hat.iter().map(|z| Complex::new(sgn(z.re), sgn(z.im))).collect(),
    }
}

fn stack_real<T: Scalar>(x: &[Complex<T>]) -> Vec<T> {
    let mut out = Vec::with_capacity(2 * x.len());
    out.extend(x.iter().map(|z| z.re));
    out.extend(x.iter().map(|z| z.im));
    out
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).fold(T::zero(), |acc, t| acc + t)
}
