//! Minimal dense complex linear algebra: matrix products, Hermitian
//! eigendecomposition, thin SVD of wide matrices, and the right
//! pseudo-inverse.
//!
//! Everything here targets the shapes this crate actually sees: a handful of
//! users (rows) against up to a few hundred antennas (columns). The SVD is
//! therefore computed through the K x K eigenproblem of `H H^H` instead of a
//! general bidiagonalization; only K singular triples exist and only the
//! right-singular phases are consumed downstream.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::scalar::Scalar;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> CMat<T> {
    /// Build from row-major entries, validating shape and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dim(
                "CMat::new",
                format!("{rows}x{cols} needs {} entries, got {}", rows * cols, data.len()),
            ));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::param("data", "matrix entries must be finite"));
        }
        Ok(CMat { rows, cols, data })
    }

    /// Build from a per-entry closure. The closure is trusted to return
    /// finite values.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Contiguous row slice.
    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn hermitian(&self) -> CMat<T> {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &CMat<T>) -> Result<CMat<T>> {
        if self.cols != other.rows {
            return Err(Error::dim(
                "matmul",
                format!(
                    "{}x{} times {}x{}",
                    self.rows, self.cols, other.rows, other.cols
                ),
            ));
        }
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let lhs_row = self.row(i);
            for (k, &a) in lhs_row.iter().enumerate() {
                let rhs_row = other.row(k);
                let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row.iter()) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if self.cols != x.len() {
            return Err(Error::dim(
                "matvec",
                format!("{}x{} times vector of length {}", self.rows, self.cols, x.len()),
            ));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x.iter())
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| acc + a * b)
            })
            .collect())
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    pub fn scale(&self, factor: Complex<T>) -> CMat<T> {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    /// Max Hermitian asymmetry `|a_ij - conj(a_ji)|`.
    fn hermitian_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }
}

impl<T> std::ops::Index<(usize, usize)> for CMat<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for CMat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues in descending
/// order with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermEig<T> {
    pub values: Vec<T>,
    pub vectors: CMat<T>,
}

/// Thin SVD of a wide matrix `H` (K x Nt, K <= Nt).
///
/// `u` is K x K unitary, `sigma` holds the K singular values descending, and
/// `v` carries at least the requested number of right-singular-vector
/// columns (Nt x r). Columns past the rank are an orthonormal completion
/// generated deterministically from the seed.
#[derive(Debug, Clone)]
pub struct ThinSvd<T> {
    pub u: CMat<T>,
    pub sigma: Vec<T>,
    pub v: CMat<T>,
}

const MAX_JACOBI_SWEEPS: usize = 100;

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Each rotation zeroes one off-diagonal pair with a unitary plane rotation;
/// sweeps repeat until the off-diagonal Frobenius norm falls below
/// `Scalar::EIG_TOL` times the input norm. Intended for the small matrices
/// (K <= 16) this crate produces; it is simple and numerically robust there.
pub fn herm_eig<T: Scalar>(a: &CMat<T>) -> Result<HermEig<T>> {
    if a.rows() != a.cols() {
        return Err(Error::dim("herm_eig", format!("{}x{} is not square", a.rows(), a.cols())));
    }
    let n = a.rows();
    let norm = a.frobenius_norm();
    let defect = a.hermitian_defect();
    if defect > T::HERM_TOL * norm.max(T::one()) {
        return Err(Error::NotHermitian(format!(
            "max |a_ij - conj(a_ji)| = {defect} exceeds tolerance"
        )));
    }

    let mut w = a.clone();
    // Clean up the representation: exact Hermitian pairing, real diagonal.
    for i in 0..n {
        w[(i, i)] = Complex::new(w[(i, i)].re, T::zero());
        for j in (i + 1)..n {
            let avg = (w[(i, j)] + w[(j, i)].conj()) * Complex::new(T::of(0.5), T::zero());
            w[(i, j)] = avg;
            w[(j, i)] = avg.conj();
        }
    }
    let mut q = CMat::<T>::identity(n);

    if norm == T::zero() || n == 1 {
        let values: Vec<T> = (0..n).map(|i| w[(i, i)].re).collect();
        return Ok(sort_descending(values, q));
    }

    let threshold = T::EIG_TOL * norm;
    let mut converged = false;
    for _sweep in 0..MAX_JACOBI_SWEEPS {
        if off_diagonal_norm(&w) < threshold {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for qi in (p + 1)..n {
                rotate(&mut w, &mut q, p, qi);
            }
        }
    }
    if !converged {
        let off = off_diagonal_norm(&w);
        if off >= threshold {
            return Err(Error::NoConvergence {
                sweeps: MAX_JACOBI_SWEEPS,
                residual: off.to_f64().unwrap_or(f64::NAN),
            });
        }
    }

    let values: Vec<T> = (0..n).map(|i| w[(i, i)].re).collect();
    Ok(sort_descending(values, q))
}

fn off_diagonal_norm<T: Scalar>(w: &CMat<T>) -> T {
    let n = w.rows();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += w[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One complex Jacobi rotation annihilating `w[(p, q)]`.
///
/// The 2x2 Hermitian block is phase-stripped to a real symmetric block and
/// rotated with the classic tangent formula; the combined unitary is applied
/// to the full matrix from both sides and accumulated into `q`.
fn rotate<T: Scalar>(w: &mut CMat<T>, q: &mut CMat<T>, p: usize, qi: usize) {
    let g = w[(p, qi)];
    let gmag = g.norm();
    if gmag == T::zero() {
        return;
    }
    let phase = g / Complex::new(gmag, T::zero()); // e^{j phi}
    let alpha = w[(p, p)].re;
    let beta = w[(qi, qi)].re;

    let theta = (beta - alpha) / (T::of(2.0) * gmag);
    let t = if theta.abs() > T::of(1e18) {
        // Asymptotic root of t^2 + 2*theta*t - 1 = 0; avoids theta^2 overflow.
        (T::of(2.0) * theta).recip()
    } else {
        let sign = if theta >= T::zero() { T::one() } else { -T::one() };
        sign / (theta.abs() + (theta * theta + T::one()).sqrt())
    };
    let c = (t * t + T::one()).sqrt().recip();
    let s = t * c;

    // Combined unitary J: identity outside the (p, q) plane with block
    //   [ c          s        ]
    //   [ -s e^{-j phi}  c e^{-j phi} ]
    let cc = Complex::new(c, T::zero());
    let sc = Complex::new(s, T::zero());
    let jp_q = sc; // J[p][q]
    let jq_p = -sc * phase.conj(); // J[q][p]
    let jq_q = cc * phase.conj(); // J[q][q]

    let n = w.rows();
    // Column update: A <- A J.
    for i in 0..n {
        let aip = w[(i, p)];
        let aiq = w[(i, qi)];
        w[(i, p)] = aip * cc + aiq * jq_p;
        w[(i, qi)] = aip * jp_q + aiq * jq_q;
    }
    // Row update: A <- J^H A.
    for j in 0..n {
        let apj = w[(p, j)];
        let aqj = w[(qi, j)];
        w[(p, j)] = apj * cc.conj() + aqj * jq_p.conj();
        w[(qi, j)] = apj * jp_q.conj() + aqj * jq_q.conj();
    }
    // Known exact results of the rotation; kill accumulated round-off.
    w[(p, p)] = Complex::new(alpha - t * gmag, T::zero());
    w[(qi, qi)] = Complex::new(beta + t * gmag, T::zero());
    w[(p, qi)] = Complex::new(T::zero(), T::zero());
    w[(qi, p)] = Complex::new(T::zero(), T::zero());

    // Accumulate eigenvectors: Q <- Q J.
    for i in 0..n {
        let qip = q[(i, p)];
        let qiq = q[(i, qi)];
        q[(i, p)] = qip * cc + qiq * jq_p;
        q[(i, qi)] = qip * jp_q + qiq * jq_q;
    }
}

fn sort_descending<T: Scalar>(values: Vec<T>, vectors: CMat<T>) -> HermEig<T> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());
    let sorted_values: Vec<T> = order.iter().map(|&i| values[i]).collect();
    let sorted_vectors = CMat::from_fn(n, n, |i, j| vectors[(i, order[j])]);
    HermEig {
        values: sorted_values,
        vectors: sorted_vectors,
    }
}

/// Thin SVD of a wide matrix via the K x K eigenproblem of `H H^H`.
///
/// Right vectors are `v_i = H^H u_i / sigma_i` up to the numerical rank;
/// remaining requested columns are an orthonormal completion built by
/// Gram-Schmidt over seeded random complex vectors. Every returned column is
/// rotated so its first entry of non-negligible modulus is real positive,
/// with `u_i` co-rotated to preserve `H v_i = sigma_i u_i`.
pub fn thin_svd_wide<T: Scalar>(h: &CMat<T>, num_right_vectors: usize, seed: u64) -> Result<ThinSvd<T>> {
    let k = h.rows();
    let nt = h.cols();
    if k > nt {
        return Err(Error::dim(
            "thin_svd_wide",
            format!("matrix is {k}x{nt}; need rows <= cols"),
        ));
    }
    if num_right_vectors > nt {
        return Err(Error::param(
            "num_right_vectors",
            format!("{num_right_vectors} exceeds column count {nt}"),
        ));
    }

    let hh = h.hermitian();
    let gram = h.matmul(&hh)?;
    let eig = herm_eig(&gram)?;

    let sigma: Vec<T> = eig.values.iter().map(|&l| l.max(T::zero()).sqrt()).collect();
    let sigma_max = sigma.first().copied().unwrap_or(T::zero());
    let rank = sigma
        .iter()
        .take_while(|&&s| s > T::RANK_TOL * sigma_max && s > T::zero())
        .count();

    let n_cols = num_right_vectors.max(k);
    let mut u = eig.vectors;
    let mut v_cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(n_cols);

    for i in 0..rank {
        let ui = u.col(i);
        let mut vi = hh.matvec(&ui)?;
        let inv_sigma = Complex::new(sigma[i].recip(), T::zero());
        for z in vi.iter_mut() {
            *z = *z * inv_sigma;
        }
        let rotation = phase_fix(&mut vi);
        // Co-rotate u_i so H v_i = sigma_i u_i survives the convention.
        for r in 0..k {
            u[(r, i)] = u[(r, i)] * rotation;
        }
        v_cols.push(vi);
    }

    // Orthonormal completion for columns past the rank, seeded for
    // reproducibility.
    let mut stream = RngStream::from_seed(seed);
    while v_cols.len() < n_cols {
        let fresh = random_orthonormal_column(nt, &v_cols, &mut stream)?;
        v_cols.push(fresh);
    }

    let v = CMat::from_fn(nt, n_cols, |i, j| v_cols[j][i]);
    Ok(ThinSvd { u, sigma, v })
}

/// Rotate a vector so its first entry with modulus above `PHASE_TOL` becomes
/// real positive; returns the applied rotation.
fn phase_fix<T: Scalar>(v: &mut [Complex<T>]) -> Complex<T> {
    let pivot = v.iter().find(|z| z.norm() > T::PHASE_TOL);
    let rotation = match pivot {
        Some(z) => {
            let m = z.norm();
            Complex::new(z.re / m, -z.im / m) // e^{-j arg(z)}
        }
        None => Complex::new(T::one(), T::zero()),
    };
    for z in v.iter_mut() {
        *z = *z * rotation;
    }
    rotation
}

fn random_orthonormal_column<T: Scalar>(
    n: usize,
    existing: &[Vec<Complex<T>>],
    stream: &mut RngStream,
) -> Result<Vec<Complex<T>>> {
    // A Gaussian draw is almost surely outside the existing span; redraw on
    // the measure-zero failure.
    for _attempt in 0..64 {
        let mut candidate: Vec<Complex<T>> = (0..n)
            .map(|_| {
                let (re, im) = stream.standard_complex_gaussian();
                Complex::new(T::of(re), T::of(im))
            })
            .collect();
        // Modified Gram-Schmidt, twice for orthogonality at working precision.
        for _pass in 0..2 {
            for prev in existing {
                let proj = dot_conj(prev, &candidate);
                for (c, &p) in candidate.iter_mut().zip(prev.iter()) {
                    *c = *c - p * proj;
                }
            }
        }
        let norm = vec_norm(&candidate);
        if norm > T::of(1e-6) {
            let inv = Complex::new(norm.recip(), T::zero());
            for c in candidate.iter_mut() {
                *c = *c * inv;
            }
            phase_fix(&mut candidate);
            return Ok(candidate);
        }
    }
    Err(Error::param(
        "completion",
        "could not draw a vector outside the existing span",
    ))
}

fn dot_conj<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter()
        .zip(b.iter())
        .fold(Complex::new(T::zero(), T::zero()), |acc, (&x, &y)| acc + x.conj() * y)
}

fn vec_norm<T: Scalar>(v: &[Complex<T>]) -> T {
    v.iter()
        .map(|z| z.norm_sqr())
        .fold(T::zero(), |a, b| a + b)
        .sqrt()
}

/// Right pseudo-inverse `H^H (H H^H)^{-1}` of a full-row-rank wide matrix.
///
/// The K x K Gram inverse goes through the same Jacobi eigensolver, so the
/// result is deterministic and accurate at the small K this crate uses.
pub fn pinv_right<T: Scalar>(h: &CMat<T>) -> Result<CMat<T>> {
    let k = h.rows();
    let hh = h.hermitian();
    let gram = h.matmul(&hh)?;
    let eig = herm_eig(&gram)?;

    let lambda_max = eig.values.first().copied().unwrap_or(T::zero());
    let sigma_max = lambda_max.max(T::zero()).sqrt();
    for (i, &l) in eig.values.iter().enumerate() {
        let sigma = l.max(T::zero()).sqrt();
        if sigma <= T::RANK_TOL * sigma_max || sigma == T::zero() {
            return Err(Error::RankDeficient(format!(
                "singular value {i} of {k} is {sigma} (largest {sigma_max}); matrix has no right inverse"
            )));
        }
    }

    // (H H^H)^{-1} = Q diag(1/lambda) Q^H
    let n = eig.values.len();
    let q = &eig.vectors;
    let inv_gram = CMat::from_fn(n, n, |i, j| {
        let mut acc = Complex::new(T::zero(), T::zero());
        for m in 0..n {
            acc += q[(i, m)] * q[(j, m)].conj() * Complex::new(eig.values[m].recip(), T::zero());
        }
        acc
    });
    hh.matmul(&inv_gram)
}
