//! Scalar abstraction: every numeric routine in this crate is generic over a
//! real floating-point type implementing [`Scalar`].
//!
//! `f64` is the type the simulator and CLI run at; `f32` is supported for
//! callers that want the smaller footprint. Iterative algorithms need
//! precision-dependent tolerances, so those live here as associated
//! constants rather than as magic numbers inside the algorithms.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real scalar type the library is generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Relative tolerance for the Hermitian-input check of the eigensolver.
    const HERM_TOL: Self;
    /// Jacobi sweep convergence: off-diagonal Frobenius norm below
    /// `EIG_TOL * ||A||_F` stops the iteration.
    const EIG_TOL: Self;
    /// Singular values at or below `RANK_TOL * sigma_max` count as zero.
    const RANK_TOL: Self;
    /// Entries of a unit vector below this modulus are "zero" when fixing
    /// the singular-vector phase convention.
    const PHASE_TOL: Self;
    /// LP pivot tolerance.
    const LP_PIVOT_TOL: Self;
    /// LP feasibility tolerance.
    const LP_FEAS_TOL: Self;
    /// LP optimality (reduced-cost) tolerance.
    const LP_OPT_TOL: Self;
    /// Distance tolerance for "is this value a constellation point".
    const POINT_TOL: Self;
    /// Threshold-decomposition denominators below this are degenerate.
    const DEGENERATE_TOL: Self;

    /// Cast from `f64`, panicking on unrepresentable input. All literals the
    /// crate casts are small human-written constants, so failure is a bug.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("literal not representable in this scalar type")
    }
}

impl Scalar for f64 {
    const HERM_TOL: Self = 1e-10;
    const EIG_TOL: Self = 1e-12;
    const RANK_TOL: Self = 1e-10;
    const PHASE_TOL: Self = 1e-12;
    const LP_PIVOT_TOL: Self = 1e-10;
    const LP_FEAS_TOL: Self = 1e-8;
    const LP_OPT_TOL: Self = 1e-9;
    const POINT_TOL: Self = 1e-9;
    const DEGENERATE_TOL: Self = 1e-12;
}

impl Scalar for f32 {
    const HERM_TOL: Self = 1e-4;
    const EIG_TOL: Self = 1e-6;
    const RANK_TOL: Self = 1e-5;
    const PHASE_TOL: Self = 1e-6;
    const LP_PIVOT_TOL: Self = 1e-5;
    const LP_FEAS_TOL: Self = 1e-4;
    const LP_OPT_TOL: Self = 1e-4;
    const POINT_TOL: Self = 1e-4;
    const DEGENERATE_TOL: Self = 1e-6;
}
