//! Scalar abstraction shared by the numeric modules.
//!
//! Every numeric routine in the crate is written against [`Real`], which is
//! implemented for `f32` and `f64`. Tolerances live in a single
//! [`NumericPolicy`] record per scalar type.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Tolerances and iteration limits used throughout the crate.
///
/// Values are stored as `f64` and converted on use so that one record can
/// describe any scalar type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericPolicy {
    /// Maximum `|m(i,j) - conj(m(j,i))|` accepted for a Hermitian input.
    pub hermitian_tol: f64,
    /// Eigenvalues above `-psd_tol` count as non-negative.
    pub psd_tol: f64,
    /// Eigenvalue floor applied before taking logarithms.
    pub log_floor: f64,
    /// `|lambda_1k|` below this routes the spectrum through the diagonal branch.
    pub coupling_zero: f64,
    /// Smallest `x_11` for which a population prediction is defined.
    pub population_floor: f64,
    /// Slack on the record constraints (`x11 + xkk <= 1`, minor positivity).
    pub record_slack: f64,
    /// Records with `1 - x11 - xkk` below this are infeasible for the inverse map.
    pub infeasible_margin: f64,
    /// Gradient norm at which the Newton solver stops.
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    pub jacobi_max_sweeps: usize,
}

impl NumericPolicy {
    pub const F64: NumericPolicy = NumericPolicy {
        hermitian_tol: 1e-12,
        psd_tol: 1e-10,
        log_floor: 1e-12,
        coupling_zero: 1e-14,
        population_floor: 1e-12,
        record_slack: 1e-9,
        infeasible_margin: 1e-12,
        newton_tol: 1e-14,
        newton_max_iter: 200,
        jacobi_max_sweeps: 64,
    };

    pub const F32: NumericPolicy = NumericPolicy {
        hermitian_tol: 1e-5,
        psd_tol: 1e-5,
        log_floor: 1e-6,
        coupling_zero: 1e-7,
        population_floor: 1e-6,
        record_slack: 1e-4,
        infeasible_margin: 1e-6,
        newton_tol: 1e-6,
        newton_max_iter: 200,
        jacobi_max_sweeps: 64,
    };
}

/// Floating-point scalar usable by every numeric module: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    const POLICY: NumericPolicy;

    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Real for f32 {
    const POLICY: NumericPolicy = NumericPolicy::F32;
}

impl Real for f64 {
    const POLICY: NumericPolicy = NumericPolicy::F64;
}

/// Shorthand for `Complex::new(re, 0)`.
pub(crate) fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}
