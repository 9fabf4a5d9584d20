//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real floating-point scalar the sketch and its verification harness run on.
///
/// Besides the arithmetic, each implementor carries the numeric tolerances
/// used throughout the crate. The `f64` values are the reference settings;
/// `f32` tolerances are loosened in proportion to its machine epsilon.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Jacobi stops once the off-diagonal Frobenius norm is below this
    /// fraction of the input's Frobenius norm.
    const JACOBI_TOL: f64;
    /// Maximum number of cyclic Jacobi sweeps.
    const MAX_SWEEPS: usize = 64;
    /// Relative reconstruction tolerance for eigendecompositions.
    const RECON_TOL: f64;
    /// Tolerance on `‖UᵀU − I‖_max`.
    const ORTHO_TOL: f64;
    /// Agreement tolerance between two routes to a spectral norm.
    const NORM_TOL: f64;
    /// Shrunk eigenvalues in `(-CLIP_TOL, 0)` are snapped to zero.
    const CLIP_TOL: f64;
    /// Default tolerance for positive semidefiniteness checks.
    const PSD_TOL: f64;
    /// Absolute part of the bound-report tolerance.
    const REPORT_TOL_ABS: f64;
    /// Part of the bound-report tolerance relative to the bound itself.
    const REPORT_TOL_REL: f64;

    /// Lossless for `f32`/`f64` inputs and from small integers.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 is representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("float converts to f64")
    }

    fn of_usize(v: usize) -> Self {
        Self::from_usize(v).expect("usize is representable")
    }
}

impl Scalar for f64 {
    const JACOBI_TOL: f64 = 1e-12;
    const RECON_TOL: f64 = 1e-9;
    const ORTHO_TOL: f64 = 1e-9;
    const NORM_TOL: f64 = 1e-9;
    const CLIP_TOL: f64 = 1e-12;
    const PSD_TOL: f64 = 1e-10;
    const REPORT_TOL_ABS: f64 = 1e-8;
    const REPORT_TOL_REL: f64 = 1e-8;
}

impl Scalar for f32 {
    const JACOBI_TOL: f64 = 2e-6;
    const RECON_TOL: f64 = 5e-4;
    const ORTHO_TOL: f64 = 5e-4;
    const NORM_TOL: f64 = 5e-4;
    const CLIP_TOL: f64 = 1e-5;
    const PSD_TOL: f64 = 5e-4;
    const REPORT_TOL_ABS: f64 = 1e-3;
    const REPORT_TOL_REL: f64 = 1e-3;
}
