//! Streaming covariance sketching with Frequent Directions.
//!
//! [`FdSketch`](sketch::FdSketch) maintains a rank-`(ℓ−1)` PSD approximation
//! `C̃` of the covariance `C = Σₜ XₜXₜᵀ` of a stream of `d × nₜ` batches.
//! For every `k < ℓ` the error obeys
//!
//! ```text
//! ‖C − C̃‖ ≤ (1/(ℓ−k)) · Σ_{i>k} λᵢ(C)
//! ```
//!
//! The [`oracle`] module tracks `C` exactly and checks that bound, together
//! with each intermediate inequality that implies it.
//!
//! All numeric types are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the scalar.

pub mod cli;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod scalar;
pub mod sketch;
pub mod stream;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type SymMatrixF64 = linalg::SymMatrix<f64>;
pub type SymMatrixF32 = linalg::SymMatrix<f32>;
pub type EigenDecompositionF64 = linalg::EigenDecomposition<f64>;
pub type EigenDecompositionF32 = linalg::EigenDecomposition<f32>;
pub type BatchF64 = sketch::Batch<f64>;
pub type BatchF32 = sketch::Batch<f32>;
pub type FdSketchF64 = sketch::FdSketch<f64>;
pub type FdSketchF32 = sketch::FdSketch<f32>;
pub type UpdateTraceF64 = sketch::UpdateTrace<f64>;
pub type UpdateTraceF32 = sketch::UpdateTrace<f32>;
pub type ExactCovarianceF64 = oracle::ExactCovariance<f64>;
pub type ExactCovarianceF32 = oracle::ExactCovariance<f32>;
pub type TrackedStreamF64 = oracle::TrackedStream<f64>;
pub type TrackedStreamF32 = oracle::TrackedStream<f32>;
