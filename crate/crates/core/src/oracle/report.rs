use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::spectral_norm;
use crate::scalar::Scalar;
use crate::sketch::{lemma1_bound, FdSketch};

use super::ExactCovariance;

/// Measured sketch error against the bound for every `k < ℓ`.
///
/// Field names are part of the JSON report format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub d: usize,
    pub ell: usize,
    pub steps: u64,
    /// `‖C − C̃‖`; `None` when no exact covariance was tracked.
    pub measured_error: Option<f64>,
    pub rows: Vec<BoundRow>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub k: usize,
    pub bound: f64,
    /// `bound − measured_error`; negative means the bound was exceeded.
    pub slack: f64,
    pub pass: bool,
}

impl BoundReport {
    /// Report for a run that did not track the exact covariance.
    pub fn unverified(d: usize, ell: usize, steps: u64) -> Self {
        Self {
            d,
            ell,
            steps,
            measured_error: None,
            rows: Vec::new(),
            pass: true,
        }
    }
}

/// Allowed excess of a measured quantity over a bound of size `bound`.
pub fn report_tol<T: Scalar>(bound: T) -> T {
    T::of(T::REPORT_TOL_ABS) + T::of(T::REPORT_TOL_REL) * bound.abs()
}

/// Checks `‖C − C̃‖ ≤ (1/(ℓ−k)) Σ_{i>k} λᵢ(C)` for every `k < ℓ`.
pub fn verify_lemma1<T: Scalar>(exact: &ExactCovariance<T>, sketch: &FdSketch<T>) -> Result<BoundReport> {
    if exact.dim() != sketch.dim() {
        return Err(Error::DimensionMismatch {
            expected: sketch.dim(),
            found: exact.dim(),
        });
    }
    let residual = exact.covariance().sub(sketch.covariance_estimate())?;
    let measured = spectral_norm(&residual)?;
    let eigs = exact.eigenvalues()?;
    let rows = (0..sketch.ell())
        .map(|k| {
            let bound = lemma1_bound(&eigs, sketch.ell(), k)?;
            Ok(BoundRow {
                k,
                bound: bound.as_f64(),
                slack: (bound - measured).as_f64(),
                pass: measured <= bound + report_tol(bound),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundReport {
        d: sketch.dim(),
        ell: sketch.ell(),
        steps: sketch.steps(),
        measured_error: Some(measured.as_f64()),
        pass: rows.iter().all(|r| r.pass),
        rows,
    })
}
