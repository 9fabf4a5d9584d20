//! Step-by-step audit of why the sketch error stays within its bound.
//!
//! For a fixed `k` the argument runs:
//!
//! ```text
//! ‖C − C̃‖ = ‖Σ Δₜ‖ ≤ Σ ‖Δₜ‖ ≤ tr(P̄ (Σ Δₜ) P̄)/(ℓ−k) ≤ tr(P̄ C P̄)/(ℓ−k) = Σ_{i>k} λᵢ/(ℓ−k)
//! ```
//!
//! and every link, together with the per-step facts it rests on, is
//! evaluated numerically with its slack.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, sym_eigenvalues};
use crate::scalar::Scalar;
use crate::sketch::FdSketch;

use super::{complement_projection, eigen_tail_sum, report_tol, DeltaLedger, ExactCovariance};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepCheck {
    /// 1-based update index.
    pub t: usize,
    pub lambda_ell: f64,
    pub delta_norm: f64,
    pub delta_min_eigenvalue: f64,
    /// `Δₜ` is PSD.
    pub psd: bool,
    /// `‖Δₜ‖ = λₗᵗ` and the top `ℓ` eigenvalues of `Δₜ` all equal `λₗᵗ`.
    pub top_equal: bool,
    /// `tr(P̄ Δₜ P̄)/(ℓ−k) − ‖Δₜ‖`.
    pub projection_slack: f64,
    pub projection_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TelescopeCheck {
    /// `‖Σ Δₜ − (C − C̃)‖_max`.
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainCheck {
    pub measured_error: f64,
    pub sum_delta_norms: f64,
    /// `tr(P̄ (Σ Δₜ) P̄)/(ℓ−k)`.
    pub projected_delta_sum: f64,
    /// `tr(P̄ C P̄)/(ℓ−k)`.
    pub projected_covariance: f64,
    /// `Σ_{i>k} λᵢ/(ℓ−k)`.
    pub tail_bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofStepReport {
    pub k: usize,
    pub ell: usize,
    pub steps: u64,
    pub per_step: Vec<StepCheck>,
    pub telescoping: TelescopeCheck,
    /// `tr(P̄ C̃ P̄)`, required to be non-negative.
    pub sketch_projected_trace: f64,
    pub sketch_trace_ok: bool,
    pub chain: ChainCheck,
    pub pass: bool,
}

impl ProofStepReport {
    pub fn per_step_pass(&self) -> bool {
        self.per_step
            .iter()
            .all(|s| s.psd && s.top_equal && s.projection_ok)
    }
}

/// Audits the bound's derivation for one `k < ℓ`.
pub fn verify_proof_steps<T: Scalar>(
    ledger: &DeltaLedger<T>,
    exact: &ExactCovariance<T>,
    sketch: &FdSketch<T>,
    k: usize,
) -> Result<ProofStepReport> {
    Ok(verify_proof_steps_many(ledger, exact, sketch, &[k])?.remove(0))
}

struct DeltaSpectrum<T> {
    norm: T,
    min: T,
    top_equal: bool,
}

/// [`verify_proof_steps`] for several `k`, sharing the per-step spectra.
pub fn verify_proof_steps_many<T: Scalar>(
    ledger: &DeltaLedger<T>,
    exact: &ExactCovariance<T>,
    sketch: &FdSketch<T>,
    ks: &[usize],
) -> Result<Vec<ProofStepReport>> {
    let ell = sketch.ell();
    if exact.dim() != sketch.dim() {
        return Err(Error::DimensionMismatch {
            expected: sketch.dim(),
            found: exact.dim(),
        });
    }
    if ledger.len() as u64 != sketch.steps() {
        return Err(Error::LedgerLength {
            expected: sketch.steps() as usize,
            found: ledger.len(),
        });
    }
    if let Some(&k) = ks.iter().find(|&&k| k >= ell) {
        return Err(Error::param(format!("k must be < ell (got k={k}, ell={ell})")));
    }

    let norm_tol = T::of(T::NORM_TOL);
    let psd_tol = T::of(T::PSD_TOL);
    let spectra = ledger
        .records()
        .iter()
        .map(|r| {
            let values = sym_eigenvalues(&r.delta)?;
            let norm = values.iter().fold(T::zero(), |m, &v| m.max(v.abs()));
            let tol = norm_tol * r.lambda_ell.max(T::one());
            let top_equal = (norm - r.lambda_ell).abs() <= tol
                && values[..ell]
                    .iter()
                    .all(|&v| (v - r.lambda_ell).abs() <= tol);
            Ok(DeltaSpectrum {
                norm,
                min: values.last().copied().unwrap_or_else(T::zero),
                top_equal,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let c = exact.covariance();
    let c_tilde = sketch.covariance_estimate();
    let residual = c.sub(c_tilde)?;
    let measured = spectral_norm(&residual)?;
    let eigs = exact.eigenvalues()?;
    let delta_sum = ledger
        .delta_sum()
        .unwrap_or_else(|| crate::linalg::SymMatrix::zeros(sketch.dim()));
    let telescope_residual = delta_sum.sub(&residual)?.max_abs();
    let telescope_tol = T::of_usize(ledger.len())
        * T::of(T::RECON_TOL)
        * c.max_abs().max(T::one());
    let telescoping = TelescopeCheck {
        residual: telescope_residual.as_f64(),
        tolerance: telescope_tol.as_f64(),
        pass: telescope_residual <= telescope_tol,
    };
    let sum_delta_norms = spectra.iter().fold(T::zero(), |acc, s| acc + s.norm);

    ks.iter()
        .map(|&k| {
            let proj = complement_projection(c, k)?;
            let width = T::of_usize(ell - k);

            let per_step = ledger
                .records()
                .iter()
                .zip(&spectra)
                .enumerate()
                .map(|(i, (rec, sp))| {
                    let rhs = proj.projected_trace(&rec.delta)? / width;
                    Ok(StepCheck {
                        t: i + 1,
                        lambda_ell: rec.lambda_ell.as_f64(),
                        delta_norm: sp.norm.as_f64(),
                        delta_min_eigenvalue: sp.min.as_f64(),
                        psd: sp.min >= -psd_tol,
                        top_equal: sp.top_equal,
                        projection_slack: (rhs - sp.norm).as_f64(),
                        projection_ok: sp.norm <= rhs + report_tol(rhs),
                    })
                })
                .collect::<Result<Vec<_>>>()?;

            let sketch_trace = proj.projected_trace(c_tilde)?;
            let projected_delta_sum = proj.projected_trace(&delta_sum)? / width;
            let projected_covariance = proj.projected_trace(c)? / width;
            let tail_bound = eigen_tail_sum(&eigs, k)? / width;
            let chain_pass = measured <= sum_delta_norms + report_tol(sum_delta_norms)
                && sum_delta_norms <= projected_delta_sum + report_tol(projected_delta_sum)
                && projected_delta_sum <= projected_covariance + report_tol(projected_covariance)
                && (projected_covariance - tail_bound).abs() <= report_tol(tail_bound);
            let chain = ChainCheck {
                measured_error: measured.as_f64(),
                sum_delta_norms: sum_delta_norms.as_f64(),
                projected_delta_sum: projected_delta_sum.as_f64(),
                projected_covariance: projected_covariance.as_f64(),
                tail_bound: tail_bound.as_f64(),
                pass: chain_pass,
            };

            let mut report = ProofStepReport {
                k,
                ell,
                steps: sketch.steps(),
                per_step,
                telescoping: telescoping.clone(),
                sketch_projected_trace: sketch_trace.as_f64(),
                sketch_trace_ok: sketch_trace >= -psd_tol,
                chain,
                pass: false,
            };
            report.pass = report.per_step_pass()
                && report.telescoping.pass
                && report.sketch_trace_ok
                && report.chain.pass;
            Ok(report)
        })
        .collect()
}
