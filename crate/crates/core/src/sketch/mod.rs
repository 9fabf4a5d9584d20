//! Frequent Directions sketch of a stream's covariance.
//!
//! The sketch keeps a PSD matrix `C̃ₜ` of rank at most `ℓ − 1`. Each update
//! eigendecomposes `C̃ₜ₋₁ + XₜXₜᵀ = U Λ Uᵀ`, subtracts the `ℓ`-th largest
//! eigenvalue from the whole spectrum and floors the result at zero.
//!
//! Working memory is `O(d²)` here because `C̃ₜ` is held densely and every
//! update performs a full `d × d` eigendecomposition. The `O(dℓ)` footprint
//! of a factored implementation additionally needs batch widths `nₜ < ℓ`;
//! any `nₜ ≥ 1` is accepted.

mod batch;
mod snapshot;

pub use batch::Batch;
pub use snapshot::SNAPSHOT_MAGIC;

use crate::error::{Error, Result};
use crate::linalg::{sym_eigendecompose, SymMatrix};
use crate::oracle::eigen_tail_sum;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct FdSketch<T> {
    dim: usize,
    ell: usize,
    current: SymMatrix<T>,
    steps: u64,
    shrinkage_total: T,
}

/// What a single update did: the shrinkage applied and the loss it caused.
#[derive(Debug, Clone, PartialEq)]
pub struct UpdateTrace<T> {
    /// `ℓ`-th largest eigenvalue of `C̃ₜ₋₁ + XₜXₜᵀ`, the amount subtracted.
    pub lambda_ell: T,
    /// `Δₜ = XₜXₜᵀ − C̃ₜ + C̃ₜ₋₁`.
    pub delta: SymMatrix<T>,
    /// Eigenvalues of the new `C̃ₜ` as constructed, descending. Entries
    /// `ℓ−1..d` are exactly zero.
    pub spectrum: Vec<T>,
}

impl<T: Scalar> FdSketch<T> {
    /// Zero sketch of dimension `dim` keeping at most `ell − 1` directions.
    pub fn new(dim: usize, ell: usize) -> Result<Self> {
        if ell == 0 || ell > dim {
            return Err(Error::param(format!(
                "ell must satisfy 1 <= ell <= d (got ell={ell}, d={dim})"
            )));
        }
        Ok(Self {
            dim,
            ell,
            current: SymMatrix::zeros(dim),
            steps: 0,
            shrinkage_total: T::zero(),
        })
    }

    pub(crate) fn from_parts(
        dim: usize,
        ell: usize,
        current: SymMatrix<T>,
        steps: u64,
        shrinkage_total: T,
    ) -> Result<Self> {
        let mut sk = Self::new(dim, ell)?;
        sk.current.check_dim(current.dim())?;
        if !(shrinkage_total >= T::zero()) {
            return Err(Error::param("shrinkage total must be non-negative"));
        }
        sk.current = current;
        sk.steps = steps;
        sk.shrinkage_total = shrinkage_total;
        Ok(sk)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Number of updates applied so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Running sum of the shrinkage amounts `Σₜ λₗᵗ`.
    pub fn shrinkage_total(&self) -> T {
        self.shrinkage_total
    }

    /// The current approximation `C̃ₜ` of the stream covariance.
    pub fn covariance_estimate(&self) -> &SymMatrix<T> {
        &self.current
    }

    /// Folds one batch into the sketch. On error the sketch is unchanged.
    pub fn update(&mut self, batch: &Batch<T>) -> Result<UpdateTrace<T>> {
        self.current.check_dim(batch.dim())?;
        let gram = SymMatrix::zeros(self.dim).outer_product_accumulate(batch)?;
        let combined = self.current.add(&gram)?;
        let eig = sym_eigendecompose(&combined)?;

        let ell_index = self.ell - 1;
        let mut lambda_ell = eig.values()[ell_index];
        // Below the eigensolver's resolution an eigenvalue is indistinguishable
        // from zero; combined is PSD so the true value is non-negative.
        if lambda_ell <= T::of(T::CLIP_TOL) * combined.frobenius_norm() {
            lambda_ell = T::zero();
        }

        let clip = T::of(T::CLIP_TOL);
        let spectrum: Vec<T> = eig
            .values()
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                if i >= ell_index {
                    return T::zero();
                }
                let shrunk = v - lambda_ell;
                if shrunk < T::zero() && shrunk > -clip {
                    T::zero()
                } else {
                    shrunk.max(T::zero())
                }
            })
            .collect();

        // With nothing to subtract, U·max(Λ, 0)·Uᵀ is the PSD input itself;
        // keeping it avoids compounding reconstruction error across steps.
        let next = if lambda_ell == T::zero() {
            combined
        } else {
            SymMatrix::from_spectrum(self.dim, eig.vectors(), &spectrum)
        };
        let delta = gram.sub(&next)?.add(&self.current)?;

        self.current = next;
        self.steps += 1;
        self.shrinkage_total = self.shrinkage_total + lambda_ell;
        Ok(UpdateTrace {
            lambda_ell,
            delta,
            spectrum,
        })
    }
}

/// `(1/(ℓ−k)) · Σ_{i>k} λᵢ`, the error envelope for `‖C − C̃‖` in terms of
/// the exact covariance's descending eigenvalues `eigs`.
pub fn lemma1_bound<T: Scalar>(eigs: &[T], ell: usize, k: usize) -> Result<T> {
    if k >= ell {
        return Err(Error::param(format!("k must be < ell (got k={k}, ell={ell})")));
    }
    if eigs.len() < ell {
        return Err(Error::param(format!(
            "need at least ell={ell} eigenvalues, got {}",
            eigs.len()
        )));
    }
    Ok(eigen_tail_sum(eigs, k)? / T::of_usize(ell - k))
}
