//! Ground truth for the sketch: the exact running covariance, the spectral
//! projections used to bound the sketch error, and the checks built on them.

mod proof;
mod report;

pub use proof::{
    verify_proof_steps, verify_proof_steps_many, ChainCheck, ProofStepReport, StepCheck,
    TelescopeCheck,
};
pub use report::{report_tol, verify_lemma1, BoundReport, BoundRow};

use crate::error::{Error, Result};
use crate::linalg::{sym_eigendecompose, sym_eigenvalues, SymMatrix};
use crate::scalar::Scalar;
use crate::sketch::{Batch, FdSketch, UpdateTrace};

/// Exact `C = Σₜ XₜXₜᵀ`, accumulated densely.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactCovariance<T> {
    covariance: SymMatrix<T>,
    steps: u64,
}

impl<T: Scalar> ExactCovariance<T> {
    pub fn new(dim: usize) -> Self {
        Self {
            covariance: SymMatrix::zeros(dim),
            steps: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.covariance.dim()
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn accumulate(&mut self, batch: &Batch<T>) -> Result<()> {
        self.covariance.add_outer_assign(batch)?;
        self.steps += 1;
        Ok(())
    }

    pub fn covariance(&self) -> &SymMatrix<T> {
        &self.covariance
    }

    /// Descending eigenvalues `λ₁ ≥ … ≥ λ_d` of `C`.
    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        sym_eigenvalues(&self.covariance)
    }
}

/// The per-update traces of one stream, in order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DeltaLedger<T> {
    records: Vec<UpdateTrace<T>>,
}

impl<T: Scalar> DeltaLedger<T> {
    pub fn new() -> Self {
        Self {
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, trace: UpdateTrace<T>) {
        self.records.push(trace);
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[UpdateTrace<T>] {
        &self.records
    }

    /// `Σₜ Δₜ`. `None` when the ledger is empty.
    pub fn delta_sum(&self) -> Option<SymMatrix<T>> {
        let mut it = self.records.iter();
        let mut acc = it.next()?.delta.clone();
        for r in it {
            acc = acc.add(&r.delta).expect("ledger deltas share a dimension");
        }
        Some(acc)
    }
}

/// A sketch run in lockstep with its exact covariance and delta ledger.
#[derive(Debug, Clone)]
pub struct TrackedStream<T> {
    pub sketch: FdSketch<T>,
    pub exact: ExactCovariance<T>,
    pub ledger: DeltaLedger<T>,
}

impl<T: Scalar> TrackedStream<T> {
    pub fn new(dim: usize, ell: usize) -> Result<Self> {
        Ok(Self {
            sketch: FdSketch::new(dim, ell)?,
            exact: ExactCovariance::new(dim),
            ledger: DeltaLedger::new(),
        })
    }

    pub fn push(&mut self, batch: &Batch<T>) -> Result<&UpdateTrace<T>> {
        let trace = self.sketch.update(batch)?;
        self.exact.accumulate(batch)?;
        self.ledger.push(trace);
        Ok(self.ledger.records.last().unwrap())
    }

    pub fn verify_lemma1(&self) -> Result<BoundReport> {
        verify_lemma1(&self.exact, &self.sketch)
    }

    pub fn verify_proof_steps(&self, ks: &[usize]) -> Result<Vec<ProofStepReport>> {
        verify_proof_steps_many(&self.ledger, &self.exact, &self.sketch, ks)
    }
}

/// Orthogonal projection `P̄` with a null space of dimension `null_dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection<T> {
    pub matrix: SymMatrix<T>,
    pub null_dim: usize,
}

impl<T: Scalar> Projection<T> {
    /// `tr(P̄ X P̄)`, evaluated as the Frobenius product `⟨P̄, X⟩` using
    /// `P̄² = P̄` and the cyclic property of the trace.
    pub fn projected_trace(&self, x: &SymMatrix<T>) -> Result<T> {
        self.matrix.frobenius_dot(x)
    }
}

/// `P̄ₖ = I − Σ_{i<k} uᵢuᵢᵀ`, where `uᵢ` are the top-`k` eigenvectors of `c`
/// in the eigensolver's deterministic order.
pub fn complement_projection<T: Scalar>(c: &SymMatrix<T>, k: usize) -> Result<Projection<T>> {
    let d = c.dim();
    if k > d {
        return Err(Error::param(format!("k must be <= d (got k={k}, d={d})")));
    }
    let mut matrix = SymMatrix::identity(d);
    if k > 0 {
        let eig = sym_eigendecompose(c)?;
        let weights: Vec<T> = (0..d).map(|i| if i < k { T::one() } else { T::zero() }).collect();
        let top = SymMatrix::from_spectrum(d, eig.vectors(), &weights);
        matrix = matrix.sub(&top)?;
    }
    Ok(Projection {
        matrix,
        null_dim: k,
    })
}

/// `Σ_{i>k} λᵢ` for descending `eigs`, summed in index order.
pub fn eigen_tail_sum<T: Scalar>(eigs: &[T], k: usize) -> Result<T> {
    if k > eigs.len() {
        return Err(Error::param(format!(
            "k must be <= number of eigenvalues (got k={k}, d={})",
            eigs.len()
        )));
    }
    if let Some(i) = eigs.windows(2).position(|w| !(w[0] >= w[1])) {
        return Err(Error::param(format!(
            "eigenvalues must be sorted descending (violated at index {})",
            i + 1
        )));
    }
    let mut acc = T::zero();
    for &v in &eigs[k..] {
        acc = acc + v;
    }
    Ok(acc)
}
