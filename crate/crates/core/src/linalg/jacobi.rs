//! Cyclic Jacobi eigensolver for dense symmetric matrices.
//!
//! Each sweep visits every off-diagonal pair `(p, q)` with `p < q` in row
//! order and applies the plane rotation that annihilates `a_pq`. The sweep
//! order is fixed, so the output is a deterministic function of the input.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::matrix::{check_finite, SymMatrix};

/// `S = U · diag(values) · Uᵀ` with orthonormal `U` and descending values.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition<T> {
    dim: usize,
    /// Column-major: eigenvector `k` occupies `vectors[k*d..(k+1)*d]`.
    vectors: Vec<T>,
    values: Vec<T>,
}

impl<T: Scalar> EigenDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Eigenvalues, largest first.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Eigenvector paired with `values()[k]`.
    pub fn vector(&self, k: usize) -> &[T] {
        &self.vectors[k * self.dim..(k + 1) * self.dim]
    }

    /// All eigenvectors, column-major.
    pub fn vectors(&self) -> &[T] {
        &self.vectors
    }

    pub fn into_parts(self) -> (Vec<T>, Vec<T>) {
        (self.vectors, self.values)
    }

    /// `U · diag(values) · Uᵀ`.
    pub fn reconstruct(&self) -> SymMatrix<T> {
        SymMatrix::from_spectrum(self.dim, &self.vectors, &self.values)
    }

    /// Rebuilds the matrix with each eigenvalue replaced by `f(λ)`.
    pub fn map_spectrum(&self, f: impl Fn(T) -> T) -> SymMatrix<T> {
        let values: Vec<T> = self.values.iter().map(|&v| f(v)).collect();
        SymMatrix::from_spectrum(self.dim, &self.vectors, &values)
    }

    /// `‖UᵀU − I‖_max`.
    pub fn orthonormality_residual(&self) -> T {
        let d = self.dim;
        let mut worst = T::zero();
        for a in 0..d {
            for b in a..d {
                let dot: T = self
                    .vector(a)
                    .iter()
                    .zip(self.vector(b))
                    .map(|(&x, &y)| x * y)
                    .sum();
                let target = if a == b { T::one() } else { T::zero() };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Full eigendecomposition of `s`, eigenvalues in descending order.
///
/// Ties keep the order in which the Jacobi iteration left them on the
/// diagonal (stable sort on index).
pub fn sym_eigendecompose<T: Scalar>(s: &SymMatrix<T>) -> Result<EigenDecomposition<T>> {
    let (values, vectors) = jacobi(s, true)?;
    let d = s.dim();
    let order = descending_order(&values);
    let mut sorted_vectors = Vec::with_capacity(d * d);
    for &k in &order {
        sorted_vectors.extend_from_slice(&vectors[k * d..(k + 1) * d]);
    }
    Ok(EigenDecomposition {
        dim: d,
        vectors: sorted_vectors,
        values: order.iter().map(|&k| values[k]).collect(),
    })
}

/// Eigenvalues only, descending. Skips accumulating the rotations.
pub fn sym_eigenvalues<T: Scalar>(s: &SymMatrix<T>) -> Result<Vec<T>> {
    let (values, _) = jacobi(s, false)?;
    Ok(descending_order(&values)
        .into_iter()
        .map(|k| values[k])
        .collect())
}

fn descending_order<T: Scalar>(values: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    // stable: equal values keep index order
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());
    order
}

fn off_diagonal_norm<T: Scalar>(a: &[T], n: usize) -> T {
    let mut acc = T::zero();
    for p in 0..n {
        for q in p + 1..n {
            let v = a[p * n + q];
            acc = acc + v * v;
        }
    }
    (acc + acc).sqrt()
}

/// Returns unsorted eigenvalues and, if requested, column-major eigenvectors.
fn jacobi<T: Scalar>(s: &SymMatrix<T>, want_vectors: bool) -> Result<(Vec<T>, Vec<T>)> {
    check_finite(s.as_slice())?;
    let n = s.dim();
    let mut a = s.as_slice().to_vec();
    let mut v = Vec::new();
    if want_vectors {
        v = vec![T::zero(); n * n];
        for i in 0..n {
            v[i * n + i] = T::one();
        }
    }

    let threshold = T::of(T::JACOBI_TOL) * s.frobenius_norm();
    let half = T::of(0.5);
    let mut sweeps = 0;
    let mut polished = false;
    loop {
        let off = off_diagonal_norm(&a, n);
        if off <= threshold {
            // One more sweep once converged: convergence is quadratic, so
            // this drives the residual from the threshold to rounding level.
            if polished || off == T::zero() {
                break;
            }
            polished = true;
        } else if sweeps == T::MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off.as_f64(),
            });
        }
        sweeps += 1;

        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) * half / apq;
                let theta_sq = theta * theta;
                let t = if theta_sq.is_finite() {
                    let t = T::one() / (theta.abs() + (theta_sq + T::one()).sqrt());
                    if theta < T::zero() {
                        -t
                    } else {
                        t
                    }
                } else {
                    half / theta
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let sn = t * c;

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = T::zero();
                a[q * n + p] = T::zero();
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    let new_rp = c * arp - sn * arq;
                    let new_rq = sn * arp + c * arq;
                    a[r * n + p] = new_rp;
                    a[p * n + r] = new_rp;
                    a[r * n + q] = new_rq;
                    a[q * n + r] = new_rq;
                }
                if want_vectors {
                    // columns p and q of V, stored contiguously
                    let (lo, hi) = v.split_at_mut(q * n);
                    let vp = &mut lo[p * n..(p + 1) * n];
                    let vq = &mut hi[..n];
                    for (xp, xq) in vp.iter_mut().zip(vq.iter_mut()) {
                        let (op, oq) = (*xp, *xq);
                        *xp = c * op - sn * oq;
                        *xq = sn * op + c * oq;
                    }
                }
            }
        }
    }

    let values = (0..n).map(|i| a[i * n + i]).collect();
    Ok((values, v))
}
