use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sketch::Batch;

/// Dense symmetric `d × d` matrix.
///
/// Stored as a full row-major square. Every constructor and mutator writes
/// `(i, j)` and `(j, i)` together, so `get(i, j) == get(j, i)` holds bit for
/// bit at all times.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> SymMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![T::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = T::one();
        }
        m
    }

    /// Fails on non-finite entries.
    pub fn from_diag(diag: &[T]) -> Result<Self> {
        check_finite(diag)?;
        let dim = diag.len();
        let mut m = Self::zeros(dim);
        for (i, &v) in diag.iter().enumerate() {
            m.data[i * dim + i] = v;
        }
        Ok(m)
    }

    /// Builds a matrix from `f(i, j)` evaluated on the upper triangle `i <= j`.
    pub fn from_upper_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds a matrix from square rows, replacing it by `(A + Aᵀ)/2`.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.len();
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            check_finite(row)?;
        }
        let half = T::of(0.5);
        Ok(Self::from_upper_fn(dim, |i, j| {
            if i == j {
                rows[i][i]
            } else {
                (rows[i][j] + rows[j][i]) * half
            }
        }))
    }

    /// Inverse of [`SymMatrix::packed_upper`].
    pub fn from_packed_upper(dim: usize, packed: &[T]) -> Result<Self> {
        let expected = dim * (dim + 1) / 2;
        if packed.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: packed.len(),
            });
        }
        check_finite(packed)?;
        let mut it = packed.iter();
        Ok(Self::from_upper_fn(dim, |_, _| *it.next().unwrap()))
    }

    /// Upper triangle, row by row: `(0,0), (0,1), …, (0,d−1), (1,1), …`.
    pub fn packed_upper(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.dim * (self.dim + 1) / 2);
        for i in 0..self.dim {
            out.extend_from_slice(&self.data[i * self.dim + i..(i + 1) * self.dim]);
        }
        out
    }

    /// Reassembles `Σ values[k] · u_k u_kᵀ`, where `u_k` is column `k` of
    /// the column-major `vectors`.
    pub fn from_spectrum(dim: usize, vectors: &[T], values: &[T]) -> Self {
        debug_assert_eq!(vectors.len(), dim * dim);
        debug_assert_eq!(values.len(), dim);
        let mut m = Self::zeros(dim);
        for (k, &lambda) in values.iter().enumerate() {
            if lambda == T::zero() {
                continue;
            }
            let u = &vectors[k * dim..(k + 1) * dim];
            for i in 0..dim {
                let scaled = lambda * u[i];
                for j in i..dim {
                    let v = m.data[i * dim + j] + scaled * u[j];
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.dim + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    /// Row-major view of all `d²` entries.
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&v| v * factor).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        self.check_dim(other.dim)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// `self + X Xᵀ` for a `d × n` batch `X`.
    pub fn outer_product_accumulate(&self, batch: &Batch<T>) -> Result<Self> {
        let mut out = self.clone();
        out.add_outer_assign(batch)?;
        Ok(out)
    }

    /// In-place `self += X Xᵀ`. Only the upper triangle is summed and then
    /// mirrored, which keeps the result exactly symmetric.
    pub fn add_outer_assign(&mut self, batch: &Batch<T>) -> Result<()> {
        self.check_dim(batch.dim())?;
        let d = self.dim;
        for col in batch.columns() {
            for i in 0..d {
                let xi = col[i];
                if xi == T::zero() {
                    continue;
                }
                for j in i..d {
                    let v = self.data[i * d + j] + xi * col[j];
                    self.set(i, j, v);
                }
            }
        }
        Ok(())
    }

    /// Sum of the diagonal, accumulated in index order.
    pub fn trace(&self) -> T {
        let mut acc = T::zero();
        for i in 0..self.dim {
            acc = acc + self.get(i, i);
        }
        acc
    }

    /// `‖S‖_max`, the largest absolute entry.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &v| m.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|&v| v * v).sum::<T>().sqrt()
    }

    /// Frobenius inner product `Σᵢⱼ Aᵢⱼ Bᵢⱼ = tr(A B)` for symmetric `A`, `B`.
    pub fn frobenius_dot(&self, other: &Self) -> Result<T> {
        self.check_dim(other.dim)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| a * b)
            .sum())
    }

    /// Dense product `A B`. The result is symmetric only when `A` and `B`
    /// commute, so it is returned as plain row-major data.
    pub fn matmul(&self, other: &Self) -> Result<Vec<T>> {
        self.check_dim(other.dim)?;
        let d = self.dim;
        let mut out = vec![T::zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a == T::zero() {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] = out[i * d + j] + a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub(crate) fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found,
            });
        }
        Ok(())
    }
}

pub(crate) fn check_finite<T: Scalar>(values: &[T]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(pos) => Err(Error::NonFinite(pos)),
        None => Ok(()),
    }
}
