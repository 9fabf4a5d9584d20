use crate::error::{Error, Result};
use crate::linalg::matrix_check_finite;
use crate::scalar::Scalar;

/// One stream element `X_t`: a `d × n_t` matrix kept as `n_t` columns of
/// length `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Batch<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> Batch<T> {
    /// `data` holds the columns back to back. Requires `dim ≥ 1`, at least
    /// one column, and finite entries.
    pub fn from_column_major(dim: usize, data: Vec<T>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("batch dimension must be positive"));
        }
        if data.is_empty() {
            return Err(Error::param("batch must contain at least one column"));
        }
        if !data.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: data.len() % dim,
            });
        }
        matrix_check_finite(&data)?;
        Ok(Self { dim, data })
    }

    pub fn from_columns(dim: usize, columns: &[Vec<T>]) -> Result<Self> {
        let mut data = Vec::with_capacity(dim * columns.len());
        for col in columns {
            if col.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: col.len(),
                });
            }
            data.extend_from_slice(col);
        }
        Self::from_column_major(dim, data)
    }

    /// Row count `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Column count `n_t`.
    pub fn width(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn columns(&self) -> impl Iterator<Item = &[T]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_column_major(&self) -> &[T] {
        &self.data
    }
}
