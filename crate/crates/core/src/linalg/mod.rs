//! Dense symmetric linear algebra: eigendecomposition, norms, traces and
//! semidefiniteness tests.

mod jacobi;
mod matrix;

pub use jacobi::{sym_eigendecompose, sym_eigenvalues, EigenDecomposition};
pub use matrix::SymMatrix;
pub(crate) use matrix::check_finite as matrix_check_finite;

use crate::error::Result;
use crate::scalar::Scalar;

/// Largest absolute eigenvalue.
pub fn spectral_norm<T: Scalar>(s: &SymMatrix<T>) -> Result<T> {
    let values = sym_eigenvalues(s)?;
    Ok(values.iter().fold(T::zero(), |m, &v| m.max(v.abs())))
}

pub fn trace<T: Scalar>(s: &SymMatrix<T>) -> T {
    s.trace()
}

/// Smallest eigenvalue, or zero for an empty matrix.
pub fn min_eigenvalue<T: Scalar>(s: &SymMatrix<T>) -> Result<T> {
    Ok(sym_eigenvalues(s)?.last().copied().unwrap_or_else(T::zero))
}

/// True iff the smallest eigenvalue is at least `-tol`.
pub fn is_psd<T: Scalar>(s: &SymMatrix<T>, tol: T) -> Result<bool> {
    Ok(min_eigenvalue(s)? >= -tol)
}
