//! Small dense helpers shared by the public modules.

use nalgebra::{Cholesky, DMatrix, Dyn};

use crate::error::{Error, Result};
use crate::forms::Scalar;
use crate::C64;

pub(crate) fn ensure_square<T>(m: &DMatrix<T>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

pub(crate) fn ensure_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

pub(crate) fn ensure_finite<T: Scalar>(m: &DMatrix<T>) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Induced ∞-norm (largest absolute row sum).
pub(crate) fn inf_norm<T: Scalar>(m: &DMatrix<T>) -> f64 {
    m.row_iter()
        .map(|row| row.iter().map(|x| x.modulus()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub(crate) fn hermitian_part<T: Scalar>(m: &DMatrix<T>) -> DMatrix<T> {
    (m + m.adjoint()) * T::from_real(0.5)
}

/// `num / den`, falling back to the absolute value when the scale vanishes.
pub(crate) fn relative(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

pub(crate) fn spectral_norm<T: Scalar>(m: &DMatrix<T>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max()
}

pub(crate) fn cholesky<T: Scalar>(m: &DMatrix<T>) -> Result<Cholesky<T, Dyn>> {
    Cholesky::new(hermitian_part(m)).ok_or(Error::SingularMetric)
}

pub(crate) fn complexify(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|x| C64::new(x, 0.0))
}

/// `L⁻¹ K L⁻†` for a Hermitian `K` and lower-triangular `L`.
pub(crate) fn congruence_inverse<T: Scalar>(l: &DMatrix<T>, k: &DMatrix<T>) -> DMatrix<T> {
    let left = l
        .solve_lower_triangular(k)
        .expect("Cholesky factor has a non-zero diagonal");
    let both = l
        .solve_lower_triangular(&left.adjoint())
        .expect("Cholesky factor has a non-zero diagonal");
    hermitian_part(&both)
}
