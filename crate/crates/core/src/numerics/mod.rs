//! Numerical kernels: periodic quadrature, determinants, Hermitian spectra.

mod det;
mod eigen;
mod quadrature;

use std::ops::RangeInclusive;

pub use det::{
    dense_determinant, lu_log_det, toeplitz_determinant, toeplitz_log_det, toeplitz_matrix, LogDet,
    DENSE_MAX_DIM,
};
pub use eigen::{hermitian_eigen, hermitian_eigenvalues, hermiticity_residual};
pub use quadrature::{
    fourier_coefficient, fourier_window, trapezoid_coefficient, trapezoid_coefficients,
    FourierEstimate, SymbolFunction, CONVERGENCE_TOL, DEFAULT_GRID_POINTS, MAX_GRID_POINTS,
};

use crate::scalar::{Real, C};

/// Contiguous run of coefficients `a_n`, `n ∈ [min_index, min_index + len)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzSequence<R: Real> {
    min_index: i64,
    values: Vec<C<R>>,
}

impl<R: Real> ToeplitzSequence<R> {
    pub fn new(min_index: i64, values: Vec<C<R>>) -> Self {
        Self { min_index, values }
    }

    pub fn from_fn(range: RangeInclusive<i64>, f: impl FnMut(i64) -> C<R>) -> Self {
        let min_index = *range.start();
        Self {
            min_index,
            values: range.map(f).collect(),
        }
    }

    pub fn from_real(min_index: i64, values: impl IntoIterator<Item = R>) -> Self {
        Self {
            min_index,
            values: values.into_iter().map(crate::scalar::cr).collect(),
        }
    }

    pub fn get(&self, n: i64) -> Option<C<R>> {
        let k = n.checked_sub(self.min_index)?;
        if k < 0 {
            return None;
        }
        self.values.get(k as usize).copied()
    }

    pub fn min_index(&self) -> i64 {
        self.min_index
    }

    pub fn max_index(&self) -> i64 {
        self.min_index + self.values.len() as i64 - 1
    }

    pub fn index_range(&self) -> RangeInclusive<i64> {
        self.min_index..=self.max_index()
    }

    pub fn values(&self) -> &[C<R>] {
        &self.values
    }

    /// Largest `|Im a_n|` in the window.
    pub fn max_imag(&self) -> R {
        self.values
            .iter()
            .map(|v| v.im.abs())
            .fold(R::zero(), |a, b| if b > a { b } else { a })
    }
}
