//! Determinants by LU factorization with partial pivoting.
//!
//! Pivots are folded into a unit phase and a log-magnitude so that products of
//! hundreds of small pivots neither underflow nor overflow before the end.

use nalgebra::{ComplexField, DMatrix};

use crate::error::{Error, Result};
use crate::scalar::{c, Real, C};

use super::ToeplitzSequence;

/// Largest matrix accepted by [`dense_determinant`].
pub const DENSE_MAX_DIM: usize = 64;

/// `det = phase · exp(log_abs)`, or exactly zero when `singular`.
#[derive(Debug, Clone, Copy)]
pub struct LogDet<R: Real> {
    pub phase: C<R>,
    pub log_abs: R,
    pub singular: bool,
}

impl<R: Real> LogDet<R> {
    pub fn value(&self) -> C<R> {
        if self.singular {
            c(R::zero(), R::zero())
        } else {
            self.phase * self.log_abs.exp()
        }
    }
}

/// In-place LU factorization, returning the determinant in log form.
pub fn lu_log_det<R: Real>(mut a: DMatrix<C<R>>) -> LogDet<R> {
    let n = a.nrows();
    debug_assert_eq!(n, a.ncols());
    let mut phase = c(R::one(), R::zero());
    let mut log_abs = R::zero();
    for k in 0..n {
        let mut piv = k;
        let mut best = a[(k, k)].modulus();
        for i in (k + 1)..n {
            let m = a[(i, k)].modulus();
            if m > best {
                best = m;
                piv = i;
            }
        }
        if best == R::zero() {
            return LogDet {
                phase: c(R::zero(), R::zero()),
                log_abs: R::zero(),
                singular: true,
            };
        }
        if piv != k {
            a.swap_rows(piv, k);
            phase = -phase;
        }
        let pivot = a[(k, k)];
        phase *= pivot / pivot.modulus();
        log_abs += best.ln();
        for i in (k + 1)..n {
            let factor = a[(i, k)] / pivot;
            if factor == c(R::zero(), R::zero()) {
                continue;
            }
            for j in (k + 1)..n {
                let u = a[(k, j)];
                a[(i, j)] -= factor * u;
            }
        }
    }
    LogDet {
        phase,
        log_abs,
        singular: false,
    }
}

/// Determinant of a square complex matrix of dimension at most [`DENSE_MAX_DIM`].
pub fn dense_determinant<R: Real>(matrix: &DMatrix<C<R>>) -> Result<C<R>> {
    if matrix.nrows() != matrix.ncols() {
        return Err(Error::domain(format!(
            "determinant of non-square {}x{} matrix",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    if matrix.nrows() > DENSE_MAX_DIM {
        return Err(Error::domain(format!(
            "dense determinant limited to dim {DENSE_MAX_DIM}, got {}",
            matrix.nrows()
        )));
    }
    if matrix.nrows() == 0 {
        return Ok(c(R::one(), R::zero()));
    }
    Ok(lu_log_det(matrix.clone()).value())
}

/// `M[i][j] = a_{i-j+row_shift}` for `i, j ∈ [0, dim)`.
pub fn toeplitz_matrix<R: Real>(
    seq: &ToeplitzSequence<R>,
    dim: usize,
    row_shift: i64,
) -> Result<DMatrix<C<R>>> {
    if dim < 1 {
        return Err(Error::domain("toeplitz dimension must be >= 1"));
    }
    let d = dim as i64;
    let lo = -(d - 1) + row_shift;
    let hi = (d - 1) + row_shift;
    if seq.get(lo).is_none() || seq.get(hi).is_none() {
        return Err(Error::domain(format!(
            "sequence covers [{}, {}], need [{lo}, {hi}]",
            seq.min_index(),
            seq.max_index()
        )));
    }
    Ok(DMatrix::from_fn(dim, dim, |i, j| {
        seq.get(i as i64 - j as i64 + row_shift)
            .expect("index range checked")
    }))
}

/// Log-form determinant of the Toeplitz matrix `[a_{i-j+row_shift}]`.
pub fn toeplitz_log_det<R: Real>(
    seq: &ToeplitzSequence<R>,
    dim: usize,
    row_shift: i64,
) -> Result<LogDet<R>> {
    Ok(lu_log_det(toeplitz_matrix(seq, dim, row_shift)?))
}

/// Real part of the Toeplitz determinant, after checking the imaginary part is
/// negligible relative to `max(1, |det|)`.
pub fn toeplitz_determinant<R: Real>(
    seq: &ToeplitzSequence<R>,
    dim: usize,
    row_shift: i64,
) -> Result<R> {
    let det = toeplitz_log_det(seq, dim, row_shift)?.value();
    let scale = det.modulus().max(R::one());
    if det.im.abs() >= R::lit(1e-8) * scale {
        return Err(Error::NonRealDeterminant {
            real: det.re.as_f64(),
            imag: det.im.as_f64(),
        });
    }
    Ok(det.re)
}
