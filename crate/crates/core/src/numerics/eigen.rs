use nalgebra::{ComplexField, DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// `max |M - M†|` over all entries.
pub fn hermiticity_residual<R: Real>(m: &DMatrix<C<R>>) -> R {
    let n = m.nrows();
    let mut worst = R::zero();
    for i in 0..n {
        for j in i..n {
            let d = (m[(i, j)] - m[(j, i)].conj()).modulus();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

fn check_hermitian<R: Real>(m: &DMatrix<C<R>>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::domain(format!(
            "eigenvalues of non-square {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    let res = hermiticity_residual(m);
    if res >= R::validation_tol() {
        return Err(Error::domain(format!(
            "matrix is not Hermitian (residual {:e})",
            res.as_f64()
        )));
    }
    Ok(())
}

/// Spectrum and eigenvectors (as columns), eigenvalues ascending.
pub fn hermitian_eigen<R: Real>(m: &DMatrix<C<R>>) -> Result<(Vec<R>, DMatrix<C<R>>)> {
    check_hermitian(m)?;
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), m.ncols(), |r, k| eig.eigenvectors[(r, order[k])]);
    Ok((values, vectors))
}

/// Real eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues<R: Real>(m: &DMatrix<C<R>>) -> Result<Vec<R>> {
    check_hermitian(m)?;
    let mut values: Vec<R> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c, cr};

    #[test]
    fn identity_and_pauli_x() {
        let id = DMatrix::<C<f64>>::identity(3, 3);
        assert_eq!(hermitian_eigenvalues(&id).unwrap(), vec![1.0, 1.0, 1.0]);
        let sx = DMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)]);
        let ev = hermitian_eigenvalues(&sx).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pauli_y_has_complex_eigenvectors() {
        let sy = DMatrix::from_row_slice(2, 2, &[cr(0.0), c(0.0, -1.0), c(0.0, 1.0), cr(0.0)]);
        let (vals, vecs) = hermitian_eigen(&sy).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14);
        let v = vecs.column(1).clone_owned();
        let mv = &sy * &v;
        assert!((mv - v * cr(vals[1])).norm() < 1e-13);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(0.0), cr(0.0)]);
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::Domain(_))));
    }
}
