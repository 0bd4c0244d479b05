//! Density matrices and the information measures built on them.
//!
//! All entropies are in bits. A [`DensityMatrix`] can only be obtained through
//! validation, so every downstream routine may assume unit trace, Hermiticity
//! and a non-negative spectrum.

pub mod random;

use nalgebra::{ComplexField, DMatrix};

use crate::error::{Error, Invariant, Result};
use crate::numerics::{hermitian_eigen, hermiticity_residual};
use crate::scalar::{c, cr, Real, C};

/// Threshold for snapping a slightly negative mutual information to zero.
pub const MI_SNAP_TOL: f64 = 1e-9;

/// Validated state on a tensor product of subsystems.
#[derive(Debug, Clone)]
pub struct DensityMatrix<R: Real> {
    matrix: DMatrix<C<R>>,
    dims: Vec<usize>,
    spectrum: Vec<R>,
}

/// Non-negative entropy in bits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EntropyBits<R: Real>(R);

impl<R: Real> EntropyBits<R> {
    /// Snaps values in `[-MI_SNAP_TOL, 0)` to zero; anything more negative is an error.
    pub fn new(value: R) -> Result<Self> {
        if value >= R::zero() {
            Ok(Self(value))
        } else if value >= -R::lit(MI_SNAP_TOL) {
            Ok(Self(R::zero()))
        } else {
            Err(Error::Numerical(format!(
                "negative entropy {:e}",
                value.as_f64()
            )))
        }
    }

    pub fn value(self) -> R {
        self.0
    }
}

/// Outcome of a relative-entropy evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Divergence<R: Real> {
    /// Raw value in bits; not clamped, so rounding may leave it slightly negative.
    Finite(R),
    /// The first argument has weight outside the support of the second.
    Infinite,
}

impl<R: Real> Divergence<R> {
    pub fn finite(self) -> Option<R> {
        match self {
            Divergence::Finite(v) => Some(v),
            Divergence::Infinite => None,
        }
    }
}

/// `-Σ p log₂ p` with `0 log 0 = 0`.
pub fn shannon_bits<R: Real>(probabilities: impl IntoIterator<Item = R>) -> R {
    probabilities
        .into_iter()
        .filter(|&p| p > R::zero())
        .fold(R::zero(), |acc, p| acc - p * p.log2())
}

/// Validates `matrix` as a state on subsystems of dimensions `dims`.
///
/// Eigenvalues in `[-clip_tol, 0)` are clipped to zero and the spectrum is
/// renormalized; the stored matrix is then rebuilt from the clipped spectrum.
pub fn make_density_matrix<R: Real>(
    matrix: DMatrix<C<R>>,
    dims: &[usize],
) -> Result<DensityMatrix<R>> {
    if matrix.nrows() != matrix.ncols() {
        return Err(Error::validation(
            Invariant::Square,
            format!("{}x{} matrix", matrix.nrows(), matrix.ncols()),
        ));
    }
    let d = matrix.nrows();
    if dims.is_empty() || dims.contains(&0) || dims.iter().product::<usize>() != d {
        return Err(Error::validation(
            Invariant::Dimensions,
            format!("dims {dims:?} do not multiply to {d}"),
        ));
    }
    let herm = hermiticity_residual(&matrix);
    if herm >= R::validation_tol() {
        return Err(Error::validation(
            Invariant::Hermitian,
            format!("residual {:e}", herm.as_f64()),
        ));
    }
    let trace = matrix.trace();
    if (trace - cr(R::one())).modulus() >= R::validation_tol() {
        return Err(Error::validation(
            Invariant::UnitTrace,
            format!("trace {:e}{:+e}i", trace.re.as_f64(), trace.im.as_f64()),
        ));
    }
    let (mut spectrum, vectors) = hermitian_eigen(&matrix)?;
    let min = spectrum[0];
    if min < -R::clip_tol() {
        return Err(Error::validation(
            Invariant::Positivity,
            format!("eigenvalue {:e}", min.as_f64()),
        ));
    }
    let mut matrix = matrix;
    if min < R::zero() {
        for p in spectrum.iter_mut() {
            if *p < R::zero() {
                *p = R::zero();
            }
        }
        let total = spectrum.iter().fold(R::zero(), |a, &b| a + b);
        for p in spectrum.iter_mut() {
            *p /= total;
        }
        let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            d,
            spectrum.iter().map(|&p| cr(p)),
        ));
        matrix = &vectors * diag * vectors.adjoint();
    }
    Ok(DensityMatrix {
        matrix,
        dims: dims.to_vec(),
        spectrum,
    })
}

impl<R: Real> DensityMatrix<R> {
    pub fn matrix(&self) -> &DMatrix<C<R>> {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Eigenvalues, ascending, after clipping.
    pub fn spectrum(&self) -> &[R] {
        &self.spectrum
    }

    /// Maximally mixed state `I/d` on the given subsystems.
    pub fn maximally_mixed(dims: &[usize]) -> Result<Self> {
        let d: usize = dims.iter().product();
        let m = DMatrix::identity(d, d) * cr(R::one() / R::lit(d as f64));
        make_density_matrix(m, dims)
    }

    /// Projector onto a (not necessarily normalized) pure state.
    pub fn pure(amplitudes: &[C<R>], dims: &[usize]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(amplitudes);
        let norm2 = v.norm_squared();
        if norm2 == R::zero() {
            return Err(Error::domain("zero state vector"));
        }
        let m = (&v * v.adjoint()) * cr(R::one() / norm2);
        make_density_matrix(m, dims)
    }

    /// Diagonal (classical) state from a probability vector.
    pub fn diagonal(probabilities: &[R], dims: &[usize]) -> Result<Self> {
        let v = nalgebra::DVector::from_iterator(
            probabilities.len(),
            probabilities.iter().map(|&p| cr(p)),
        );
        make_density_matrix(DMatrix::from_diagonal(&v), dims)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix<R>) -> R {
        (&self.matrix - &other.matrix)
            .iter()
            .map(|z| z.modulus())
            .fold(R::zero(), |a, b| if b > a { b } else { a })
    }

    /// Expectation value `tr(ρ O)`.
    pub fn expectation(&self, op: &DMatrix<C<R>>) -> C<R> {
        (&self.matrix * op).trace()
    }
}

/// `-tr ρ log₂ ρ`.
pub fn von_neumann_entropy<R: Real>(rho: &DensityMatrix<R>) -> EntropyBits<R> {
    EntropyBits(shannon_bits(rho.spectrum.iter().copied()).max(R::zero()))
}

/// Reduced state on the subsystems listed in `keep` (any order; duplicates ignored).
pub fn partial_trace<R: Real>(rho: &DensityMatrix<R>, keep: &[usize]) -> Result<DensityMatrix<R>> {
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() {
        return Err(Error::domain("partial trace must keep at least one subsystem"));
    }
    let dims = &rho.dims;
    if let Some(&bad) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::domain(format!(
            "subsystem {bad} out of range for {} subsystems",
            dims.len()
        )));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let dk: usize = kept_dims.iter().product();
    let dt: usize = traced.iter().map(|&k| dims[k]).product();

    // Strides of each subsystem in the full row-major index.
    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let offset = |sub: &[usize], mut idx: usize| -> usize {
        let mut off = 0;
        for &k in sub.iter().rev() {
            off += (idx % dims[k]) * strides[k];
            idx /= dims[k];
        }
        off
    };
    let kept_off: Vec<usize> = (0..dk).map(|i| offset(&keep, i)).collect();
    let traced_off: Vec<usize> = (0..dt).map(|i| offset(&traced, i)).collect();

    let mut out = DMatrix::<C<R>>::zeros(dk, dk);
    for i in 0..dk {
        for j in 0..dk {
            let mut acc = c(R::zero(), R::zero());
            for &t in &traced_off {
                acc += rho.matrix[(kept_off[i] + t, kept_off[j] + t)];
            }
            out[(i, j)] = acc;
        }
    }
    make_density_matrix(out, &kept_dims)
}

/// Kronecker product `ρ_A ⊗ ρ_B`; subsystem lists are concatenated.
pub fn tensor_product<R: Real>(a: &DensityMatrix<R>, b: &DensityMatrix<R>) -> DensityMatrix<R> {
    let matrix = a.matrix.kronecker(&b.matrix);
    let mut dims = a.dims.clone();
    dims.extend_from_slice(&b.dims);
    let mut spectrum: Vec<R> = a
        .spectrum
        .iter()
        .flat_map(|&p| b.spectrum.iter().map(move |&q| p * q))
        .collect();
    spectrum.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    DensityMatrix {
        matrix,
        dims,
        spectrum,
    }
}

/// Entropies of a bipartite state and its two marginals.
#[derive(Debug, Clone, Copy)]
pub struct MutualInformation<R: Real> {
    pub s_a: R,
    pub s_b: R,
    pub s_ab: R,
    pub mi: EntropyBits<R>,
}

/// `S(A) + S(B) - S(AB)`, with every entropy reported.
pub fn mutual_information_parts<R: Real>(rho_ab: &DensityMatrix<R>) -> Result<MutualInformation<R>> {
    if rho_ab.dims.len() != 2 {
        return Err(Error::domain(format!(
            "mutual information needs exactly two subsystems, got {}",
            rho_ab.dims.len()
        )));
    }
    let s_a = von_neumann_entropy(&partial_trace(rho_ab, &[0])?).value();
    let s_b = von_neumann_entropy(&partial_trace(rho_ab, &[1])?).value();
    let s_ab = von_neumann_entropy(rho_ab).value();
    Ok(MutualInformation {
        s_a,
        s_b,
        s_ab,
        mi: EntropyBits::new(s_a + s_b - s_ab)?,
    })
}

pub fn mutual_information<R: Real>(rho_ab: &DensityMatrix<R>) -> Result<EntropyBits<R>> {
    Ok(mutual_information_parts(rho_ab)?.mi)
}

/// `tr ρ log₂ ρ - tr ρ log₂ σ`, evaluated in the eigenbasis of `σ`.
pub fn relative_entropy<R: Real>(
    rho: &DensityMatrix<R>,
    sigma: &DensityMatrix<R>,
) -> Result<Divergence<R>> {
    if rho.dim() != sigma.dim() {
        return Err(Error::domain(format!(
            "relative entropy between dims {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let (sigma_vals, sigma_vecs) = hermitian_eigen(&sigma.matrix)?;
    let support = R::support_tol();
    let mut cross = R::zero();
    for (k, &lam) in sigma_vals.iter().enumerate() {
        let v = sigma_vecs.column(k);
        let weight = (v.adjoint() * &rho.matrix * v)[(0, 0)].re;
        if lam <= support {
            if weight > support {
                return Ok(Divergence::Infinite);
            }
            continue;
        }
        cross += weight * lam.log2();
    }
    let neg_entropy = -shannon_bits(rho.spectrum.iter().copied());
    Ok(Divergence::Finite(neg_entropy - cross))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cr;

    fn singlet() -> DensityMatrix<f64> {
        let s = 1.0 / 2f64.sqrt();
        DensityMatrix::pure(&[cr(0.0), cr(s), cr(-s), cr(0.0)], &[2, 2]).unwrap()
    }

    #[test]
    fn constructor_accepts_and_rejects() {
        assert!(DensityMatrix::<f64>::maximally_mixed(&[2, 2]).is_ok());
        let bad = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![cr(1.1), cr(-0.1)]));
        let err = make_density_matrix(bad, &[2]).unwrap_err();
        assert!(matches!(
            err,
            Error::Validation {
                invariant: Invariant::Positivity,
                ..
            }
        ));
        let unnormalized = DMatrix::<C<f64>>::identity(2, 2);
        assert!(matches!(
            make_density_matrix(unnormalized, &[2]),
            Err(Error::Validation {
                invariant: Invariant::UnitTrace,
                ..
            })
        ));
        let m = DMatrix::from_row_slice(2, 2, &[cr(0.5), cr(0.1), cr(0.0), cr(0.5)]);
        assert!(matches!(
            make_density_matrix(m, &[2]),
            Err(Error::Validation {
                invariant: Invariant::Hermitian,
                ..
            })
        ));
        let id = DMatrix::<C<f64>>::identity(4, 4) * cr(0.25);
        assert!(matches!(
            make_density_matrix(id, &[2, 3]),
            Err(Error::Validation {
                invariant: Invariant::Dimensions,
                ..
            })
        ));
    }

    #[test]
    fn dust_is_clipped_and_renormalized() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            cr(1.0 + 5e-13),
            cr(-5e-13),
        ]));
        let rho = make_density_matrix(m, &[2]).unwrap();
        assert_eq!(rho.spectrum()[0], 0.0);
        assert!((rho.spectrum()[1] - 1.0).abs() < 1e-15);
        assert!(rho.matrix()[(1, 1)].re >= 0.0);
    }

    #[test]
    fn entropy_examples() {
        let pure = DensityMatrix::pure(&[cr(0.6), cr(0.8), cr(0.0)], &[3]).unwrap();
        assert!(von_neumann_entropy(&pure).value().abs() < 1e-12);
        let mixed = DensityMatrix::<f64>::maximally_mixed(&[2, 2]).unwrap();
        assert!((von_neumann_entropy(&mixed).value() - 2.0).abs() < 1e-12);
        let dyadic = DensityMatrix::diagonal(&[0.5, 0.25, 0.25], &[3]).unwrap();
        assert!((von_neumann_entropy(&dyadic).value() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn singlet_marginals_and_mi() {
        let rho = singlet();
        let half = DensityMatrix::<f64>::maximally_mixed(&[2]).unwrap();
        assert!(partial_trace(&rho, &[0]).unwrap().max_abs_diff(&half) < 1e-12);
        assert!((mutual_information(&rho).unwrap().value() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn classical_correlated_state_has_one_bit() {
        let rho = DensityMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5], &[2, 2]).unwrap();
        assert!((mutual_information(&rho).unwrap().value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tensor_and_trace_of_product() {
        let a = DensityMatrix::diagonal(&[0.3, 0.7], &[2]).unwrap();
        let b = DensityMatrix::diagonal(&[0.2, 0.5, 0.3], &[3]).unwrap();
        let ab = tensor_product(&a, &b);
        assert_eq!(ab.dims(), &[2, 3]);
        assert!(partial_trace(&ab, &[0]).unwrap().max_abs_diff(&a) < 1e-12);
        assert!(partial_trace(&ab, &[1]).unwrap().max_abs_diff(&b) < 1e-12);
        assert!(mutual_information(&ab).unwrap().value() < 1e-9);
        let half = DensityMatrix::<f64>::maximally_mixed(&[2]).unwrap();
        let quarter = DensityMatrix::<f64>::maximally_mixed(&[2, 2]).unwrap();
        assert!(tensor_product(&half, &half).max_abs_diff(&quarter) < 1e-15);
    }

    #[test]
    fn partial_trace_three_parties() {
        // |0>|+>|1> keeps the middle |+>
        let s = 1.0 / 2f64.sqrt();
        let mut amps = vec![cr(0.0); 8];
        amps[0b001] = cr(s);
        amps[0b011] = cr(s);
        let rho = DensityMatrix::pure(&amps, &[2, 2, 2]).unwrap();
        let mid = partial_trace(&rho, &[1]).unwrap();
        for z in mid.matrix().iter() {
            assert!((z.re - 0.5).abs() < 1e-12);
        }
        let outer = partial_trace(&rho, &[2, 0]).unwrap();
        assert_eq!(outer.dims(), &[2, 2]);
        assert!((outer.matrix()[(1, 1)].re - 1.0).abs() < 1e-12);
        assert!(matches!(partial_trace(&rho, &[]), Err(Error::Domain(_))));
        assert!(matches!(partial_trace(&rho, &[3]), Err(Error::Domain(_))));
    }

    #[test]
    fn mi_needs_two_subsystems() {
        let rho = DensityMatrix::<f64>::maximally_mixed(&[4]).unwrap();
        assert!(matches!(mutual_information(&rho), Err(Error::Domain(_))));
    }

    #[test]
    fn relative_entropy_cases() {
        let rho = DensityMatrix::diagonal(&[0.3, 0.7], &[2]).unwrap();
        let d = relative_entropy(&rho, &rho).unwrap().finite().unwrap();
        assert!(d.abs() < 1e-10);
        let half = DensityMatrix::<f64>::maximally_mixed(&[2]).unwrap();
        let up = DensityMatrix::pure(&[cr(1.0), cr(0.0)], &[2]).unwrap();
        assert_eq!(relative_entropy(&half, &up).unwrap(), Divergence::Infinite);
        // D(up || I/2) = 1 bit
        let d = relative_entropy(&up, &half).unwrap().finite().unwrap();
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_bits_snapping() {
        assert_eq!(EntropyBits::new(-5e-10).unwrap().value(), 0.0);
        assert!(EntropyBits::new(-1e-6).is_err());
    }
}
