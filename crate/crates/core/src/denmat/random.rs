//! Seedable random states for property suites.
//!
//! Spectra are drawn uniformly from the probability simplex (flat Dirichlet)
//! and rotated by a Haar-random unitary.

use nalgebra::{ComplexField, DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use super::{make_density_matrix, DensityMatrix};
use crate::scalar::{c, cr, Real, C};

/// Deterministic generator for a given seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Point drawn uniformly from the `(d-1)`-simplex.
pub fn random_simplex<R: Real, G: Rng + ?Sized>(d: usize, rng: &mut G) -> Vec<R> {
    let raw: Vec<f64> = (0..d).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| R::lit(x / total)).collect()
}

/// Haar-distributed unitary from the QR decomposition of a complex Ginibre matrix.
pub fn random_unitary<R: Real, G: Rng + ?Sized>(d: usize, rng: &mut G) -> DMatrix<C<R>> {
    let g = DMatrix::from_fn(d, d, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c(R::lit(re), R::lit(im))
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    // Fix the phase ambiguity of QR so the distribution is exactly Haar.
    for k in 0..d {
        let diag = r[(k, k)];
        let m = diag.modulus();
        if m > R::zero() {
            let phase = diag / cr(m);
            for i in 0..d {
                q[(i, k)] *= phase;
            }
        }
    }
    q
}

/// Random state with the given spectrum.
pub fn state_with_spectrum<R: Real, G: Rng + ?Sized>(
    spectrum: &[R],
    dims: &[usize],
    rng: &mut G,
) -> DensityMatrix<R> {
    let d = spectrum.len();
    let u = random_unitary::<R, _>(d, rng);
    let diag = DMatrix::from_diagonal(&DVector::from_iterator(d, spectrum.iter().map(|&p| cr(p))));
    let m = &u * diag * u.adjoint();
    // Symmetrize away rounding before validation.
    let m = (&m + m.adjoint()) * cr(R::lit(0.5));
    make_density_matrix(m, dims).expect("random state satisfies density-matrix invariants")
}

/// Full-rank random state on subsystems `dims`.
pub fn random_density_matrix<R: Real, G: Rng + ?Sized>(dims: &[usize], rng: &mut G) -> DensityMatrix<R> {
    let d: usize = dims.iter().product();
    let spectrum = random_simplex::<R, _>(d, rng);
    state_with_spectrum(&spectrum, dims, rng)
}

/// Random pure state on subsystems `dims`.
pub fn random_pure_state<R: Real, G: Rng + ?Sized>(dims: &[usize], rng: &mut G) -> DensityMatrix<R> {
    let d: usize = dims.iter().product();
    let amps: Vec<C<R>> = (0..d)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            c(R::lit(re), R::lit(im))
        })
        .collect();
    DensityMatrix::pure(&amps, dims).expect("nonzero gaussian vector")
}
