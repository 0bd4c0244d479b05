//! Heisenberg dimer `H = σ₁·σ₂` in thermal equilibrium.
//!
//! The spectrum is a singlet at `E = -3` and a triplet at `E = +1`, so the
//! Gibbs state is a mixture of the two eigenprojectors.

use nalgebra::DMatrix;

use crate::denmat::{self, make_density_matrix, shannon_bits, DensityMatrix, EntropyBits};
use crate::error::{Error, Result};
use crate::scalar::{cr, C};

pub const SINGLET_ENERGY: f64 = -3.0;
pub const TRIPLET_ENERGY: f64 = 1.0;

/// Temperature in units of the exchange coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimerParams {
    t: f64,
}

impl DimerParams {
    pub fn new(t: f64) -> Result<Self> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::domain(format!("dimer temperature must be >= 0, got {t}")));
        }
        Ok(Self { t })
    }

    pub fn temperature(&self) -> f64 {
        self.t
    }
}

/// Boltzmann weights `(p_singlet, p_triplet)`; the triplet weight is per state.
pub fn boltzmann_weights(p: DimerParams) -> (f64, f64) {
    if p.t == 0.0 {
        return (1.0, 0.0);
    }
    // Relative to the singlet: e^{-(E_t - E_s)/T} = e^{-4/T}.
    let gap = TRIPLET_ENERGY - SINGLET_ENERGY;
    let x = (-gap / p.t).exp();
    let z = 1.0 + 3.0 * x;
    (1.0 / z, x / z)
}

fn singlet_projector() -> DMatrix<C<f64>> {
    // basis |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩
    let mut m = DMatrix::zeros(4, 4);
    m[(1, 1)] = cr(0.5);
    m[(2, 2)] = cr(0.5);
    m[(1, 2)] = cr(-0.5);
    m[(2, 1)] = cr(-0.5);
    m
}

/// Gibbs state `p_s P_singlet + p_t (I - P_singlet)` on two qubits.
pub fn dimer_thermal_state(p: DimerParams) -> Result<DensityMatrix<f64>> {
    let (ps, pt) = boltzmann_weights(p);
    let singlet = singlet_projector();
    let triplet = DMatrix::<C<f64>>::identity(4, 4) - &singlet;
    make_density_matrix(singlet * cr(ps) + triplet * cr(pt), &[2, 2])
}

/// Closed-form `S(12) = -p_s log₂ p_s - 3 p_t log₂ p_t`.
pub fn dimer_joint_entropy(p: DimerParams) -> f64 {
    let (ps, pt) = boltzmann_weights(p);
    shannon_bits([ps, pt, pt, pt])
}

/// `2 - S(12)`. Both marginals are `I/2` by SU(2) symmetry; that is checked
/// on the constructed state before the single-site entropies are taken as 1.
pub fn dimer_mutual_information(p: DimerParams) -> Result<EntropyBits<f64>> {
    let rho = dimer_thermal_state(p)?;
    let half = DensityMatrix::<f64>::maximally_mixed(&[2])?;
    for site in 0..2 {
        let marginal = denmat::partial_trace(&rho, &[site])?;
        let dev = marginal.max_abs_diff(&half);
        if dev > 1e-12 {
            return Err(Error::ModelConsistency(format!(
                "dimer marginal {site} deviates from I/2 by {dev:e}"
            )));
        }
    }
    EntropyBits::new(2.0 - dimer_joint_entropy(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::denmat::{mutual_information, von_neumann_entropy};
    use crate::numerics::hermitian_eigenvalues;

    fn params(t: f64) -> DimerParams {
        DimerParams::new(t).unwrap()
    }

    #[test]
    fn rejects_negative_temperature() {
        assert!(DimerParams::new(-0.1).is_err());
        assert!(DimerParams::new(f64::NAN).is_err());
    }

    #[test]
    fn low_and_high_temperature_limits() {
        let cold = dimer_thermal_state(params(0.01)).unwrap();
        let singlet = make_density_matrix(singlet_projector(), &[2, 2]).unwrap();
        assert!(cold.max_abs_diff(&singlet) < 1e-6);
        let hot = dimer_thermal_state(params(1e6)).unwrap();
        let mixed = DensityMatrix::<f64>::maximally_mixed(&[2, 2]).unwrap();
        assert!(hot.max_abs_diff(&mixed) < 1e-6);
        let zero = dimer_thermal_state(params(0.0)).unwrap();
        assert!(zero.max_abs_diff(&singlet) < 1e-15);
        assert!((dimer_mutual_information(params(0.0)).unwrap().value() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn spectrum_at_unit_temperature() {
        let rho = dimer_thermal_state(params(1.0)).unwrap();
        let e4 = 4f64.exp();
        let mut expected = vec![1.0 / (e4 + 3.0); 3];
        expected.push(e4 / (e4 + 3.0));
        let got = hermitian_eigenvalues(rho.matrix()).unwrap();
        for (g, e) in got.iter().zip(&expected) {
            assert!((g - e).abs() < 1e-14);
        }
    }

    #[test]
    fn matches_exponentiated_hamiltonian() {
        // exp(-H/T)/Z by diagonalizing H = σ·σ numerically, independent of the projector route.
        let sx = [[0.0, 1.0], [1.0, 0.0]];
        let sz = [[1.0, 0.0], [0.0, -1.0]];
        let mut h = DMatrix::<C<f64>>::zeros(4, 4);
        for a in 0..2 {
            for b in 0..2 {
                for cc in 0..2 {
                    for d in 0..2 {
                        let (i, j) = (2 * a + cc, 2 * b + d);
                        h[(i, j)] += cr(sx[a][b] * sx[cc][d] + sz[a][b] * sz[cc][d]);
                    }
                }
            }
        }
        // σ^y⊗σ^y = -(iσ^y)⊗(iσ^y) with real iσ^y
        let isy = [[0.0, 1.0], [-1.0, 0.0]];
        for a in 0..2 {
            for b in 0..2 {
                for cc in 0..2 {
                    for d in 0..2 {
                        h[(2 * a + cc, 2 * b + d)] -= cr(isy[a][b] * isy[cc][d]);
                    }
                }
            }
        }
        let (vals, vecs) = crate::numerics::hermitian_eigen(&h).unwrap();
        let t = 1.0;
        let w: Vec<f64> = vals.iter().map(|e| (-(e - vals[0]) / t).exp()).collect();
        let z: f64 = w.iter().sum();
        let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(4, w.iter().map(|x| cr(x / z))));
        let gibbs = &vecs * diag * vecs.adjoint();
        let rho = dimer_thermal_state(params(t)).unwrap();
        assert!((gibbs - rho.matrix()).norm() < 1e-13);
    }

    #[test]
    fn closed_form_agrees_with_generic_path() {
        for t in [0.05, 0.5, 1.0, 2.0, 5.0, 50.0] {
            let rho = dimer_thermal_state(params(t)).unwrap();
            let generic = von_neumann_entropy(&rho).value();
            assert!((generic - dimer_joint_entropy(params(t))).abs() < 1e-12, "T={t}");
        }
        let via_generic = mutual_information(&dimer_thermal_state(params(1.0)).unwrap()).unwrap();
        let closed = dimer_mutual_information(params(1.0)).unwrap();
        assert!((via_generic.value() - closed.value()).abs() < 1e-12);
    }

    #[test]
    fn marginals_are_maximally_mixed() {
        let half = DensityMatrix::<f64>::maximally_mixed(&[2]).unwrap();
        for k in 1..=100 {
            let rho = dimer_thermal_state(params(0.1 * k as f64)).unwrap();
            for site in 0..2 {
                let m = denmat::partial_trace(&rho, &[site]).unwrap();
                assert!(m.max_abs_diff(&half) < 1e-12);
            }
        }
    }

    #[test]
    fn mutual_information_strictly_decreasing() {
        let values: Vec<f64> = (1..=100)
            .map(|k| dimer_mutual_information(params(0.1 * k as f64)).unwrap().value())
            .collect();
        for w in values.windows(2) {
            assert!(w[1] < w[0]);
        }
    }
}
