//! Exact diagonalization of the transverse-field Ising ring for `N ≤ 12`.
//!
//! Basis states are bitmasks with bit `j` set when spin `j` points down in the
//! `σᶻ` basis. `H` conserves `P = ∏σᶻ = (-1)^{popcount}`, so the two parity
//! blocks are diagonalized separately.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::denmat::{make_density_matrix, mutual_information_parts, DensityMatrix, MutualInformation};
use crate::error::{Error, Result};
use crate::scalar::cr;
use crate::tfim::CorrelationSet;

pub const MAX_SITES: usize = 12;
/// Energy splitting below which two levels count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;

fn check_sites(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::domain(format!(
            "exact diagonalization needs N >= 3 on a ring, got {n}"
        )));
    }
    if n > MAX_SITES {
        return Err(Error::domain(format!(
            "exact diagonalization limited to N <= {MAX_SITES}, got {n}"
        )));
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::domain(format!("lambda must be >= 0, got {lambda}")));
    }
    Ok(())
}

fn diagonal_energy(state: usize, n: usize) -> f64 {
    -(n as f64 - 2.0 * state.count_ones() as f64)
}

fn bond_mask(j: usize, n: usize) -> usize {
    (1 << j) | (1 << ((j + 1) % n))
}

/// `H = -Σ_j [λ σˣ_j σˣ_{j+1} + σᶻ_j]` with the bond `(N-1, 0)` included,
/// as a dense real matrix on all `2^N` states.
pub fn build_hamiltonian(n: usize, lambda: f64) -> Result<DMatrix<f64>> {
    check_sites(n)?;
    check_lambda(lambda)?;
    let dim = 1usize << n;
    let mut h = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        h[(s, s)] = diagonal_energy(s, n);
        for j in 0..n {
            h[(s ^ bond_mask(j, n), s)] -= lambda;
        }
    }
    Ok(h)
}

/// `P = ∏σᶻ` as a diagonal matrix.
pub fn parity_operator(n: usize) -> Result<DMatrix<f64>> {
    check_sites(n)?;
    let dim = 1usize << n;
    Ok(DMatrix::from_fn(dim, dim, |i, j| {
        if i != j {
            0.0
        } else if i.count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }))
}

/// Eigen-decomposition of one parity block.
#[derive(Debug, Clone)]
struct Block {
    parity: i32,
    states: Vec<usize>,
    energies: Vec<f64>,
    vectors: DMatrix<f64>,
}

impl Block {
    fn build(n: usize, lambda: f64, parity: i32) -> Self {
        let want = if parity == 1 { 0 } else { 1 };
        let states: Vec<usize> = (0..1usize << n)
            .filter(|s| s.count_ones() % 2 == want)
            .collect();
        let mut local = vec![usize::MAX; 1 << n];
        for (k, &s) in states.iter().enumerate() {
            local[s] = k;
        }
        let d = states.len();
        let mut h = DMatrix::zeros(d, d);
        for (k, &s) in states.iter().enumerate() {
            h[(k, k)] = diagonal_energy(s, n);
            for j in 0..n {
                h[(local[s ^ bond_mask(j, n)], k)] -= lambda;
            }
        }
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let energies = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = DMatrix::from_fn(d, d, |i, j| eig.eigenvectors[(i, order[j])]);
        Self {
            parity,
            states,
            energies,
            vectors,
        }
    }
}

/// Fully diagonalized ring, reusable across temperatures and separations.
#[derive(Debug, Clone)]
pub struct EdChain {
    n: usize,
    lambda: f64,
    blocks: [Block; 2],
}

/// Parameters echoed in an [`OracleReport`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleParams {
    pub n: usize,
    pub lambda: f64,
    pub t: f64,
    pub r: usize,
}

#[derive(Debug, Clone)]
pub struct OracleReport {
    pub params: OracleParams,
    pub correlations: CorrelationSet,
    pub mi: MutualInformation<f64>,
    pub ground_energy: f64,
    pub ground_parity: i32,
    pub rho_i: DensityMatrix<f64>,
    pub rho_ij: DensityMatrix<f64>,
}

impl EdChain {
    pub fn new(n: usize, lambda: f64) -> Result<Self> {
        check_sites(n)?;
        check_lambda(lambda)?;
        let (even, odd) = rayon::join(|| Block::build(n, lambda, 1), || Block::build(n, lambda, -1));
        Ok(Self {
            n,
            lambda,
            blocks: [even, odd],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Lowest level of each block, `(even, odd)`.
    pub fn sector_ground_energies(&self) -> (f64, f64) {
        (self.blocks[0].energies[0], self.blocks[1].energies[0])
    }

    /// All `2^N` eigenvalues in ascending order.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self.blocks.iter().flat_map(|b| b.energies.clone()).collect();
        all.sort_by(f64::total_cmp);
        all
    }

    /// Block index of the ground state: the lower block, or the even one when
    /// the two lowest levels are degenerate.
    fn ground_block(&self) -> Result<usize> {
        let (e, o) = self.sector_ground_energies();
        let k = if (e - o).abs() < DEGENERACY_TOL || e < o { 0 } else { 1 };
        let b = &self.blocks[k];
        if b.energies.len() > 1 && b.energies[1] - b.energies[0] < DEGENERACY_TOL {
            return Err(Error::Degeneracy(format!(
                "ground level of the P = {} block is degenerate (splitting {:e}) at N={}, lambda={}",
                b.parity,
                b.energies[1] - b.energies[0],
                self.n,
                self.lambda
            )));
        }
        Ok(k)
    }

    pub fn ground_energy(&self) -> Result<f64> {
        Ok(self.blocks[self.ground_block()?].energies[0])
    }

    pub fn ground_parity(&self) -> Result<i32> {
        Ok(self.blocks[self.ground_block()?].parity)
    }

    /// `(block, level, weight)` of the state at temperature `t`.
    fn populations(&self, t: f64) -> Result<Vec<(usize, usize, f64)>> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::domain(format!("temperature must be >= 0, got {t}")));
        }
        if t == 0.0 {
            return Ok(vec![(self.ground_block()?, 0, 1.0)]);
        }
        let e0 = self.spectrum()[0];
        let mut pops = Vec::with_capacity(1 << self.n);
        for (bk, b) in self.blocks.iter().enumerate() {
            for (lv, &e) in b.energies.iter().enumerate() {
                let w = (-(e - e0) / t).exp();
                if w > 0.0 {
                    pops.push((bk, lv, w));
                }
            }
        }
        let z: f64 = pops.iter().map(|p| p.2).sum();
        for p in &mut pops {
            p.2 /= z;
        }
        Ok(pops)
    }

    /// `tr(Hρ)` at temperature `t`.
    pub fn thermal_energy(&self, t: f64) -> Result<f64> {
        Ok(self
            .populations(t)?
            .iter()
            .map(|&(b, l, w)| w * self.blocks[b].energies[l])
            .sum())
    }

    /// Reduced state of sites `0` and `r` in the basis index `2·bit_0 + bit_r`.
    pub fn pair_state(&self, t: f64, r: usize) -> Result<DensityMatrix<f64>> {
        if r < 1 || r >= self.n {
            return Err(Error::domain(format!("site r must lie in [1, N-1], got {r}")));
        }
        let pops = self.populations(t)?;
        let dim = 1usize << self.n;
        let mask = 1 | (1usize << r);
        let mut rho = [[0.0f64; 4]; 4];
        let mut amp = vec![0.0f64; dim];
        for &(bk, lv, w) in &pops {
            let b = &self.blocks[bk];
            for (k, &s) in b.states.iter().enumerate() {
                amp[s] = b.vectors[(k, lv)];
            }
            for &s in &b.states {
                let rest = s & !mask;
                let a = 2 * (s & 1) + ((s >> r) & 1);
                for (a2, entry) in rho[a].iter_mut().enumerate() {
                    let s2 = rest | (a2 >> 1) | ((a2 & 1) << r);
                    *entry += w * amp[s] * amp[s2];
                }
            }
            for &s in &b.states {
                amp[s] = 0.0;
            }
        }
        let m = DMatrix::from_fn(4, 4, |i, j| cr(rho[i][j]));
        make_density_matrix(m, &[2, 2])
    }

    pub fn observables(&self, t: f64, r: usize) -> Result<OracleReport> {
        if r < 1 || r > self.n / 2 {
            return Err(Error::domain(format!(
                "separation r must lie in [1, N/2] = [1, {}], got {r}",
                self.n / 2
            )));
        }
        let rho_ij = self.pair_state(t, r)?;
        let mi = mutual_information_parts(&rho_ij)?;
        let rho_i = crate::denmat::partial_trace(&rho_ij, &[0])?;
        Ok(OracleReport {
            params: OracleParams {
                n: self.n,
                lambda: self.lambda,
                t,
                r,
            },
            correlations: pauli_correlations(&rho_ij),
            mi,
            ground_energy: self.ground_energy()?,
            ground_parity: self.ground_parity()?,
            rho_i,
            rho_ij,
        })
    }
}

/// `⟨σᶻ_i⟩` and the `xx`, `yy`, `zz` correlators of a two-qubit state.
pub fn pauli_correlations(rho: &DensityMatrix<f64>) -> CorrelationSet {
    let m = |i: usize, j: usize| rho.matrix()[(i, j)].re;
    CorrelationSet {
        mz: m(0, 0) + m(1, 1) - m(2, 2) - m(3, 3),
        gxx: m(0, 3) + m(3, 0) + m(1, 2) + m(2, 1),
        gyy: -m(0, 3) - m(3, 0) + m(1, 2) + m(2, 1),
        gzz: m(0, 0) - m(1, 1) - m(2, 2) + m(3, 3),
    }
}

pub fn oracle_observables(n: usize, lambda: f64, t: f64, r: usize) -> Result<OracleReport> {
    EdChain::new(n, lambda)?.observables(t, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tfim::{momenta, dispersion, Sector};

    #[test]
    fn rejects_bad_sizes() {
        assert!(build_hamiltonian(2, 1.0).is_err());
        assert!(build_hamiltonian(13, 1.0).is_err());
        assert!(EdChain::new(4, -1.0).is_err());
    }

    #[test]
    fn hamiltonian_commutes_with_parity() {
        for &(n, lambda) in &[(3, 0.5), (4, 1.0), (6, 2.0)] {
            let h = build_hamiltonian(n, lambda).unwrap();
            let p = parity_operator(n).unwrap();
            assert!((&h * &p - &p * &h).norm() < 1e-12);
            assert!((&h - h.transpose()).norm() < 1e-15);
        }
    }

    #[test]
    fn blocks_reproduce_full_spectrum() {
        let h = build_hamiltonian(6, 0.7).unwrap();
        let mut full: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
        full.sort_by(f64::total_cmp);
        let blocks = EdChain::new(6, 0.7).unwrap().spectrum();
        for (a, b) in full.iter().zip(&blocks) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn classical_ground_state() {
        for n in [3, 4, 7] {
            let chain = EdChain::new(n, 0.0).unwrap();
            assert!((chain.ground_energy().unwrap() + n as f64).abs() < 1e-12);
        }
        let rep = oracle_observables(6, 0.0, 0.0, 2).unwrap();
        let c = rep.correlations;
        assert!((c.mz - 1.0).abs() < 1e-12 && (c.gzz - 1.0).abs() < 1e-12);
        assert!(c.gxx.abs() < 1e-12);
        assert!(rep.mi.mi.value().abs() < 1e-12);
    }

    #[test]
    fn free_fermion_ground_energy() {
        let chain = EdChain::new(4, 1.0).unwrap();
        let expected: f64 = -momenta(4, Sector::Even)
            .unwrap()
            .iter()
            .map(|&phi| dispersion(1.0, phi))
            .sum::<f64>();
        assert!((chain.ground_energy().unwrap() - expected).abs() < 1e-10);
    }

    #[test]
    fn ground_parity_is_even() {
        for n in [4, 6, 8] {
            for lambda in [0.25, 0.5, 1.0, 1.5, 2.0] {
                assert_eq!(EdChain::new(n, lambda).unwrap().ground_parity().unwrap(), 1);
            }
        }
    }

    #[test]
    fn gibbs_energy_increases_with_temperature() {
        let chain = EdChain::new(6, 1.0).unwrap();
        let mut last = chain.thermal_energy(0.0).unwrap();
        for k in 1..=40 {
            let e = chain.thermal_energy(0.1 * k as f64).unwrap();
            assert!(e > last);
            last = e;
        }
        for t in [0.3, 1.0, 5.0] {
            let rho = chain.pair_state(t, 2).unwrap();
            assert!(rho.spectrum()[0] >= 0.0);
            assert!(mutual_information_parts(&rho).unwrap().mi.value() >= -1e-9);
        }
    }

    #[test]
    fn ordered_plateau_at_ten_sites() {
        let rep = oracle_observables(10, 2.0, 0.0, 5).unwrap();
        let c = rep.correlations;
        assert!((0.8..=1.0).contains(&c.gxx), "gxx = {}", c.gxx);
        let mi = rep.mi.mi.value();
        assert!((0.8..=1.0).contains(&mi), "MI = {mi}");
    }

    #[test]
    fn report_is_deterministic() {
        let a = oracle_observables(8, 1.0, 0.5, 2).unwrap();
        let _ = oracle_observables(8, 1.0, 0.5, 1).unwrap();
        let b = oracle_observables(8, 1.0, 0.5, 2).unwrap();
        assert_eq!(a.correlations, b.correlations);
        assert_eq!(a.mi.mi.value().to_bits(), b.mi.mi.value().to_bits());
    }

    #[test]
    fn single_site_marginals_agree() {
        let chain = EdChain::new(8, 1.3).unwrap();
        for r in 1..=4 {
            let rep = chain.observables(0.0, r).unwrap();
            let other = crate::denmat::partial_trace(&rep.rho_ij, &[1]).unwrap();
            assert!(rep.rho_i.max_abs_diff(&other) < 1e-12);
        }
    }
}
