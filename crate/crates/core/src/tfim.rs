//! Transverse-field Ising ring `H = -Σ_j [λ σˣ_j σˣ_{j+1} + σᶻ_j]` solved by
//! Jordan–Wigner fermions at finite `N` and `T`.
//!
//! Everything is evaluated within one parity sector: the even sector
//! (`P = ∏σᶻ = +1`) uses half-odd-integer momenta `φ = 2πq/N`, the odd sector
//! integer ones. Two-point functions follow from the coefficients
//!
//! ```text
//! a_n = (1/N) Σ_φ [cos(φn)(λ cos φ - 1) - λ sin(φn) sin φ] tanh(ω_φ/T) / ω_φ
//! ```
//!
//! as Toeplitz determinants (`σˣσˣ` with row shift −1, `σʸσʸ` with +1) and
//! `⟨σᶻ_0 σᶻ_r⟩ = ⟨σᶻ⟩² - a_r a_{-r}`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::denmat::{make_density_matrix, mutual_information_parts, DensityMatrix, MutualInformation};
use crate::error::{Error, Result};
use crate::numerics::{toeplitz_determinant, ToeplitzSequence};
use crate::scalar::cr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    /// `P = +1`, half-odd-integer `q`.
    #[default]
    Even,
    /// `P = -1`, integer `q`.
    Odd,
}

impl Sector {
    pub fn tag(self) -> &'static str {
        match self {
            Sector::Even => "even",
            Sector::Odd => "odd",
        }
    }

    pub fn parity(self) -> i32 {
        match self {
            Sector::Even => 1,
            Sector::Odd => -1,
        }
    }
}

impl std::str::FromStr for Sector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Sector::Even),
            "odd" => Ok(Sector::Odd),
            other => Err(Error::domain(format!("unknown sector '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TfimParams {
    pub lambda: f64,
    pub t: f64,
    pub n: usize,
    pub r: usize,
    pub sector: Sector,
}

impl TfimParams {
    pub fn new(lambda: f64, t: f64, n: usize, r: usize) -> Result<Self> {
        Self::with_sector(lambda, t, n, r, Sector::Even)
    }

    pub fn with_sector(lambda: f64, t: f64, n: usize, r: usize, sector: Sector) -> Result<Self> {
        check_chain(lambda, t, n)?;
        if r < 1 || r > n / 2 {
            return Err(Error::domain(format!(
                "separation r must lie in [1, N/2] = [1, {}], got {r}",
                n / 2
            )));
        }
        Ok(Self {
            lambda,
            t,
            n,
            r,
            sector,
        })
    }
}

fn check_chain(lambda: f64, t: f64, n: usize) -> Result<()> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::domain(format!("lambda must be >= 0, got {lambda}")));
    }
    if !(t >= 0.0) || t.is_nan() {
        return Err(Error::domain(format!("temperature must be >= 0, got {t}")));
    }
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::domain(format!("ring length must be even and >= 4, got {n}")));
    }
    Ok(())
}

/// Twice the allowed momentum quantum numbers, `2q`, in ascending order.
fn doubled_quanta(n: usize, sector: Sector) -> Result<Vec<i64>> {
    if !n.is_multiple_of(2) || n == 0 {
        return Err(Error::domain(format!("momenta need an even ring length, got {n}")));
    }
    let n = n as i64;
    Ok(match sector {
        Sector::Even => (0..n).map(|k| -n + 1 + 2 * k).collect(),
        Sector::Odd => (0..n).map(|k| -n + 2 + 2 * k).collect(),
    })
}

/// Momenta `φ_q = 2πq/N` of the sector.
pub fn momenta(n: usize, sector: Sector) -> Result<Vec<f64>> {
    Ok(doubled_quanta(n, sector)?
        .into_iter()
        .map(|q2| PI * q2 as f64 / n as f64)
        .collect())
}

/// `ω_φ = √(1 + λ² - 2λ cos φ)`.
pub fn dispersion(lambda: f64, phi: f64) -> f64 {
    (1.0 + lambda * lambda - 2.0 * lambda * phi.cos()).max(0.0).sqrt()
}

/// `tanh(ω/T)/ω`, with `T = 0` as the exact limit `1/ω`.
fn thermal_weight(omega: f64, t: f64) -> f64 {
    if t == 0.0 {
        1.0 / omega
    } else {
        (omega / t).tanh() / omega
    }
}

/// Per-mode data for one `(λ, T, N, sector)` point.
#[derive(Debug, Clone)]
pub struct FreeFermionChain {
    lambda: f64,
    t: f64,
    n: usize,
    sector: Sector,
    /// `(2q, cos φ, sin φ, tanh(ω/T)/ω)`; gapless modes are dropped since
    /// their summands vanish in the limit.
    modes: Vec<(i64, f64, f64, f64)>,
}

impl FreeFermionChain {
    pub fn new(lambda: f64, t: f64, n: usize, sector: Sector) -> Result<Self> {
        check_chain(lambda, t, n)?;
        let modes = doubled_quanta(n, sector)?
            .into_iter()
            .filter_map(|q2| {
                let phi = PI * q2 as f64 / n as f64;
                let omega = dispersion(lambda, phi);
                if omega < 1e-300 {
                    return None;
                }
                Some((q2, phi.cos(), phi.sin(), thermal_weight(omega, t)))
            })
            .collect();
        Ok(Self {
            lambda,
            t,
            n,
            sector,
            modes,
        })
    }

    pub fn from_params(p: &TfimParams) -> Result<Self> {
        Self::new(p.lambda, p.t, p.n, p.sector)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn temperature(&self) -> f64 {
        self.t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    /// `⟨σᶻ⟩ = (1/N) Σ_φ (1 - λ cos φ) tanh(ω/T)/ω`.
    pub fn magnetization_z(&self) -> f64 {
        let sum: f64 = self
            .modes
            .iter()
            .map(|&(_, cos, _, w)| (1.0 - self.lambda * cos) * w)
            .sum();
        sum / self.n as f64
    }

    /// `a_n`; the phase `φ n` is reduced exactly modulo `2π` before the trig calls.
    pub fn a_coefficient(&self, n: i64) -> f64 {
        let big_n = self.n as i64;
        let period = 2 * big_n;
        let mut sum = 0.0;
        for &(q2, cos, sin, w) in &self.modes {
            // φ n = π (2q n) / N
            let k = (q2 * n).rem_euclid(period);
            let angle = PI * k as f64 / big_n as f64;
            sum += (angle.cos() * (self.lambda * cos - 1.0) - self.lambda * angle.sin() * sin) * w;
        }
        sum / big_n as f64
    }

    /// `a_n` for `n ∈ [-(r+1), r+1]`, enough for every determinant at separation ≤ `r`.
    pub fn a_window(&self, r: usize) -> ToeplitzSequence<f64> {
        let k = r as i64 + 1;
        ToeplitzSequence::from_real(-k, (-k..=k).map(|n| self.a_coefficient(n)))
    }

    /// Two-point functions at separation `r`, from a window covering it.
    pub fn correlations_from_window(
        &self,
        window: &ToeplitzSequence<f64>,
        mz: f64,
        r: usize,
    ) -> Result<CorrelationSet> {
        if r < 1 {
            return Err(Error::domain("separation must be >= 1"));
        }
        let gxx = toeplitz_determinant(window, r, -1)?;
        let gyy = toeplitz_determinant(window, r, 1)?;
        let ri = r as i64;
        let ar = window
            .get(ri)
            .ok_or_else(|| Error::domain(format!("window lacks a_{ri}")))?
            .re;
        let amr = window
            .get(-ri)
            .ok_or_else(|| Error::domain(format!("window lacks a_{}", -ri)))?
            .re;
        CorrelationSet {
            mz,
            gxx,
            gyy,
            gzz: mz * mz - ar * amr,
        }
        .checked()
    }

    pub fn correlations(&self, r: usize) -> Result<CorrelationSet> {
        self.correlations_from_window(&self.a_window(r), self.magnetization_z(), r)
    }

    /// Correlations for every separation `1..=r_max`, reusing one `a_n` window.
    pub fn correlation_profile(&self, r_max: usize) -> Result<Vec<CorrelationSet>> {
        let window = self.a_window(r_max);
        let mz = self.magnetization_z();
        (1..=r_max)
            .map(|r| self.correlations_from_window(&window, mz, r))
            .collect()
    }
}

/// `⟨σᶻ⟩` and the three diagonal two-point functions at one separation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSet {
    pub mz: f64,
    pub gxx: f64,
    pub gyy: f64,
    pub gzz: f64,
}

impl CorrelationSet {
    fn checked(self) -> Result<Self> {
        for (name, v) in self.entries() {
            if !v.is_finite() || v.abs() > 1.0 + 1e-8 {
                return Err(Error::Numerical(format!("{name} = {v} outside [-1, 1]")));
            }
        }
        Ok(self)
    }

    pub fn entries(&self) -> [(&'static str, f64); 4] {
        [
            ("mz", self.mz),
            ("gxx", self.gxx),
            ("gyy", self.gyy),
            ("gzz", self.gzz),
        ]
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &CorrelationSet) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries().iter())
            .map(|(a, b)| (a.1 - b.1).abs())
            .fold(0.0, f64::max)
    }
}

pub fn magnetization_z(lambda: f64, t: f64, n: usize, sector: Sector) -> Result<f64> {
    Ok(FreeFermionChain::new(lambda, t, n, sector)?.magnetization_z())
}

pub fn a_coefficient(lambda: f64, t: f64, n: usize, index: i64, sector: Sector) -> Result<f64> {
    if index.unsigned_abs() as usize > n {
        return Err(Error::domain(format!("|n| must be <= N, got {index}")));
    }
    Ok(FreeFermionChain::new(lambda, t, n, sector)?.a_coefficient(index))
}

pub fn correlations(p: &TfimParams) -> Result<CorrelationSet> {
    FreeFermionChain::from_params(p)?.correlations(p.r)
}

/// `diag((1+mz)/2, (1-mz)/2)`.
pub fn single_site_state(mz: f64) -> Result<DensityMatrix<f64>> {
    DensityMatrix::diagonal(&[0.5 * (1.0 + mz), 0.5 * (1.0 - mz)], &[2])
}

/// Block-diagonal two-site state in the basis `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩`:
/// `[[u⁺, z⁻], [z⁻, u⁻]]` on the aligned pair and `[[w, z⁺], [z⁺, w]]` on the
/// anti-aligned pair.
pub fn pair_state(c: &CorrelationSet) -> Result<DensityMatrix<f64>> {
    let u_plus = 0.25 * (1.0 + 2.0 * c.mz + c.gzz);
    let u_minus = 0.25 * (1.0 - 2.0 * c.mz + c.gzz);
    let w = 0.25 * (1.0 - c.gzz);
    let z_plus = 0.25 * (c.gxx + c.gyy);
    let z_minus = 0.25 * (c.gxx - c.gyy);
    let mut m = DMatrix::zeros(4, 4);
    m[(0, 0)] = cr(u_plus);
    m[(3, 3)] = cr(u_minus);
    m[(0, 3)] = cr(z_minus);
    m[(3, 0)] = cr(z_minus);
    m[(1, 1)] = cr(w);
    m[(2, 2)] = cr(w);
    m[(1, 2)] = cr(z_plus);
    m[(2, 1)] = cr(z_plus);
    make_density_matrix(m, &[2, 2]).map_err(|e| {
        Error::ModelConsistency(format!(
            "two-site state from mz={}, gxx={}, gyy={}, gzz={}: {e}",
            c.mz, c.gxx, c.gyy, c.gzz
        ))
    })
}

pub fn two_site_state_tfim(p: &TfimParams) -> Result<DensityMatrix<f64>> {
    pair_state(&correlations(p)?)
}

pub fn single_site_state_tfim(p: &TfimParams) -> Result<DensityMatrix<f64>> {
    single_site_state(FreeFermionChain::from_params(p)?.magnetization_z())
}

pub fn correlation_entropy_parts_tfim(p: &TfimParams) -> Result<MutualInformation<f64>> {
    mutual_information_parts(&two_site_state_tfim(p)?)
}

pub fn correlation_entropy_tfim(p: &TfimParams) -> Result<f64> {
    Ok(correlation_entropy_parts_tfim(p)?.mi.value())
}

/// Mutual information at every separation `1..=r_max` for one chain.
pub fn correlation_entropy_profile(
    chain: &FreeFermionChain,
    r_max: usize,
) -> Result<Vec<MutualInformation<f64>>> {
    chain
        .correlation_profile(r_max)?
        .iter()
        .map(|c| mutual_information_parts(&pair_state(c)?))
        .collect()
}

/// Mutual information at one separation; convenience for derivative scans.
pub fn mi_at(lambda: f64, t: f64, n: usize, r: usize, sector: Sector) -> Result<f64> {
    correlation_entropy_tfim(&TfimParams::with_sector(lambda, t, n, r, sector)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::denmat::partial_trace;

    #[test]
    fn momentum_grids() {
        let even = momenta(4, Sector::Even).unwrap();
        let expected = [-3.0 * PI / 4.0, -PI / 4.0, PI / 4.0, 3.0 * PI / 4.0];
        for (a, b) in even.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        let odd = momenta(4, Sector::Odd).unwrap();
        let expected = [-PI / 2.0, 0.0, PI / 2.0, PI];
        for (a, b) in odd.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        for n in [4, 10, 64] {
            assert_eq!(momenta(n, Sector::Even).unwrap().len(), n);
            assert_eq!(momenta(n, Sector::Odd).unwrap().len(), n);
        }
        assert!(momenta(5, Sector::Even).is_err());
    }

    #[test]
    fn dispersion_values() {
        for phi in [0.0, 0.3, 2.0] {
            assert!((dispersion(0.0, phi) - 1.0).abs() < 1e-15);
        }
        assert!((dispersion(2.0, PI) - 3.0).abs() < 1e-15);
        for phi in [1e-3, 0.1, 1.0] {
            assert!((dispersion(1.0, phi) - 2.0 * (phi / 2.0).sin().abs()).abs() < 1e-12);
        }
        assert!(dispersion(1.0, 1e-9) < 1e-8);
    }

    #[test]
    fn magnetization_limits() {
        assert!((magnetization_z(0.0, 0.0, 10, Sector::Even).unwrap() - 1.0).abs() < 1e-15);
        assert!(magnetization_z(0.7, 1e8, 10, Sector::Even).unwrap().abs() < 1e-7);
        let m = magnetization_z(1.0, 0.0, 1000, Sector::Even).unwrap();
        assert!((m - 2.0 / PI).abs() < 2e-3);
        // odd sector contains the gapless φ = 0 mode at λ = 1
        let m_odd = magnetization_z(1.0, 0.0, 1000, Sector::Odd).unwrap();
        assert!(m_odd.is_finite() && (m_odd - 2.0 / PI).abs() < 2e-3);
    }

    #[test]
    fn a_coefficient_limits() {
        for n in -2..=2 {
            let a = a_coefficient(0.0, 0.0, 10, n, Sector::Even).unwrap();
            let expected = if n == 0 { -1.0 } else { 0.0 };
            assert!((a - expected).abs() < 1e-14);
        }
        for n in -3..=3 {
            let a = a_coefficient(1e4, 0.0, 20, n, Sector::Even).unwrap();
            let expected = if n == -1 { 1.0 } else { 0.0 };
            assert!((a - expected).abs() < 1e-3, "n={n}: {a}");
        }
        for n in -1..=1 {
            let e = a_coefficient(0.5, 0.0, 1000, n, Sector::Even).unwrap();
            let o = a_coefficient(0.5, 0.0, 1000, n, Sector::Odd).unwrap();
            assert!((e - o).abs() < 1e-2);
        }
        assert!(a_coefficient(0.5, 0.0, 10, 11, Sector::Even).is_err());
    }

    #[test]
    fn a0_is_minus_magnetization() {
        let chain = FreeFermionChain::new(0.8, 0.3, 16, Sector::Even).unwrap();
        assert!((chain.a_coefficient(0) + chain.magnetization_z()).abs() < 1e-14);
    }

    #[test]
    fn paramagnetic_and_ordered_limits() {
        let c = correlations(&TfimParams::new(0.0, 0.0, 10, 3).unwrap()).unwrap();
        assert!(c.gxx.abs() < 1e-15);
        assert!((c.gzz - 1.0).abs() < 1e-14 && (c.mz - 1.0).abs() < 1e-14);
        let c = correlations(&TfimParams::new(1e4, 0.0, 20, 3).unwrap()).unwrap();
        assert!((c.gxx - 1.0).abs() < 1e-3);
        assert!(c.gyy.abs() < 1e-3);
        let p = TfimParams::new(0.0, 0.0, 10, 2).unwrap();
        let rho = two_site_state_tfim(&p).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 1.0).abs() < 1e-14);
        assert!(correlation_entropy_tfim(&p).unwrap() < 1e-12);
    }

    #[test]
    fn params_validation() {
        assert!(TfimParams::new(1.0, 0.0, 7, 2).is_err());
        assert!(TfimParams::new(1.0, 0.0, 10, 6).is_err());
        assert!(TfimParams::new(1.0, 0.0, 10, 0).is_err());
        assert!(TfimParams::new(-1.0, 0.0, 10, 1).is_err());
        assert!(TfimParams::new(1.0, -0.5, 10, 1).is_err());
        assert!(TfimParams::new(1.0, 0.0, 2, 1).is_err());
    }

    #[test]
    fn pair_states_are_consistent() {
        for &lambda in &[0.3, 1.0, 2.0] {
            for &t in &[0.0, 0.4, 2.0] {
                let chain = FreeFermionChain::new(lambda, t, 40, Sector::Even).unwrap();
                let site = single_site_state(chain.magnetization_z()).unwrap();
                for c in chain.correlation_profile(20).unwrap() {
                    let rho = pair_state(&c).unwrap();
                    assert!(rho.spectrum()[0] >= 0.0);
                    for k in 0..2 {
                        let m = partial_trace(&rho, &[k]).unwrap();
                        assert!(m.max_abs_diff(&site) < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn unphysical_correlations_are_rejected() {
        let c = CorrelationSet {
            mz: 0.0,
            gxx: 1.0,
            gyy: 1.0,
            gzz: 1.0,
        };
        assert!(matches!(pair_state(&c), Err(Error::ModelConsistency(_))));
    }
}
