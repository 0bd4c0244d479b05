//! Classical 2D Ising model on the square lattice, correlations along the
//! (1, 1) diagonal.
//!
//! The diagonal two-point function `⟨σ_{0,0} σ_{N,N}⟩` is the determinant of
//! the `N×N` Toeplitz matrix of Fourier coefficients of the unimodular symbol
//!
//! ```text
//! φ(θ) = [(s² - e^{-iθ}) / (s² - e^{iθ})]^{1/2},   s = sinh(2/T),
//! ```
//!
//! Writing `D = s² - e^{iθ}`, the ratio is `conj(D)/D`, and the branch taken
//! is `φ = conj(D)/|D|` at every temperature. It is continuous in `T` through
//! the critical point, where the symbol becomes the pure phase
//! `e^{i(π-θ)/2}` with a jump at `θ = 0`, whose coefficients are known exactly.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::denmat::{make_density_matrix, mutual_information_parts, DensityMatrix, MutualInformation};
use crate::error::{Error, Result};
use crate::numerics::{
    fourier_window, toeplitz_determinant, SymbolFunction, ToeplitzSequence, DEFAULT_GRID_POINTS,
};
use crate::scalar::{c, cr, C};

/// Relative tolerance on `sinh²(2/T) - 1` within which `T` is treated as critical.
const CRITICAL_WINDOW: f64 = 1e-12;

/// Whether single-site expectation values carry the spontaneous magnetization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Ensemble {
    /// `⟨σ⟩ = 0`; long-range order shows up only through `G → m²`.
    #[default]
    Symmetric,
    /// `⟨σ⟩ = m(T)` below `T_c`.
    Broken,
}

impl Ensemble {
    pub fn tag(self) -> &'static str {
        match self {
            Ensemble::Symmetric => "symmetric",
            Ensemble::Broken => "broken",
        }
    }
}

impl std::str::FromStr for Ensemble {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetric" => Ok(Ensemble::Symmetric),
            "broken" => Ok(Ensemble::Broken),
            other => Err(Error::domain(format!("unknown ensemble '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ising2dParams {
    pub t: f64,
    pub n: usize,
    pub ensemble: Ensemble,
}

impl Ising2dParams {
    pub fn new(t: f64, n: usize, ensemble: Ensemble) -> Result<Self> {
        check_temperature(t)?;
        if n < 1 {
            return Err(Error::domain("diagonal separation N must be >= 1"));
        }
        Ok(Self { t, n, ensemble })
    }
}

fn check_temperature(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("temperature must be > 0, got {t}")));
    }
    Ok(())
}

/// `T_c = 2 / asinh(1) = 2 / ln(1 + √2)`, the root of `sinh(2/T) = 1`.
pub fn critical_temperature() -> f64 {
    2.0 / 1f64.asinh()
}

/// Spontaneous magnetization `[1 - sinh⁻⁴(2/T)]^{1/8}` below `T_c`, zero at and above.
pub fn magnetization(t: f64) -> Result<f64> {
    check_temperature(t)?;
    if t >= critical_temperature() {
        return Ok(0.0);
    }
    let s = (2.0 / t).sinh();
    let x = 1.0 - s.powi(-4);
    Ok(x.max(0.0).powf(0.125))
}

/// The diagonal-correlation symbol at temperature `T`.
#[derive(Debug, Clone, Copy)]
pub struct IsingSymbol {
    s2: f64,
    phase: SymbolPhase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SymbolPhase {
    Ordered,
    Critical,
    Disordered,
}

impl IsingSymbol {
    pub fn new(t: f64) -> Result<Self> {
        check_temperature(t)?;
        let s2 = (2.0 / t).sinh().powi(2);
        let phase = if (s2 - 1.0).abs() <= CRITICAL_WINDOW {
            SymbolPhase::Critical
        } else if s2 > 1.0 {
            SymbolPhase::Ordered
        } else {
            SymbolPhase::Disordered
        };
        Ok(Self { s2, phase })
    }

    pub fn is_critical(&self) -> bool {
        self.phase == SymbolPhase::Critical
    }

    /// Exact coefficient of the critical phase symbol, `1 / (π (1/2 - n))`.
    pub fn critical_coefficient(n: i64) -> f64 {
        1.0 / (PI * (0.5 - n as f64))
    }

    /// Coefficients `a_n` for `n ∈ [-(n_max-1), n_max-1]`.
    pub fn coefficients(&self, n_max: usize) -> Result<ToeplitzSequence<f64>> {
        let k = n_max.max(1) as i64 - 1;
        if self.is_critical() {
            return Ok(ToeplitzSequence::from_fn(-k..=k, |n| {
                cr(Self::critical_coefficient(n))
            }));
        }
        let seq = fourier_window(self, -k..=k, DEFAULT_GRID_POINTS)?;
        let imag = seq.max_imag();
        if imag >= 1e-10 {
            return Err(Error::Numerical(format!(
                "symbol coefficients have imaginary part {imag:e}"
            )));
        }
        Ok(seq)
    }
}

impl SymbolFunction<f64> for IsingSymbol {
    fn eval(&self, theta: f64) -> C<f64> {
        match self.phase {
            SymbolPhase::Critical => {
                // Midpoint of the jump between e^{iπ/2} and e^{-iπ/2}.
                if theta == 0.0 {
                    return cr(0.0);
                }
                let a = 0.5 * (PI - theta);
                c(a.cos(), a.sin())
            }
            SymbolPhase::Ordered | SymbolPhase::Disordered => {
                let d = c(self.s2 - theta.cos(), -theta.sin());
                d.conj() / d.norm()
            }
        }
    }
}

fn check_correlation(g: f64, n: usize) -> Result<f64> {
    if g.abs() > 1.0 + 1e-8 || !g.is_finite() {
        return Err(Error::Numerical(format!(
            "diagonal correlation at N={n} out of range: {g}"
        )));
    }
    Ok(g)
}

/// `⟨σ_{0,0} σ_{N,N}⟩` as an `N×N` Toeplitz determinant.
pub fn diagonal_correlation(t: f64, n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain("diagonal separation N must be >= 1"));
    }
    let seq = IsingSymbol::new(t)?.coefficients(n)?;
    check_correlation(toeplitz_determinant(&seq, n, 0)?, n)
}

/// `⟨σ_{0,0} σ_{N,N}⟩` for every `N ∈ [1, n_max]`, sharing one coefficient window.
pub fn diagonal_correlations(t: f64, n_max: usize) -> Result<Vec<f64>> {
    let seq = IsingSymbol::new(t)?.coefficients(n_max)?;
    (1..=n_max)
        .map(|n| check_correlation(toeplitz_determinant(&seq, n, 0)?, n))
        .collect()
}

/// `diag((1+m)/2, (1-m)/2)` with `m = 0` in the symmetric ensemble.
pub fn single_site_state_2d(t: f64, ensemble: Ensemble) -> Result<DensityMatrix<f64>> {
    let m = site_magnetization(t, ensemble)?;
    DensityMatrix::diagonal(&[0.5 * (1.0 + m), 0.5 * (1.0 - m)], &[2])
}

fn site_magnetization(t: f64, ensemble: Ensemble) -> Result<f64> {
    match ensemble {
        Ensemble::Symmetric => {
            check_temperature(t)?;
            Ok(0.0)
        }
        Ensemble::Broken => magnetization(t),
    }
}

/// Diagonal two-site state `diag(u⁺, w, w, u⁻)` from `⟨σ⟩ = m` and `⟨σσ⟩ = g`.
pub fn classical_pair_state(m: f64, g: f64) -> Result<DensityMatrix<f64>> {
    let u_plus = 0.25 * (1.0 + 2.0 * m + g);
    let u_minus = 0.25 * (1.0 - 2.0 * m + g);
    let w = 0.25 * (1.0 - g);
    for (name, v) in [("u+", u_plus), ("u-", u_minus), ("w", w)] {
        if !(-1e-10..=1.0).contains(&v) {
            return Err(Error::ModelConsistency(format!(
                "{name} = {v:e} out of range for <s> = {m}, <ss> = {g}"
            )));
        }
    }
    let p: Vec<f64> = [u_plus, w, w, u_minus].iter().map(|v| v.max(0.0)).collect();
    let diag = nalgebra::DVector::from_iterator(4, p.iter().map(|&x| cr(x)));
    make_density_matrix(DMatrix::from_diagonal(&diag), &[2, 2])
}

pub fn two_site_state_2d(p: Ising2dParams) -> Result<DensityMatrix<f64>> {
    let g = diagonal_correlation(p.t, p.n)?;
    classical_pair_state(site_magnetization(p.t, p.ensemble)?, g)
}

/// Mutual information between `(0,0)` and `(N,N)`, with the entropies it is built from.
pub fn correlation_entropy_parts_2d(p: Ising2dParams) -> Result<MutualInformation<f64>> {
    mutual_information_parts(&two_site_state_2d(p)?)
}

pub fn correlation_entropy_2d(p: Ising2dParams) -> Result<f64> {
    Ok(correlation_entropy_parts_2d(p)?.mi.value())
}

/// Mutual information for every separation in `[1, n_max]` at one temperature.
pub fn correlation_entropy_profile_2d(
    t: f64,
    n_max: usize,
    ensemble: Ensemble,
) -> Result<Vec<MutualInformation<f64>>> {
    let m = site_magnetization(t, ensemble)?;
    diagonal_correlations(t, n_max)?
        .into_iter()
        .map(|g| mutual_information_parts(&classical_pair_state(m, g)?))
        .collect()
}

/// Small-correlation expansion `(½G² - G m²) / ln 2`, in bits, with `m` the
/// spontaneous magnetization. Diagnostic only; it is negative wherever the
/// `G m²` term wins.
pub fn critical_expansion_mi(t: f64, n: usize) -> Result<f64> {
    let g = diagonal_correlation(t, n)?;
    let m = magnetization(t)?;
    Ok(expansion_from(g, m))
}

pub fn expansion_from(g: f64, m: f64) -> f64 {
    (0.5 * g * g - g * m * m) / std::f64::consts::LN_2
}
