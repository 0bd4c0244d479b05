//! Sweeps over model parameters, finite differences and scaling fits.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::denmat::MutualInformation;
use crate::dimer::{dimer_joint_entropy, dimer_mutual_information, DimerParams};
use crate::error::{Error, Result};
use crate::ising2d::{self, Ensemble};
use crate::tfim::{self, FreeFermionChain, Sector};

/// Identity `MI = S_i + S_j - S_ij` re-checked on every emitted row.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Default finite-difference step in `λ`.
pub const LAMBDA_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Dimer,
    Ising2d,
    Tfim,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Dimer => "dimer",
            Model::Ising2d => "ising2d",
            Model::Tfim => "tfim",
        }
    }
}

/// One grid point of a sweep. `N` is the diagonal separation for `ising2d`
/// and the ring length for `tfim`; `r` is used by `tfim` only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub model: Model,
    #[serde(rename = "T")]
    pub t: f64,
    pub lambda: Option<f64>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub r: Option<usize>,
    #[serde(rename = "S_i")]
    pub s_i: Option<f64>,
    #[serde(rename = "S_j")]
    pub s_j: Option<f64>,
    #[serde(rename = "S_ij")]
    pub s_ij: Option<f64>,
    #[serde(rename = "MI")]
    pub mi: Option<f64>,
    pub tag: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

impl SweepRecord {
    fn blank(model: Model, t: f64, lambda: Option<f64>, n: Option<usize>, r: Option<usize>, tag: &str) -> Self {
        Self {
            model,
            t,
            lambda,
            n,
            r,
            s_i: None,
            s_j: None,
            s_ij: None,
            mi: None,
            tag: tag.to_string(),
            error: None,
        }
    }

    fn fill(mut self, outcome: Result<MutualInformation<f64>>) -> Self {
        let checked = outcome.and_then(|m| {
            let (a, b, ab, mi) = (m.s_a, m.s_b, m.s_ab, m.mi.value());
            let gap = (a + b - ab - mi).abs();
            if gap > IDENTITY_TOL {
                return Err(Error::Numerical(format!(
                    "S_i + S_j - S_ij differs from MI by {gap:e}"
                )));
            }
            Ok((a, b, ab, mi))
        });
        match checked {
            Ok((a, b, ab, mi)) => {
                self.s_i = Some(a);
                self.s_j = Some(b);
                self.s_ij = Some(ab);
                self.mi = Some(mi);
            }
            Err(e) => self.error = Some(e.to_string()),
        }
        self
    }

    pub fn is_error(&self) -> bool {
        self.error.is_some()
    }
}

/// Parameter grid for one model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum SweepSpec {
    Dimer {
        temperatures: Vec<f64>,
    },
    Ising2d {
        temperatures: Vec<f64>,
        separations: Vec<usize>,
        #[serde(default)]
        ensemble: Ensemble,
    },
    Tfim {
        lambdas: Vec<f64>,
        temperatures: Vec<f64>,
        sizes: Vec<usize>,
        separations: Vec<usize>,
        #[serde(default)]
        sector: Sector,
    },
}

/// Evenly spaced grid with `count` points including both ends.
pub fn linspace(min: f64, max: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::domain("grid count must be >= 1"));
    }
    if !(min.is_finite() && max.is_finite()) || max < min {
        return Err(Error::domain(format!("invalid grid [{min}, {max}]")));
    }
    if count == 1 {
        return Ok(vec![min]);
    }
    let step = (max - min) / (count - 1) as f64;
    Ok((0..count)
        .map(|k| if k + 1 == count { max } else { min + step * k as f64 })
        .collect())
}

fn sorted_f64(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn sorted_usize(values: &[usize]) -> Vec<usize> {
    values.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
}

fn dimer_record(t: f64) -> SweepRecord {
    let rec = SweepRecord::blank(Model::Dimer, t, None, None, None, "");
    let outcome = DimerParams::new(t).and_then(|p| {
        let mi = dimer_mutual_information(p)?;
        Ok(MutualInformation {
            s_a: 1.0,
            s_b: 1.0,
            s_ab: dimer_joint_entropy(p),
            mi,
        })
    });
    rec.fill(outcome)
}

fn ising_block(t: f64, separations: &[usize], ensemble: Ensemble) -> Vec<SweepRecord> {
    let n_max = separations.iter().copied().max().unwrap_or(0);
    let profile = if n_max >= 1 {
        ising2d::correlation_entropy_profile_2d(t, n_max, ensemble)
    } else {
        Err(Error::domain("no separations"))
    };
    separations
        .iter()
        .map(|&n| {
            let rec = SweepRecord::blank(Model::Ising2d, t, None, Some(n), None, ensemble.tag());
            let outcome = match (&profile, n) {
                (_, 0) => Err(Error::domain("diagonal separation N must be >= 1")),
                (Ok(p), n) => Ok(p[n - 1]),
                (Err(e), _) => Err(e.clone()),
            };
            rec.fill(outcome)
        })
        .collect()
}

fn tfim_block(lambda: f64, t: f64, size: usize, separations: &[usize], sector: Sector) -> Vec<SweepRecord> {
    let r_max = separations
        .iter()
        .copied()
        .filter(|&r| r >= 1 && r <= size / 2)
        .max();
    let profile = match r_max {
        Some(r_max) => FreeFermionChain::new(lambda, t, size, sector)
            .and_then(|chain| tfim::correlation_entropy_profile(&chain, r_max)),
        None => Ok(Vec::new()),
    };
    separations
        .iter()
        .map(|&r| {
            let rec = SweepRecord::blank(Model::Tfim, t, Some(lambda), Some(size), Some(r), sector.tag());
            let outcome = tfim::TfimParams::with_sector(lambda, t, size, r, sector).and_then(|_| match &profile {
                Ok(p) => Ok(p[r - 1]),
                Err(e) => Err(e.clone()),
            });
            rec.fill(outcome)
        })
        .collect()
}

/// Evaluates every grid point with at most `workers` threads. Records come out
/// in lexicographic order of the grid axes (`T`; `T, N`; `λ, T, N, r`), and
/// failing points become rows carrying an `error` message.
pub fn sweep(spec: &SweepSpec, workers: usize) -> Result<Vec<SweepRecord>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Numerical(format!("thread pool: {e}")))?;
    Ok(pool.install(|| match spec {
        SweepSpec::Dimer { temperatures } => sorted_f64(temperatures)
            .par_iter()
            .map(|&t| dimer_record(t))
            .collect(),
        SweepSpec::Ising2d {
            temperatures,
            separations,
            ensemble,
        } => {
            let seps = sorted_usize(separations);
            sorted_f64(temperatures)
                .par_iter()
                .map(|&t| ising_block(t, &seps, *ensemble))
                .collect::<Vec<_>>()
                .into_iter()
                .flatten()
                .collect()
        }
        SweepSpec::Tfim {
            lambdas,
            temperatures,
            sizes,
            separations,
            sector,
        } => {
            let seps = sorted_usize(separations);
            let mut jobs = Vec::new();
            for &l in &sorted_f64(lambdas) {
                for &t in &sorted_f64(temperatures) {
                    for &n in &sorted_usize(sizes) {
                        jobs.push((l, t, n));
                    }
                }
            }
            jobs.par_iter()
                .map(|&(l, t, n)| tfim_block(l, t, n, &seps, *sector))
                .collect::<Vec<_>>()
                .into_iter()
                .flatten()
                .collect()
        }
    }))
}

/// Central differences on the interior of a uniform grid.
pub fn central_derivative(samples: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    if samples.len() < 3 {
        return Err(Error::domain(format!(
            "central differences need >= 3 points, got {}",
            samples.len()
        )));
    }
    let h = samples[1].0 - samples[0].0;
    if !(h > 0.0) {
        return Err(Error::domain("abscissae must be strictly increasing"));
    }
    for w in samples.windows(2) {
        let step = w[1].0 - w[0].0;
        if !(step > 0.0) {
            return Err(Error::domain("abscissae must be strictly increasing"));
        }
        if (step - h).abs() > 1e-12 {
            return Err(Error::domain(format!(
                "grid is not uniform: spacing {step} vs {h}"
            )));
        }
    }
    Ok(samples
        .windows(3)
        .map(|w| (w[1].0, (w[2].1 - w[0].1) / (w[2].0 - w[0].0)))
        .collect())
}

/// `f′(x)` from the three-point grid `{x-h, x, x+h}`.
pub fn derivative_at<F>(f: F, x: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(h > 0.0) {
        return Err(Error::domain(format!("step must be > 0, got {h}")));
    }
    let lo = f(x - h)?;
    let hi = f(x + h)?;
    Ok((hi - lo) / (2.0 * h))
}

/// Step used for `∂/∂T` near the Ising critical point.
pub fn ising_temperature_step(t: f64) -> f64 {
    let d = (t - ising2d::critical_temperature()).abs();
    (1e-3f64).min(d / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitKind {
    PowerLaw,
    LogLinear,
    LogCubic,
}

/// Least-squares fit result.
///
/// * `PowerLaw`: `y = amplitude · x^{coefficients[0]}`.
/// * `LogLinear`, `LogCubic`: `y = amplitude + Σ_k coefficients[k] · f_k(ln x)`
///   where the basis is `(ln x)^d` alone, or `ln x, (ln x)², (ln x)³` when `full`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub kind: FitKind,
    pub coefficients: Vec<f64>,
    pub amplitude: f64,
    /// RMS of the residuals, in the units the fit was taken in (`ln y` for power laws).
    pub residual_norm: f64,
    pub point_count: usize,
    pub x_range: (f64, f64),
    /// `max y - min y` over the fitted data, same units as `residual_norm`.
    pub data_range: f64,
    #[serde(default)]
    pub full: bool,
}

impl FitResult {
    /// `residual_norm / data_range`.
    pub fn relative_residual(&self) -> f64 {
        if self.data_range == 0.0 {
            if self.residual_norm == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.residual_norm / self.data_range
        }
    }

    pub fn exponent(&self) -> Option<f64> {
        match self.kind {
            FitKind::PowerLaw => self.coefficients.first().copied(),
            _ => None,
        }
    }

    /// The coefficient of the leading `ln` power.
    pub fn slope(&self) -> f64 {
        *self.coefficients.last().unwrap_or(&f64::NAN)
    }

    pub fn predict(&self, x: f64) -> f64 {
        match self.kind {
            FitKind::PowerLaw => self.amplitude * x.powf(self.coefficients[0]),
            FitKind::LogLinear | FitKind::LogCubic => {
                let l = x.ln();
                let basis = log_basis(self.kind, self.full);
                self.amplitude
                    + basis
                        .iter()
                        .zip(&self.coefficients)
                        .map(|(&p, c)| c * l.powi(p))
                        .sum::<f64>()
            }
        }
    }
}

fn log_basis(kind: FitKind, full: bool) -> Vec<i32> {
    match (kind, full) {
        (FitKind::LogLinear, _) => vec![1],
        (FitKind::LogCubic, false) => vec![3],
        (FitKind::LogCubic, true) => vec![1, 2, 3],
        (FitKind::PowerLaw, _) => vec![1],
    }
}

/// Least squares `y ≈ A β`, returning `β` and the RMS residual.
fn least_squares(a: DMatrix<f64>, y: &DVector<f64>) -> Result<(DVector<f64>, f64)> {
    let svd = a.clone().svd(true, true);
    let beta = svd
        .solve(y, 1e-14)
        .map_err(|e| Error::Numerical(format!("least squares: {e}")))?;
    let res = &a * &beta - y;
    Ok((beta, (res.norm_squared() / y.len() as f64).sqrt()))
}

fn check_points(points: &[(f64, f64)], min: usize) -> Result<()> {
    if points.len() < min {
        return Err(Error::domain(format!(
            "fit needs >= {min} points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
        return Err(Error::domain("fit data must be finite"));
    }
    Ok(())
}

fn span(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let lo = values.clone().fold(f64::INFINITY, f64::min);
    let hi = values.fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Straight-line fit of `ln y` against `ln x`.
pub fn power_law_fit(points: &[(f64, f64)]) -> Result<FitResult> {
    check_points(points, 4)?;
    if points.iter().any(|p| p.0 <= 0.0 || p.1 <= 0.0) {
        return Err(Error::domain("power-law fit needs positive x and y"));
    }
    let a = DMatrix::from_fn(points.len(), 2, |i, j| if j == 0 { 1.0 } else { points[i].0.ln() });
    let y = DVector::from_iterator(points.len(), points.iter().map(|p| p.1.ln()));
    let (beta, rms) = least_squares(a, &y)?;
    let (ylo, yhi) = span(y.iter().copied());
    Ok(FitResult {
        kind: FitKind::PowerLaw,
        coefficients: vec![beta[1]],
        amplitude: beta[0].exp(),
        residual_norm: rms,
        point_count: points.len(),
        x_range: span(points.iter().map(|p| p.0)),
        data_range: yhi - ylo,
        full: false,
    })
}

/// `y = a + b (ln x)^d` for `d ∈ {1, 3}`; with `full` and `d = 3`, every power
/// of `ln x` up to three.
pub fn log_poly_fit(points: &[(f64, f64)], degree: u32, full: bool) -> Result<FitResult> {
    let kind = match degree {
        1 => FitKind::LogLinear,
        3 => FitKind::LogCubic,
        d => return Err(Error::domain(format!("log fit degree must be 1 or 3, got {d}"))),
    };
    let basis = log_basis(kind, full);
    check_points(points, (degree as usize + 2).max(basis.len() + 2).max(4))?;
    if points.iter().any(|p| p.0 <= 0.0) {
        return Err(Error::domain("log fit needs positive x"));
    }
    let a = DMatrix::from_fn(points.len(), basis.len() + 1, |i, j| {
        if j == 0 {
            1.0
        } else {
            points[i].0.ln().powi(basis[j - 1])
        }
    });
    let y = DVector::from_iterator(points.len(), points.iter().map(|p| p.1));
    let (beta, rms) = least_squares(a, &y)?;
    let (ylo, yhi) = span(y.iter().copied());
    Ok(FitResult {
        kind,
        coefficients: beta.iter().skip(1).copied().collect(),
        amplitude: beta[0],
        residual_norm: rms,
        point_count: points.len(),
        x_range: span(points.iter().map(|p| p.0)),
        data_range: yhi - ylo,
        full,
    })
}

/// Logarithmically spaced points in `[lo, hi]`.
pub fn logspace(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0) || hi < lo {
        return Err(Error::domain(format!("invalid log grid [{lo}, {hi}]")));
    }
    Ok(linspace(lo.ln(), hi.ln(), count)?.into_iter().map(f64::exp).collect())
}

/// Which side of `T_c` an exponent scan covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Below,
    Above,
}

/// `(|T - T_c|, ∂MI/∂T)` at separation `n` for distances in `distances`.
pub fn ising_derivative_scan(
    n: usize,
    side: Side,
    distances: &[f64],
    ensemble: Ensemble,
) -> Result<Vec<(f64, f64)>> {
    let tc = ising2d::critical_temperature();
    distances
        .par_iter()
        .map(|&d| {
            let t = match side {
                Side::Below => tc - d,
                Side::Above => tc + d,
            };
            let f = |t: f64| ising2d::correlation_entropy_2d(ising2d::Ising2dParams::new(t, n, ensemble)?);
            Ok((d, derivative_at(f, t, ising_temperature_step(t))?))
        })
        .collect()
}

/// `λ` step for a ring of `n` sites: [`LAMBDA_STEP`], shrunk to `0.1/N` so the
/// difference resolves the `1/N` rounding of the critical point.
pub fn lambda_step(n: usize) -> f64 {
    LAMBDA_STEP.min(0.1 / n as f64)
}

/// `∂S(0, r)/∂λ` at zero temperature.
pub fn tfim_lambda_derivative(lambda: f64, n: usize, r: usize, h: f64, sector: Sector) -> Result<f64> {
    derivative_at(|l| tfim::mi_at(l, 0.0, n, r, sector), lambda, h)
}

/// Location and height of the maximum of `∂S(0, N/2)/∂λ` at `T = 0`: a scan
/// with spacing `coarse` over `[lo, hi]`, then one pass five times finer around
/// the best coarse point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativePeak {
    pub n: usize,
    pub lambda: f64,
    pub value: f64,
}

pub fn farthest_pair_peak(n: usize, lo: f64, hi: f64, coarse: f64, sector: Sector) -> Result<DerivativePeak> {
    if !(coarse > 0.0) || hi <= lo {
        return Err(Error::domain("invalid peak-search window"));
    }
    let r = n / 2;
    let count = ((hi - lo) / coarse).round() as usize + 1;
    let eval = |grid: Vec<f64>| -> Result<(f64, f64)> {
        let vals: Vec<(f64, f64)> = grid
            .par_iter()
            .map(|&l| Ok((l, tfim_lambda_derivative(l, n, r, lambda_step(n), sector)?)))
            .collect::<Result<_>>()?;
        Ok(vals
            .into_iter()
            .fold((f64::NAN, f64::NEG_INFINITY), |best, p| if p.1 > best.1 { p } else { best }))
    };
    let (l0, _) = eval(linspace(lo, hi, count)?)?;
    // spacing coarse / 5
    let grid = linspace(l0 - coarse, l0 + coarse, 11)?
        .into_iter()
        .filter(|&l| l > lambda_step(n))
        .collect::<Vec<_>>();
    let (lambda, value) = eval(grid)?;
    Ok(DerivativePeak { n, lambda, value })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_quadratic_is_exact() {
        let d = central_derivative(&[(0.9, 0.81), (1.0, 1.0), (1.1, 1.21)]).unwrap();
        assert_eq!(d.len(), 1);
        assert!((d[0].1 - 2.0).abs() < 1e-12);
        let flat: Vec<(f64, f64)> = (0..10).map(|k| (k as f64 * 0.25, 3.0)).collect();
        assert!(central_derivative(&flat).unwrap().iter().all(|p| p.1 == 0.0));
    }

    #[test]
    fn derivative_rejects_bad_grids() {
        assert!(central_derivative(&[(0.0, 0.0), (1.0, 1.0)]).is_err());
        assert!(central_derivative(&[(0.0, 0.0), (1.0, 1.0), (2.5, 1.0)]).is_err());
        assert!(central_derivative(&[(0.0, 0.0), (0.0, 1.0), (0.0, 1.0)]).is_err());
    }

    #[test]
    fn power_law_recovers_synthetic_data() {
        let pts: Vec<(f64, f64)> = (1..=8).map(|k| (k as f64, 3.0 * (k as f64).powi(2))).collect();
        let fit = power_law_fit(&pts).unwrap();
        assert!((fit.exponent().unwrap() - 2.0).abs() < 1e-12);
        assert!((fit.amplitude - 3.0).abs() < 1e-12);
        assert!(fit.residual_norm < 1e-12);
        let pts: Vec<(f64, f64)> = (10..=100).map(|n| (n as f64, 0.645 * (n as f64).powf(-0.25))).collect();
        let fit = power_law_fit(&pts).unwrap();
        assert!((fit.exponent().unwrap() + 0.25).abs() < 1e-10);
        assert!((fit.amplitude - 0.645).abs() < 1e-10);
        assert!(power_law_fit(&[(1.0, 1.0), (2.0, -1.0), (3.0, 1.0), (4.0, 1.0)]).is_err());
    }

    #[test]
    fn log_fits_recover_synthetic_data() {
        let pts: Vec<(f64, f64)> = (1..=10).map(|k| (k as f64, 2.0 + 5.0 * (k as f64).ln())).collect();
        let fit = log_poly_fit(&pts, 1, false).unwrap();
        assert!((fit.slope() - 5.0).abs() < 1e-12 && (fit.amplitude - 2.0).abs() < 1e-12);
        assert!(fit.residual_norm < 1e-12);
        let pts: Vec<(f64, f64)> = (2..=12).map(|k| (k as f64, 1.0 + 0.3 * (k as f64).ln().powi(3))).collect();
        let fit = log_poly_fit(&pts, 3, false).unwrap();
        assert!((fit.slope() - 0.3).abs() < 1e-10);
        let full = log_poly_fit(&pts, 3, true).unwrap();
        assert_eq!(full.coefficients.len(), 3);
        assert!((full.slope() - 0.3).abs() < 1e-8);
        assert!(log_poly_fit(&pts[..3], 1, false).is_err());
        assert!(log_poly_fit(&pts, 2, false).is_err());
    }

    #[test]
    fn refit_of_prediction_is_stable() {
        let pts: Vec<(f64, f64)> = (1..=20).map(|k| (k as f64, 1.0 / (1.0 + k as f64))).collect();
        for fit in [power_law_fit(&pts).unwrap(), log_poly_fit(&pts, 1, false).unwrap()] {
            let synth: Vec<(f64, f64)> = pts.iter().map(|p| (p.0, fit.predict(p.0))).collect();
            let refit = match fit.kind {
                FitKind::PowerLaw => power_law_fit(&synth).unwrap(),
                _ => log_poly_fit(&synth, 1, false).unwrap(),
            };
            assert!((refit.slope() - fit.slope()).abs() < 1e-8);
            assert!((refit.amplitude - fit.amplitude).abs() < 1e-8);
        }
    }

    #[test]
    fn fit_result_round_trips_through_json() {
        let pts: Vec<(f64, f64)> = (1..=6).map(|k| (k as f64, (k as f64).sqrt())).collect();
        let fit = power_law_fit(&pts).unwrap();
        let back: FitResult = serde_json::from_str(&serde_json::to_string(&fit).unwrap()).unwrap();
        assert_eq!(fit, back);
    }

    #[test]
    fn dimer_sweep_is_ordered_and_monotone() {
        let temps: Vec<f64> = (1..=100).rev().map(|k| 0.1 * k as f64).collect();
        let recs = sweep(&SweepSpec::Dimer { temperatures: temps }, 4).unwrap();
        assert_eq!(recs.len(), 100);
        for w in recs.windows(2) {
            assert!(w[0].t < w[1].t);
            assert!(w[1].mi.unwrap() < w[0].mi.unwrap());
        }
    }

    #[test]
    fn sweeps_record_failures_and_keep_going() {
        let spec = SweepSpec::Tfim {
            lambdas: vec![0.5],
            temperatures: vec![0.0],
            sizes: vec![8],
            separations: vec![1, 2, 9],
            sector: Sector::Even,
        };
        let recs = sweep(&spec, 2).unwrap();
        assert_eq!(recs.len(), 3);
        assert!(!recs[0].is_error() && !recs[1].is_error());
        assert!(recs[2].is_error());
        let recs = sweep(&SweepSpec::Dimer { temperatures: vec![-1.0, 1.0] }, 1).unwrap();
        assert!(recs[0].is_error() && !recs[1].is_error());
    }

    #[test]
    fn serial_and_parallel_sweeps_agree() {
        let spec = SweepSpec::Ising2d {
            temperatures: vec![2.0, 2.5, 3.0],
            separations: (1..=8).collect(),
            ensemble: Ensemble::Symmetric,
        };
        assert_eq!(sweep(&spec, 1).unwrap(), sweep(&spec, 4).unwrap());
    }

    #[test]
    fn lambda_derivative_step_halving() {
        let a = tfim_lambda_derivative(1.0, 32, 1, 1e-3, Sector::Even).unwrap();
        let b = tfim_lambda_derivative(1.0, 32, 1, 5e-4, Sector::Even).unwrap();
        assert!((a - b).abs() < 1e-4);
        assert_eq!(lambda_step(64), 1e-3);
        assert!((lambda_step(1000) - 1e-4).abs() < 1e-18);
    }

    #[test]
    fn grids() {
        assert_eq!(linspace(0.0, 1.0, 3).unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(linspace(2.0, 2.0, 1).unwrap(), vec![2.0]);
        assert!(linspace(0.0, 1.0, 0).is_err());
        let l = logspace(1e-3, 1e-1, 3).unwrap();
        assert!((l[1] - 1e-2).abs() < 1e-15);
    }
}
