//! Fourier coefficients of periodic symbols by the uniform trapezoid rule.
//!
//! For a smooth `2π`-periodic integrand the trapezoid rule converges
//! geometrically, so grid doubling is both the error estimate and the
//! refinement strategy.

use std::ops::RangeInclusive;

use nalgebra::ComplexField;

use crate::error::{Error, Result};
use crate::scalar::{c, Real, C};

use super::ToeplitzSequence;

/// Grid size the converged routines start from.
pub const DEFAULT_GRID_POINTS: usize = 4096;
/// Grid size at which refinement gives up.
pub const MAX_GRID_POINTS: usize = 1 << 20;
/// Absolute difference between successive doublings that counts as converged.
pub const CONVERGENCE_TOL: f64 = 1e-10;

/// A function on the unit circle, `θ ∈ [0, 2π) ↦ φ(θ)`.
pub trait SymbolFunction<R: Real>: Sync {
    fn eval(&self, theta: R) -> C<R>;
}

impl<R: Real, F> SymbolFunction<R> for F
where
    F: Fn(R) -> C<R> + Sync,
{
    fn eval(&self, theta: R) -> C<R> {
        self(theta)
    }
}

/// Converged coefficient together with the coarser estimate it was checked against.
#[derive(Debug, Clone, Copy)]
pub struct FourierEstimate<R: Real> {
    pub value: C<R>,
    pub coarse: C<R>,
    /// Resolution of `value`; `coarse` used half as many points.
    pub grid_points: usize,
}

fn check_grid(grid_points: usize) -> Result<()> {
    if grid_points < 16 || !grid_points.is_power_of_two() {
        return Err(Error::domain(format!(
            "grid_points must be a power of two >= 16, got {grid_points}"
        )));
    }
    Ok(())
}

/// Trapezoid estimates of `(1/2π)∫ e^{inθ} φ(θ) dθ` for every `n` in `ns`,
/// sharing one set of symbol evaluations.
pub fn trapezoid_coefficients<R: Real, S: SymbolFunction<R> + ?Sized>(
    symbol: &S,
    ns: RangeInclusive<i64>,
    grid_points: usize,
) -> Result<Vec<C<R>>> {
    check_grid(grid_points)?;
    let m = grid_points;
    let step = R::two_pi() / R::lit(m as f64);
    let samples: Vec<C<R>> = (0..m)
        .map(|k| symbol.eval(step * R::lit(k as f64)))
        .collect();
    // Exact table of m-th roots of unity; e^{inθ_k} = roots[(n·k) mod m].
    let roots: Vec<C<R>> = (0..m)
        .map(|k| {
            let angle = step * R::lit(k as f64);
            c(angle.cos(), angle.sin())
        })
        .collect();
    let scale = R::one() / R::lit(m as f64);
    let mask = m - 1;
    Ok(ns
        .map(|n| {
            let stride = (n.rem_euclid(m as i64)) as usize;
            let mut acc = c(R::zero(), R::zero());
            let mut idx = 0usize;
            for s in &samples {
                acc += *s * roots[idx];
                idx = (idx + stride) & mask;
            }
            acc * scale
        })
        .collect())
}

/// Single trapezoid estimate on `grid_points` nodes.
pub fn trapezoid_coefficient<R: Real, S: SymbolFunction<R> + ?Sized>(
    symbol: &S,
    n: i64,
    grid_points: usize,
) -> Result<C<R>> {
    Ok(trapezoid_coefficients(symbol, n..=n, grid_points)?[0])
}

/// Fourier coefficient refined by grid doubling until successive estimates
/// agree to [`CONVERGENCE_TOL`].
pub fn fourier_coefficient<R: Real, S: SymbolFunction<R> + ?Sized>(
    symbol: &S,
    n: i64,
    grid_points: usize,
) -> Result<FourierEstimate<R>> {
    let (coarse, fine, m) = refine(symbol, n..=n, grid_points)?;
    Ok(FourierEstimate {
        value: fine[0],
        coarse: coarse[0],
        grid_points: m,
    })
}

/// All coefficients with index in `range`, converged jointly.
pub fn fourier_window<R: Real, S: SymbolFunction<R> + ?Sized>(
    symbol: &S,
    range: RangeInclusive<i64>,
    grid_points: usize,
) -> Result<ToeplitzSequence<R>> {
    let start = *range.start();
    let (_, fine, _) = refine(symbol, range, grid_points)?;
    Ok(ToeplitzSequence::new(start, fine))
}

/// Coefficients at the final grid, those at the previous grid, and the final grid size.
type Refined<R> = (Vec<C<R>>, Vec<C<R>>, usize);

fn refine<R: Real, S: SymbolFunction<R> + ?Sized>(
    symbol: &S,
    range: RangeInclusive<i64>,
    grid_points: usize,
) -> Result<Refined<R>> {
    check_grid(grid_points)?;
    if range.is_empty() {
        return Err(Error::domain("empty coefficient range"));
    }
    if grid_points >= MAX_GRID_POINTS {
        return Err(Error::domain(format!(
            "starting grid {grid_points} leaves no room below the {MAX_GRID_POINTS}-point cap"
        )));
    }
    let tol = R::lit(CONVERGENCE_TOL);
    let mut m = grid_points;
    let mut coarse = trapezoid_coefficients(symbol, range.clone(), m)?;
    loop {
        let fine = trapezoid_coefficients(symbol, range.clone(), 2 * m)?;
        let diff = coarse
            .iter()
            .zip(&fine)
            .map(|(a, b)| (*a - *b).modulus())
            .fold(R::zero(), |acc, d| if d > acc { d } else { acc });
        if diff < tol {
            return Ok((coarse, fine, 2 * m));
        }
        if 2 * m >= MAX_GRID_POINTS {
            let (last, previous) = worst_pair(&fine, &coarse);
            return Err(Error::Convergence {
                grid_points: 2 * m,
                last,
                previous,
            });
        }
        coarse = fine;
        m *= 2;
    }
}

/// The real parts of the pair of estimates that disagree most.
fn worst_pair<R: Real>(fine: &[C<R>], coarse: &[C<R>]) -> (f64, f64) {
    let mut best = (0usize, R::zero());
    for (i, (a, b)) in fine.iter().zip(coarse).enumerate() {
        let d = (*a - *b).modulus();
        if d >= best.1 {
            best = (i, d);
        }
    }
    (fine[best.0].re.as_f64(), coarse[best.0].re.as_f64())
}
