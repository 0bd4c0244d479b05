//! Floating-point scalar abstraction shared by the numerical kernels.

use nalgebra::{Complex, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar the linear-algebra and density-matrix layers are generic over.
///
/// The tolerances are the absolute thresholds used when validating inputs.
/// They are tuned for `f64`; the `f32` values are loosened to what single
/// precision can actually resolve.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive + Send + Sync {
    /// Hermiticity, unit-trace and eigenvalue-sum checks.
    fn validation_tol() -> Self;
    /// Largest negative eigenvalue silently clipped to zero.
    fn clip_tol() -> Self;
    /// Threshold below which an eigenvalue counts as outside the support.
    fn support_tol() -> Self;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn validation_tol() -> Self {
        1e-10
    }
    fn clip_tol() -> Self {
        1e-12
    }
    fn support_tol() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn validation_tol() -> Self {
        1e-5
    }
    fn clip_tol() -> Self {
        1e-6
    }
    fn support_tol() -> Self {
        1e-6
    }
}

/// Complex number over a [`Real`] scalar.
pub type C<R> = Complex<R>;

#[inline]
pub fn c<R: Real>(re: R, im: R) -> C<R> {
    Complex::new(re, im)
}

#[inline]
pub fn cr<R: Real>(re: R) -> C<R> {
    Complex::new(re, R::zero())
}
