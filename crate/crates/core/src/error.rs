use thiserror::Error;

/// Density-matrix invariant that failed validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariant {
    Square,
    Dimensions,
    Hermitian,
    UnitTrace,
    Positivity,
}

impl std::fmt::Display for Invariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Invariant::Square => "square",
            Invariant::Dimensions => "dimensions",
            Invariant::Hermitian => "hermitian",
            Invariant::UnitTrace => "unit trace",
            Invariant::Positivity => "positivity",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge at {grid_points} points: last {last:e}, previous {previous:e}")]
    Convergence {
        grid_points: usize,
        last: f64,
        previous: f64,
    },

    #[error("determinant has imaginary residue {imag:e} (real part {real:e})")]
    NonRealDeterminant { real: f64, imag: f64 },

    #[error("density matrix violates {invariant}: {detail}")]
    Validation { invariant: Invariant, detail: String },

    #[error("model consistency: {0}")]
    ModelConsistency(String),

    #[error("degenerate ground state: {0}")]
    Degeneracy(String),

    #[error("numerical error: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(invariant: Invariant, detail: impl Into<String>) -> Self {
        Error::Validation {
            invariant,
            detail: detail.into(),
        }
    }

    /// True for failures caused by an iterative method running out of budget.
    pub fn is_convergence(&self) -> bool {
        matches!(self, Error::Convergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
