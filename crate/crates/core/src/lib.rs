//! Two-site correlation entropy for exactly solvable spin systems.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod denmat;
pub mod dimer;
pub mod edoracle;
pub mod error;
pub mod ising2d;
pub mod numerics;
pub mod scalar;
pub mod tfim;

pub use error::{Error, Result};

pub use scalar::Real;

pub type DensityMatrix = denmat::DensityMatrix<f64>;
pub type EntropyBits = denmat::EntropyBits<f64>;
pub type MutualInformation = denmat::MutualInformation<f64>;
pub type Divergence = denmat::Divergence<f64>;
pub type ToeplitzSequence = numerics::ToeplitzSequence<f64>;
pub type LogDet = numerics::LogDet<f64>;
pub type FourierEstimate = numerics::FourierEstimate<f64>;

pub type DensityMatrixF32 = denmat::DensityMatrix<f32>;
pub type ToeplitzSequenceF32 = numerics::ToeplitzSequence<f32>;
