//! Floating-point checks of the analytic statements: gauge, logarithmic
//! cut-offs, dilation scaling of shell norms and the averaging pairing.

pub mod cutoff;
pub mod experiments;
pub mod gauge;
pub mod montecarlo;
pub mod report;

use thiserror::Error;

use crate::calculus::CalculusError;
use crate::forms::FormError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("shell {r1} < r < {r2} is empty or unbounded")]
    DegenerateShell { r1: f64, r2: f64 },
    #[error("{samples} samples requested, at least {minimum} required")]
    TooFewSamples { samples: u64, minimum: u64 },
    #[error("derivative order {m} must be below the homogeneous dimension {q}")]
    OrderTooHigh { m: u32, q: u32 },
    #[error("form has components of several weights")]
    MixedWeight,
    #[error("degrees add up to {got}, expected {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("{0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Form(#[from] FormError),
}

pub use cutoff::{Cutoff, LogGaugeDerivatives};
pub use experiments::{
    cutoff_gradient_scale, cutoff_norm_experiment, pairing_experiment, scaling_exponent_experiment,
    top_degree_experiment, Decay, Profile, ProfiledForm, SamplingConfig,
};
pub use gauge::Gauge;
pub use montecarlo::{ball_integral, shell_integral, Estimate};
pub use report::{linear_fit, ExperimentConfig, ExperimentReport, Fit};
