//! Random Taylor series `Σ ξ_n a_n zⁿ`: growth functionals, sampling,
//! zero location and counting, covariance lemmas and Monte Carlo drivers.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod covariance;
pub mod error;
pub mod experiments;
pub mod growth;
pub mod poly;
pub mod rng;
pub mod sampling;
pub mod stats;
pub mod zeros;

pub use error::{Error, Result};
pub use growth::{CoefficientSequence, GrowthProfile};
pub use num_complex::Complex64;
pub use sampling::{EnsembleKind, EnsembleSpec, SampleOptions, SeriesSample};
pub use zeros::{Method, Root, ZeroSet};
