//! Quantile-based inequality curves and indices.
//!
//! Implements the quantile analogues of the Lorenz, Bonferroni, Zenga-07 and
//! D inequality curves, the `qZI`/`qDI` indices and their nonparametric
//! plug-in estimators, together with:
//!
//! - exact evaluation for the Dagum and Pareto families ([`distributions`]),
//! - four sample-quantile estimators compatible with R's `quantile`
//!   types 1/5/6/8 ([`quantile`]),
//! - closed-form integration of the plug-in index estimators ([`indices`]),
//! - asymptotic variances of the empirical index estimators ([`asymptotics`]),
//! - a deterministic, parallel Monte Carlo benchmarking harness
//!   ([`simulation`]).

pub mod asymptotics;
pub mod curves;
pub mod distributions;
pub mod error;
pub mod indices;
pub mod quadrature;
pub mod quantile;
pub mod simulation;

pub use crate::distributions::ParametricDistribution;
pub use crate::error::{Error, Result};
pub use crate::quadrature::QuadratureSpec;
pub use crate::quantile::{plotting_positions, QuantileEstimate, QuantileScheme, Sample};
