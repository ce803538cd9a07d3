//! Spectral geometry of the Navier-Lame operator of linear elasticity.
//!
//! The crate is organized around one pipeline:
//!
//! 1. [`geometry`] carries pointwise metric data (2-jets) and derives
//!    Christoffel symbols and the mixed Ricci tensor.
//! 2. [`symbol`] evaluates the full matrix symbol of the elasticity operator,
//!    the closed-form inverse of its principal part, and the recursive
//!    resolvent-parametrix terms.
//! 3. [`heat`] turns the symbol trace into closed-form heat-trace densities
//!    and predicts the leading two expansion coefficients of a domain.
//! 4. [`spectra`] computes elastic eigenvalues on concrete flat domains
//!    (interval, rectangle, disk) and reads/writes spectrum files.
//! 5. [`trace`] sums heat traces from spectra and fits the expansion
//!    coefficients by weighted least squares.
//! 6. [`inverse`] recovers volume and boundary area from the fitted
//!    coefficients and renders the ball-rigidity verdict.
//!
//! All public operations are pure functions of their inputs and safe for
//! concurrent use.

pub mod error;
pub mod geometry;
pub mod heat;
pub mod inverse;
pub mod special;
pub mod spectra;
pub mod symbol;
pub mod trace;
pub mod verify;

pub use error::Error;
pub use geometry::{LameParameters, MetricField, MetricJet};
pub use heat::CoefficientPrediction;
pub use spectra::{BoundaryCondition, Domain, SolveMethod, Spectrum};
pub use trace::{CoefficientFit, HeatTraceSample};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
