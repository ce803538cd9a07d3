//! Geometry recovery from a spectrum and the ball-rigidity verdict.
//!
//! The two leading heat-trace coefficients are linear in the volume and the
//! boundary area with known two-branch density factors, so the fitted
//! coefficients invert directly to geometric estimates. The isoperimetric
//! ratio of those estimates then decides whether the domain can be a ball:
//! among smooth bounded domains, only balls attain the minimal ratio.

use crate::error::Error;
use crate::geometry::LameParameters;
use crate::heat::{boundary_density_factor, volume_density_factor};
use crate::special::gamma;
use crate::spectra::Spectrum;
use crate::trace::{fit_spectrum, CoefficientFit};
use crate::Result;

/// Volume and boundary-area estimates recovered from a spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryEstimate {
    pub vol_hat: f64,
    pub boundary_vol_hat: f64,
    pub n: usize,
    /// Fitted boundary-term sign: -1 Dirichlet-like, +1 traction-like.
    pub bc_sign: i8,
    /// Relative residual norm of the underlying fit.
    pub confidence: f64,
}

/// Outcome of the ball-rigidity test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rigidity {
    Ball,
    NotBall,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidityVerdict {
    /// Isoperimetric ratio `|boundary| / |volume|^{(n-1)/n}` of the estimate.
    pub ratio: f64,
    /// Same ratio for balls (any radius).
    pub ball_ratio: f64,
    pub verdict: Rigidity,
    /// Relative excess of the ratio over the ball ratio.
    pub margin: f64,
    /// Set when the ratio falls impossibly far below the isoperimetric
    /// minimum, which flags an estimator inconsistency.
    pub consistency_warning: bool,
}

/// Inverts the fitted coefficients to geometry:
/// `vol = a0 / volume_density_factor`, `boundary = 4 a1 / boundary_density_factor`.
pub fn geometry_from_fit(
    fit: &CoefficientFit,
    n: usize,
    params: &LameParameters,
) -> GeometryEstimate {
    GeometryEstimate {
        vol_hat: fit.a0_hat / volume_density_factor(n, params),
        boundary_vol_hat: 4.0 * fit.a1_hat / boundary_density_factor(n, params),
        n,
        bc_sign: fit.sign,
        confidence: fit.residual_norm,
    }
}

/// Full estimation pipeline: sample the heat trace, fit the coefficients,
/// and invert them to volume and boundary area.
pub fn estimate_geometry(spectrum: &Spectrum, params: &LameParameters) -> Result<GeometryEstimate> {
    let fit = fit_spectrum(spectrum, None, 16)?;
    Ok(geometry_from_fit(&fit, spectrum.domain().dim(), params))
}

/// Isoperimetric ratio of the unit ball in dimension `n`:
/// `|S^{n-1}| / |B^n|^{(n-1)/n} = n |B^n|^{1/n}`.
pub fn ball_isoperimetric_ratio(n: usize) -> f64 {
    let nf = n as f64;
    let unit_ball_volume = std::f64::consts::PI.powf(nf / 2.0) / gamma(nf / 2.0 + 1.0);
    nf * unit_ball_volume.powf(1.0 / nf)
}

/// Ball-rigidity verdict at the given relative tolerance.
///
/// `Ball` when the ratio is within `(1 + tolerance)` of the ball ratio,
/// `NotBall` beyond `(1 + 2 tolerance)`, `Inconclusive` in between. A ratio
/// below `(1 - 2 tolerance)` of the ball ratio is impossible for consistent
/// estimates and is additionally flagged.
pub fn ball_rigidity_verdict(estimate: &GeometryEstimate, tolerance: f64) -> Result<RigidityVerdict> {
    if tolerance.is_nan() || tolerance <= 0.0 || tolerance >= 0.5 {
        return Err(Error::InvalidParameter(format!(
            "tolerance must lie in (0, 0.5), got {tolerance}"
        )));
    }
    if estimate.vol_hat.is_nan()
        || estimate.vol_hat <= 0.0
        || estimate.boundary_vol_hat.is_nan()
        || estimate.boundary_vol_hat < 0.0
    {
        return Err(Error::InvalidParameter(format!(
            "geometry estimate out of range: vol {}, boundary {}",
            estimate.vol_hat, estimate.boundary_vol_hat
        )));
    }
    let nf = estimate.n as f64;
    let ratio = estimate.boundary_vol_hat / estimate.vol_hat.powf((nf - 1.0) / nf);
    let ball_ratio = ball_isoperimetric_ratio(estimate.n);
    let (verdict, consistency_warning) = if ratio < ball_ratio * (1.0 - 2.0 * tolerance) {
        (Rigidity::Inconclusive, true)
    } else if ratio <= ball_ratio * (1.0 + tolerance) {
        (Rigidity::Ball, false)
    } else if ratio > ball_ratio * (1.0 + 2.0 * tolerance) {
        (Rigidity::NotBall, false)
    } else {
        (Rigidity::Inconclusive, false)
    };
    Ok(RigidityVerdict {
        ratio,
        ball_ratio,
        verdict,
        margin: ratio / ball_ratio - 1.0,
        consistency_warning,
    })
}
