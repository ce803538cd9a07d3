//! Heat-trace samples from spectra and coefficient extraction.
//!
//! A spectrum is turned into samples of `S(t) = sum_k m_k e^{-t tau_k}`
//! together with a Weyl-law bound on the omitted tail. Weighted least
//! squares against the three-term model
//! `[t^{-n/2}, t^{-(n-1)/2}, t^{-(n-2)/2}]` extracts the leading two
//! coefficients; the third basis term is a nuisance that absorbs the
//! remainder without asserting its exponent.

use crate::error::Error;
use crate::heat::{weyl_coefficient, CoefficientPrediction};
use crate::special::gamma_upper;
use crate::spectra::Spectrum;
use crate::Result;
use nalgebra::{DMatrix, DVector};

/// One heat-trace evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatTraceSample {
    pub t: f64,
    /// `sum multiplicity * exp(-t tau)`.
    pub value: f64,
    /// Weyl-tail estimate for the eigenvalues beyond the computed window.
    pub truncation_bound: f64,
}

/// Result of the weighted least-squares coefficient fit.
#[derive(Debug, Clone)]
pub struct CoefficientFit {
    pub a0_hat: f64,
    /// Unsigned magnitude of the fitted boundary coefficient.
    pub a1_hat: f64,
    /// Sign of the fitted boundary term: -1 Dirichlet-like, +1 traction-like.
    pub sign: i8,
    pub t_window: (f64, f64),
    /// Euclidean norm of the weighted (relative) residuals.
    pub residual_norm: f64,
    /// Reference prediction attached by callers that know the domain.
    pub prediction: Option<CoefficientPrediction>,
}

impl CoefficientFit {
    pub fn with_prediction(mut self, prediction: CoefficientPrediction) -> Self {
        self.prediction = Some(prediction);
        self
    }

    /// Relative errors `(|a0_hat - a0|/a0, |a1_hat - a1|/a1)` against the
    /// attached prediction.
    pub fn relative_errors(&self) -> Option<(f64, f64)> {
        self.prediction
            .as_ref()
            .map(|p| ((self.a0_hat - p.a0).abs() / p.a0, (self.a1_hat - p.a1).abs() / p.a1))
    }
}

/// Deterministic pairwise summation; the result does not depend on any
/// chunking of the input.
fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// Weyl-law tail bound for the eigenvalues above `tau_max`:
/// `C_W (n/2) t^{-n/2} Gamma(n/2, t tau_max)`.
fn weyl_tail(spectrum: &Spectrum, t: f64, tau_max: f64) -> f64 {
    let n = spectrum.domain().dim();
    let c_w = weyl_coefficient(n, spectrum.params(), spectrum.domain().volume());
    let s = n as f64 / 2.0;
    c_w * s * t.powf(-s) * gamma_upper(s, t * tau_max)
}

/// Heat-trace sample at time `t`.
///
/// The sample is rejected with [`Error::TruncationDominated`] when the Weyl
/// tail of the omitted eigenvalues exceeds `1e-3` of the value. An empty
/// spectrum is treated as an exactly zero trace.
pub fn heat_trace(spectrum: &Spectrum, t: f64) -> Result<HeatTraceSample> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::InvalidParameter(format!("time must be positive, got {t}")));
    }
    let Some(tau_max) = spectrum.last() else {
        return Ok(HeatTraceSample { t, value: 0.0, truncation_bound: 0.0 });
    };
    let terms: Vec<f64> = spectrum
        .entries()
        .iter()
        .map(|e| e.multiplicity as f64 * (-t * e.value).exp())
        .collect();
    let value = pairwise_sum(&terms);
    let truncation_bound = weyl_tail(spectrum, t, tau_max);
    if truncation_bound > 1e-3 * value {
        return Err(Error::TruncationDominated { t, bound: truncation_bound, value });
    }
    Ok(HeatTraceSample { t, value, truncation_bound })
}

/// Log-spaced heat-trace samples over `[t_min, t_max]`.
pub fn sample_heat_trace(
    spectrum: &Spectrum,
    t_min: f64,
    t_max: f64,
    count: usize,
) -> Result<Vec<HeatTraceSample>> {
    if !(t_min > 0.0 && t_max > t_min && count >= 2) {
        return Err(Error::InvalidParameter(format!(
            "bad sampling window [{t_min}, {t_max}] with {count} samples"
        )));
    }
    let ratio = (t_max / t_min).ln();
    (0..count)
        .map(|i| {
            let t = t_min * (ratio * i as f64 / (count - 1) as f64).exp();
            heat_trace(spectrum, t)
        })
        .collect()
}

/// Default fit window.
///
/// The small-time end `t_min` is the smallest time at which the sum is
/// trustworthy: the truncation bound stays below `1e-3` of the trace, and for
/// grid spectra (which are complete but discretization-limited) additionally
/// `t_min >= 17 h^2 / mu`, where eigenvalue errors of relative size about
/// `tau h^2/(12 mu)` contaminate the trace like `h^2/(6 mu t)` (about one
/// percent at that floor).
///
/// The top is `t_max = 0.5 / tau_scale`, where the asymptotic model starts
/// to degrade; when the two constraints leave less than a factor 8 of spread
/// the top is stretched up to `min(2/tau_scale, 10 t_min)`.
pub fn select_t_window(spectrum: &Spectrum) -> Result<(f64, f64)> {
    let tau_max = spectrum.last().ok_or_else(|| {
        Error::InvalidParameter("cannot select a window for an empty spectrum".into())
    })?;
    let tau_scale = spectrum
        .entries()
        .iter()
        .map(|e| e.value)
        .find(|v| *v > 1e-12 * tau_max)
        .ok_or_else(|| Error::InvalidParameter("spectrum has no positive eigenvalues".into()))?;
    let t_hi = 0.5 / tau_scale;
    let mut t_min = t_hi;
    let steps = 600;
    for i in 1..=steps {
        let t = t_hi * (1e-6f64).powf(i as f64 / steps as f64);
        if heat_trace(spectrum, t).is_ok() {
            t_min = t;
        } else {
            break;
        }
    }
    if let crate::spectra::SolveMethod::FiniteDifference { grid_n } = spectrum.method() {
        let h = 1.0 / grid_n as f64;
        t_min = t_min.max(17.0 * h * h / spectrum.params().mu());
    }
    let mut t_max = t_hi;
    if t_max < 8.0 * t_min {
        t_max = (10.0 * t_min).min(2.0 / tau_scale);
    }
    if t_max <= 2.0 * t_min {
        return Err(Error::TruncationDominated {
            t: t_max,
            bound: weyl_tail(spectrum, t_max, tau_max),
            value: heat_trace(spectrum, t_max).map(|s| s.value).unwrap_or(0.0),
        });
    }
    Ok((t_min, t_max))
}

/// Weighted least squares of the samples against the three-term small-time
/// model. Weights are `1/value^2` (relative error); the system is solved
/// through the singular value decomposition, never normal equations.
pub fn fit_coefficients(samples: &[HeatTraceSample], n: usize) -> Result<CoefficientFit> {
    if samples.len() < 8 {
        return Err(Error::InvalidParameter(format!(
            "need at least 8 samples, got {}",
            samples.len()
        )));
    }
    let nf = n as f64;
    let powers = [-nf / 2.0, -(nf - 1.0) / 2.0, -(nf - 2.0) / 2.0];
    let rows = samples.len();
    let mut a = DMatrix::zeros(rows, 3);
    let mut b = DVector::zeros(rows);
    for (i, s) in samples.iter().enumerate() {
        if s.value.is_nan() || s.value <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "nonpositive trace value {} at t = {}",
                s.value, s.t
            )));
        }
        let w = 1.0 / s.value;
        for (j, p) in powers.iter().enumerate() {
            a[(i, j)] = w * s.t.powf(*p);
        }
        b[i] = 1.0; // value scaled by its own weight
    }
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = smax / smin;
    if !condition.is_finite() || condition > 1e12 {
        return Err(Error::IllConditionedFit { condition });
    }
    let c = svd
        .solve(&b, 0.0)
        .map_err(|_| Error::IllConditionedFit { condition: f64::INFINITY })?;
    let mut residual = 0.0;
    for s in samples {
        let fitted: f64 = (0..3).map(|j| c[j] * s.t.powf(powers[j])).sum();
        residual += ((fitted - s.value) / s.value).powi(2);
    }
    let t_window = samples
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), s| (lo.min(s.t), hi.max(s.t)));
    Ok(CoefficientFit {
        a0_hat: c[0],
        a1_hat: c[1].abs(),
        sign: if c[1] >= 0.0 { 1 } else { -1 },
        t_window,
        residual_norm: residual.sqrt(),
        prediction: None,
    })
}

/// Samples the spectrum over a window (defaulting to [`select_t_window`]),
/// fits, and attaches the domain's prediction.
pub fn fit_spectrum(
    spectrum: &Spectrum,
    window: Option<(f64, f64)>,
    count: usize,
) -> Result<CoefficientFit> {
    let (t_min, t_max) = match window {
        Some(w) => w,
        None => select_t_window(spectrum)?,
    };
    let samples = sample_heat_trace(spectrum, t_min, t_max, count)?;
    let n = spectrum.domain().dim();
    let prediction = crate::heat::predict_coefficients(
        n,
        spectrum.params(),
        spectrum.domain().volume(),
        spectrum.domain().boundary_volume(),
    );
    Ok(fit_coefficients(&samples, n)?.with_prediction(prediction))
}

/// Eigenvalue counting function `N(eta)`: count with multiplicity of
/// eigenvalues at most `eta`.
pub fn counting_function(spectrum: &Spectrum, eta: f64) -> usize {
    spectrum
        .entries()
        .iter()
        .take_while(|e| e.value <= eta)
        .map(|e| e.multiplicity as usize)
        .sum()
}

/// Median over the top half of the spectrum of
/// `N(tau_k) / (C_W tau_k^{n/2})`; near one when the Weyl law holds.
pub fn weyl_check(spectrum: &Spectrum) -> f64 {
    let taus = spectrum.expanded();
    assert!(taus.len() >= 2, "weyl check needs a populated spectrum");
    let n = spectrum.domain().dim();
    let c_w = weyl_coefficient(n, spectrum.params(), spectrum.domain().volume());
    let mut ratios: Vec<f64> = taus[taus.len() / 2..]
        .iter()
        .map(|&tau| counting_function(spectrum, tau) as f64 / (c_w * tau.powf(n as f64 / 2.0)))
        .collect();
    ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ratios[ratios.len() / 2]
}
