//! Randomized verification suites behind the `symbol-verify` command and the
//! acceptance checks: the principal-inverse identity over random admissible
//! inputs, the closed-form trace against the matrix trace, and parametrix
//! defect diagnostics on reference metric fields.

use crate::error::Error;
use crate::geometry::{LameParameters, MetricField, MetricJet, Tensor3, Tensor4};
use crate::symbol::{
    invert_principal, max_abs, parametrix_defect, principal_resolvent_trace, CotangentVector,
    SymbolMatrix,
};
use crate::Result;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Maximum errors of the randomized principal-inverse suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseSuiteReport {
    pub trials: usize,
    pub seed: u64,
    /// max over trials of the entrywise norm of `a2 * invert(a2) - I`.
    pub max_inverse_error: f64,
    /// max over trials of |closed-form trace - matrix trace|.
    pub max_trace_error: f64,
}

/// Defect diagnostic on one reference field.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectReport {
    pub field: VerifyField,
    pub max_order: usize,
    pub defect: f64,
    pub threshold: f64,
}

impl DefectReport {
    pub fn passes(&self) -> bool {
        self.defect < self.threshold
    }
}

/// Reference metric fields for the defect diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyField {
    Flat,
    Polar,
    Sphere,
}

impl VerifyField {
    pub fn name(&self) -> &'static str {
        match self {
            VerifyField::Flat => "flat",
            VerifyField::Polar => "polar",
            VerifyField::Sphere => "sphere",
        }
    }

    /// Flat fields cancel exactly; curved fields are finite-difference
    /// limited.
    pub fn defect_threshold(&self) -> f64 {
        match self {
            VerifyField::Flat => 1e-10,
            _ => 1e-5,
        }
    }

    fn build(&self) -> (MetricField, Vec<f64>) {
        match self {
            VerifyField::Flat => (MetricField::euclidean(2), vec![0.1, -0.2]),
            VerifyField::Polar => (MetricField::polar_plane(), vec![2.0, 0.4]),
            VerifyField::Sphere => {
                (MetricField::round_sphere(1.0), vec![std::f64::consts::FRAC_PI_4, 0.3])
            }
        }
    }
}

impl std::str::FromStr for VerifyField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flat" => Ok(VerifyField::Flat),
            "polar" => Ok(VerifyField::Polar),
            "sphere" => Ok(VerifyField::Sphere),
            _ => Err(Error::InvalidParameter(format!("unknown verify field {s:?}"))),
        }
    }
}

fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let r = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    &r * r.transpose() + DMatrix::identity(n, n) * 0.5
}

/// Runs `trials` random admissible `(g, xi, tau)` draws over dimensions 2-4
/// and records the worst inverse-identity and trace errors.
///
/// `tau_override` replaces the random spectral parameter in every trial, with
/// the covector normalized to unit metric length so the wave poles sit at
/// exactly `mu` and `2 mu + lambda`; an override on one of them surfaces as
/// [`Error::PoleProximity`].
pub fn inverse_identity_suite(
    params: &LameParameters,
    trials: usize,
    seed: u64,
    tau_override: Option<Complex64>,
) -> Result<InverseSuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_inverse_error = 0.0f64;
    let mut max_trace_error = 0.0f64;
    for _ in 0..trials {
        let n = rng.gen_range(2..=4usize);
        let g = random_spd(&mut rng, n);
        let jet = MetricJet::new(g, Tensor3::zeros(n), Tensor4::zeros(n))?;
        let mut xi = CotangentVector::new((0..n).map(|_| rng.gen_range(-2.0..2.0)).collect());
        let mut q = xi.metric_norm_sq(&jet)?;
        let tau = match tau_override {
            Some(t) => {
                while q < 1e-3 {
                    xi = CotangentVector::new((0..n).map(|_| rng.gen_range(-2.0..2.0)).collect());
                    q = xi.metric_norm_sq(&jet)?;
                }
                xi = CotangentVector::new(xi.as_slice().iter().map(|v| v / q.sqrt()).collect());
                q = 1.0;
                t
            }
            None => {
                // Random magnitude around the pole scale, argument bounded
                // away from the positive real axis where both poles live.
                let r = (1.0 + q) * rng.gen_range(0.2..3.0);
                let theta = rng.gen_range(0.4..std::f64::consts::TAU - 0.4);
                Complex64::from_polar(r, theta)
            }
        };
        let _ = q;
        let inv = invert_principal(&jet, params, &xi, tau)?;
        let split = crate::symbol::split_symbol(&jet, params, &xi, tau)?;
        let residual = &split.principal * &inv - SymbolMatrix::identity(n, n);
        max_inverse_error = max_inverse_error.max(max_abs(&residual));
        let trace_err =
            (principal_resolvent_trace(&jet, params, &xi, tau)? - inv.trace()).norm();
        max_trace_error = max_trace_error.max(trace_err);
    }
    Ok(InverseSuiteReport { trials, seed, max_inverse_error, max_trace_error })
}

/// Parametrix-defect diagnostics on the requested reference fields.
pub fn parametrix_defect_suite(
    params: &LameParameters,
    fields: &[VerifyField],
    max_order: usize,
    h: f64,
) -> Result<Vec<DefectReport>> {
    let xi = CotangentVector::new(vec![0.8, -0.3]);
    let tau = Complex64::new(0.0, 4.0);
    fields
        .iter()
        .map(|&field| {
            let (metric, x) = field.build();
            let defect = parametrix_defect(&metric, params, &x, &xi, tau, max_order, h)?;
            Ok(DefectReport { field, max_order, defect, threshold: field.defect_threshold() })
        })
        .collect()
}
