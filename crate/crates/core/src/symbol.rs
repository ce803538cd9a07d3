//! Matrix symbol calculus for the Navier-Lame operator.
//!
//! The full symbol of the operator splits by homogeneity into a quadratic
//! principal part, a first-order part linear in the covector with purely
//! imaginary coefficients, and a zeroth-order part built from curvature.
//! The resolvent parametrix is the asymptotic series whose leading term is
//! the closed-form inverse of the principal part; higher terms follow from
//! the symbol composition recursion, with covector derivatives taken
//! analytically and coordinate derivatives by fourth-order finite
//! differences over a metric field.

use crate::error::Error;
use crate::geometry::{jet_from_field, LameParameters, MetricField, MetricJet};
use crate::Result;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Dense complex matrix value of a symbol at a point of phase space.
pub type SymbolMatrix = DMatrix<Complex64>;

/// Real covector at a point; its squared length is measured with the
/// inverse metric of the ambient jet.
#[derive(Debug, Clone, PartialEq)]
pub struct CotangentVector(pub DVector<f64>);

impl CotangentVector {
    pub fn new(components: Vec<f64>) -> Self {
        Self(DVector::from_vec(components))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    /// `sum_lm g^{lm} xi_l xi_m`.
    pub fn metric_norm_sq(&self, jet: &MetricJet) -> Result<f64> {
        let ginv = jet.inverse_metric()?;
        Ok((ginv * &self.0).dot(&self.0))
    }
}

/// Complex spectral parameter of the resolvent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParameter {
    pub tau: Complex64,
}

impl SpectralParameter {
    pub fn new(tau: Complex64) -> Self {
        Self { tau }
    }

    /// Distance from the two wave poles `mu q` and `(2 mu + lambda) q`.
    pub fn pole_distances(&self, q: f64, params: &LameParameters) -> (f64, f64) {
        (
            (self.tau - Complex64::from(params.mu() * q)).norm(),
            (self.tau - Complex64::from(params.pressure_modulus() * q)).norm(),
        )
    }

    /// True when the parameter clears both poles by the inversion threshold.
    pub fn is_off_rays(&self, q: f64, params: &LameParameters) -> bool {
        let (d1, d2) = self.pole_distances(q, params);
        let thr = pole_threshold(self.tau);
        d1 >= thr && d2 >= thr
    }
}

/// The homogeneity split of `tau I - A` at one phase-space point.
#[derive(Debug, Clone)]
pub struct SymbolSplit {
    /// Quadratic-in-covector part carrying the spectral parameter.
    pub principal: SymbolMatrix,
    /// Linear-in-covector part; purely imaginary for real metric jets.
    pub first_order: SymbolMatrix,
    /// Covector-independent curvature part.
    pub zeroth_order: SymbolMatrix,
}

fn pole_threshold(tau: Complex64) -> f64 {
    1e-12 * (1.0 + tau.norm())
}

fn check_off_rays(tau: Complex64, q: f64, params: &LameParameters) -> Result<(Complex64, Complex64)> {
    let d_shear = tau - Complex64::from(params.mu() * q);
    let d_pressure = tau - Complex64::from(params.pressure_modulus() * q);
    let thr = pole_threshold(tau);
    let dist = d_shear.norm().min(d_pressure.norm());
    if dist < thr {
        return Err(Error::PoleProximity { distance: dist, threshold: thr });
    }
    Ok((d_shear, d_pressure))
}

/// Largest entry magnitude; the max norm used by the defect diagnostics.
pub fn max_abs(m: &SymbolMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Full symbol of the operator: quadratic leading blocks plus the
/// first-order Christoffel blocks and the zeroth-order curvature blocks.
pub fn full_symbol(
    jet: &MetricJet,
    params: &LameParameters,
    xi: &CotangentVector,
) -> Result<SymbolMatrix> {
    let n = jet.dim();
    let mu = params.mu();
    let ml = params.mu() + params.lambda();
    let ginv = jet.inverse_metric()?;
    let gamma = jet.christoffel()?;
    let dgamma = jet.christoffel_derivative()?;
    let ricci = jet.ricci_mixed()?;
    let w = &ginv * &xi.0; // w_j = sum_r g^{jr} xi_r
    let q = w.dot(&xi.0);

    let mut a = SymbolMatrix::zeros(n, n);
    // mu |xi|^2 I + (mu+lambda) w xi^T
    for j in 0..n {
        a[(j, j)] += Complex64::from(mu * q);
        for k in 0..n {
            a[(j, k)] += Complex64::from(ml * w[j] * xi.0[k]);
        }
    }
    // + i mu (g^{ml} Gamma^s_{ml} xi_s) I
    let mut trc = 0.0;
    for m in 0..n {
        for l in 0..n {
            for s in 0..n {
                trc += ginv[(m, l)] * gamma.get(s, m, l) * xi.0[s];
            }
        }
    }
    for j in 0..n {
        a[(j, j)] += Complex64::new(0.0, mu * trc);
    }
    // - 2 i mu [g^{ml} Gamma^j_{km} xi_l] - i (mu+lambda) [g^{jm} Gamma^l_{kl} xi_m]
    for j in 0..n {
        for k in 0..n {
            let mut b1 = 0.0;
            for m in 0..n {
                for l in 0..n {
                    b1 += ginv[(m, l)] * gamma.get(j, k, m) * xi.0[l];
                }
            }
            let mut b2 = 0.0;
            for m in 0..n {
                let mut tr = 0.0;
                for l in 0..n {
                    tr += gamma.get(l, k, l);
                }
                b2 += ginv[(j, m)] * tr * xi.0[m];
            }
            a[(j, k)] += Complex64::new(0.0, -2.0 * mu * b1 - ml * b2);
        }
    }
    // - mu [g^{ml}(dGamma^j_{kl}/dx_m + Gamma^j_{hl}Gamma^h_{km} - Gamma^j_{kh}Gamma^h_{ml})]
    // - (mu+lambda) [g^{jm} dGamma^l_{kl}/dx_m] - mu Ric
    for j in 0..n {
        for k in 0..n {
            let mut c1 = 0.0;
            for l in 0..n {
                for m in 0..n {
                    let mut v = dgamma.get(j, k, l, m);
                    for h in 0..n {
                        v += gamma.get(j, h, l) * gamma.get(h, k, m)
                            - gamma.get(j, k, h) * gamma.get(h, m, l);
                    }
                    c1 += ginv[(m, l)] * v;
                }
            }
            let mut c2 = 0.0;
            for m in 0..n {
                let mut tr = 0.0;
                for l in 0..n {
                    tr += dgamma.get(l, k, l, m);
                }
                c2 += ginv[(j, m)] * tr;
            }
            a[(j, k)] += Complex64::from(-mu * c1 - ml * c2 - mu * ricci[(j, k)]);
        }
    }
    Ok(a)
}

/// Splits `tau I - A` into its homogeneity components. The three parts sum
/// to `tau I - A` exactly (to round-off).
pub fn split_symbol(
    jet: &MetricJet,
    params: &LameParameters,
    xi: &CotangentVector,
    tau: Complex64,
) -> Result<SymbolSplit> {
    let n = jet.dim();
    let mu = params.mu();
    let ml = params.mu() + params.lambda();
    let ginv = jet.inverse_metric()?;
    let gamma = jet.christoffel()?;
    let dgamma = jet.christoffel_derivative()?;
    let ricci = jet.ricci_mixed()?;
    let w = &ginv * &xi.0;
    let q = w.dot(&xi.0);

    let mut principal = SymbolMatrix::zeros(n, n);
    for j in 0..n {
        principal[(j, j)] = tau - Complex64::from(mu * q);
        for k in 0..n {
            principal[(j, k)] -= Complex64::from(ml * w[j] * xi.0[k]);
        }
    }

    let mut first = SymbolMatrix::zeros(n, n);
    let mut trc = 0.0;
    for m in 0..n {
        for l in 0..n {
            for s in 0..n {
                trc += ginv[(m, l)] * gamma.get(s, m, l) * xi.0[s];
            }
        }
    }
    for j in 0..n {
        first[(j, j)] -= Complex64::new(0.0, mu * trc);
        for k in 0..n {
            let mut b1 = 0.0;
            for m in 0..n {
                for l in 0..n {
                    b1 += ginv[(m, l)] * gamma.get(j, k, m) * xi.0[l];
                }
            }
            let mut b2 = 0.0;
            for m in 0..n {
                let mut tr = 0.0;
                for l in 0..n {
                    tr += gamma.get(l, k, l);
                }
                b2 += ginv[(j, m)] * tr * xi.0[m];
            }
            first[(j, k)] += Complex64::new(0.0, 2.0 * mu * b1 + ml * b2);
        }
    }

    let mut zeroth = SymbolMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            let mut c1 = 0.0;
            for l in 0..n {
                for m in 0..n {
                    let mut v = dgamma.get(j, k, l, m);
                    for h in 0..n {
                        v += gamma.get(j, h, l) * gamma.get(h, k, m)
                            - gamma.get(j, k, h) * gamma.get(h, m, l);
                    }
                    c1 += ginv[(m, l)] * v;
                }
            }
            let mut c2 = 0.0;
            for m in 0..n {
                let mut tr = 0.0;
                for l in 0..n {
                    tr += dgamma.get(l, k, l, m);
                }
                c2 += ginv[(j, m)] * tr;
            }
            zeroth[(j, k)] = Complex64::from(mu * c1 + ml * c2 + mu * ricci[(j, k)]);
        }
    }
    Ok(SymbolSplit { principal, first_order: first, zeroth_order: zeroth })
}

/// Closed-form inverse of the principal symbol:
/// `s1 I + s2 G` with `G_jk = (g^{j.} xi)_j xi_k`,
/// `s1 = 1/(tau - mu q)`, `s2 = (mu+lambda)/((tau - mu q)(tau - (2mu+lambda) q))`.
pub fn invert_principal(
    jet: &MetricJet,
    params: &LameParameters,
    xi: &CotangentVector,
    tau: Complex64,
) -> Result<SymbolMatrix> {
    let ginv = jet.inverse_metric()?;
    invert_principal_with(&ginv, params, xi, tau)
}

fn invert_principal_with(
    ginv: &DMatrix<f64>,
    params: &LameParameters,
    xi: &CotangentVector,
    tau: Complex64,
) -> Result<SymbolMatrix> {
    let n = ginv.nrows();
    let w = ginv * &xi.0;
    let q = w.dot(&xi.0);
    let (d_shear, d_pressure) = check_off_rays(tau, q, params)?;
    let s1 = Complex64::from(1.0) / d_shear;
    let s2 = Complex64::from(params.mu() + params.lambda()) / (d_shear * d_pressure);
    let mut out = SymbolMatrix::zeros(n, n);
    for j in 0..n {
        out[(j, j)] = s1;
        for k in 0..n {
            out[(j, k)] += s2 * Complex64::from(w[j] * xi.0[k]);
        }
    }
    Ok(out)
}

/// Trace of the principal resolvent term in closed form:
/// `n/(tau - mu q) + (mu+lambda) q / ((tau - mu q)(tau - (2mu+lambda) q))`.
pub fn principal_resolvent_trace(
    jet: &MetricJet,
    params: &LameParameters,
    xi: &CotangentVector,
    tau: Complex64,
) -> Result<Complex64> {
    let n = jet.dim() as f64;
    let q = xi.metric_norm_sq(jet)?;
    let (d_shear, d_pressure) = check_off_rays(tau, q, params)?;
    Ok(Complex64::from(n) / d_shear
        + Complex64::from((params.mu() + params.lambda()) * q) / (d_shear * d_pressure))
}

/// Same closed form, directly from the metric length `q` of the covector.
pub fn principal_resolvent_trace_from_q(
    n: usize,
    params: &LameParameters,
    q: f64,
    tau: Complex64,
) -> Result<Complex64> {
    let (d_shear, d_pressure) = check_off_rays(tau, q, params)?;
    Ok(Complex64::from(n as f64) / d_shear
        + Complex64::from((params.mu() + params.lambda()) * q) / (d_shear * d_pressure))
}

// ---------------------------------------------------------------------------
// Resolvent parametrix recursion
// ---------------------------------------------------------------------------

/// Maximum recursion depth supported by the available jet order.
pub const MAX_RESOLVENT_ORDER: usize = 2;

struct Recursion<'a> {
    field: &'a MetricField,
    params: &'a LameParameters,
    xi: &'a CotangentVector,
    tau: Complex64,
    h: f64,
}

impl Recursion<'_> {
    fn n(&self) -> usize {
        self.field.dim()
    }

    /// Leading parametrix term; needs only the metric value, not its jet.
    fn q2_at(&self, x: &[f64]) -> Result<SymbolMatrix> {
        let g = self.field.eval(x)?;
        let ginv = g
            .cholesky()
            .map(|c| c.inverse())
            .ok_or_else(|| Error::InvalidMetric("metric is not positive definite".into()))?;
        invert_principal_with(&ginv, self.params, self.xi, self.tau)
    }

    fn split_at(&self, x: &[f64]) -> Result<SymbolSplit> {
        let jet = jet_from_field(self.field, x, self.h)?;
        split_symbol(&jet, self.params, self.xi, self.tau)
    }

    fn term(&self, order: usize, x: &[f64]) -> Result<SymbolMatrix> {
        if order == 0 {
            return self.q2_at(x);
        }
        let sum = self.correction_sum(order, x, self.h)?;
        Ok(-(self.q2_at(x)? * sum))
    }

    /// The correction sum of the composition recursion at homogeneity drop
    /// `order >= 1`: all `(j, alpha, k)` with `j < order`, `k <= 2`, and
    /// `order = j + |alpha| + 2 - k`, iterated with `j` ascending.
    fn correction_sum(&self, order: usize, x: &[f64], fd_step: f64) -> Result<SymbolMatrix> {
        let n = self.n();
        let split = self.split_at(x)?;
        let d_xi = DXi::new(self.field, self.params, self.xi, x, self.h)?;
        let mut acc = SymbolMatrix::zeros(n, n);
        for j in 0..order {
            for k in 0..=2usize {
                let Some(alpha_len) = (order + k).checked_sub(j + 2) else { continue };
                if alpha_len > 2 {
                    continue;
                }
                match alpha_len {
                    0 => {
                        let a_k = match k {
                            0 => &split.zeroth_order,
                            1 => &split.first_order,
                            // k = 2 with |alpha| = 0 would mean j = order,
                            // excluded by the j < order constraint.
                            _ => unreachable!("principal term re-enters only via derivatives"),
                        };
                        acc += a_k * self.term(j, x)?;
                    }
                    1 => {
                        for m in 0..n {
                            let da = d_xi.first(k, m);
                            let dq = self.fd_x1(j, x, m, fd_step)?;
                            acc += da * (dq * Complex64::new(0.0, -1.0));
                        }
                    }
                    2 => {
                        for m in 0..n {
                            for p in m..n {
                                let coeff = if m == p { 0.5 } else { 1.0 };
                                let da = d_xi.second(k, m, p);
                                let dq = self.fd_x2(j, x, m, p, fd_step)?;
                                // D_x^alpha = (-i)^2 d^2/dx = -d^2/dx
                                acc += da * (dq * Complex64::from(-coeff));
                            }
                        }
                    }
                    _ => unreachable!(),
                }
            }
        }
        Ok(acc)
    }

    fn term_shifted(&self, order: usize, x: &[f64], m: usize, s: f64) -> Result<SymbolMatrix> {
        let mut y = x.to_vec();
        y[m] += s;
        self.term(order, &y)
    }

    /// Fourth-order first coordinate derivative of the parametrix term.
    ///
    /// Assembled from pairwise differences so that constant-in-x symbols
    /// produce an exact zero instead of stencil round-off.
    fn fd_x1(&self, order: usize, x: &[f64], m: usize, step: f64) -> Result<SymbolMatrix> {
        let f = |s: f64| self.term_shifted(order, x, m, s);
        let outer = f(-2.0 * step)? - f(2.0 * step)?;
        let inner = f(step)? - f(-step)?;
        Ok((outer + inner * Complex64::from(8.0)) / Complex64::from(12.0 * step))
    }

    /// Fourth-order second coordinate derivative (pure or mixed), also in
    /// difference form.
    fn fd_x2(&self, order: usize, x: &[f64], m: usize, p: usize, step: f64) -> Result<SymbolMatrix> {
        if m == p {
            let center = self.term(order, x)?;
            let f = |s: f64| -> Result<SymbolMatrix> {
                Ok(self.term_shifted(order, x, m, s)? - &center)
            };
            let near = f(step)? + f(-step)?;
            let far = f(2.0 * step)? + f(-2.0 * step)?;
            Ok((near * Complex64::from(16.0) - far) / Complex64::from(12.0 * step * step))
        } else {
            // Double-difference form: each term vanishes identically when the
            // symbol does not depend on x.
            let coeffs = [(-2.0, -1.0), (-1.0, 8.0), (1.0, -8.0), (2.0, 1.0)];
            let n = self.n();
            let center = self.term(order, x)?;
            let rows: Vec<SymbolMatrix> = coeffs
                .iter()
                .map(|&(sm, _)| self.term_shifted(order, x, m, sm * step))
                .collect::<Result<_>>()?;
            let cols: Vec<SymbolMatrix> = coeffs
                .iter()
                .map(|&(sp, _)| self.term_shifted(order, x, p, sp * step))
                .collect::<Result<_>>()?;
            let mut acc = SymbolMatrix::zeros(n, n);
            for (i, &(sm, cm)) in coeffs.iter().enumerate() {
                for (j, &(sp, cp)) in coeffs.iter().enumerate() {
                    let mut y = x.to_vec();
                    y[m] += sm * step;
                    y[p] += sp * step;
                    let term = self.term(order, &y)? - &rows[i] - &cols[j] + &center;
                    acc += term * Complex64::from(cm * cp);
                }
            }
            Ok(acc / Complex64::from(144.0 * step * step))
        }
    }
}

/// Analytic covector derivatives of the split symbol parts at a fixed point.
struct DXi {
    n: usize,
    ginv: DMatrix<f64>,
    w: DVector<f64>,
    xi: DVector<f64>,
    mu: f64,
    ml: f64,
    gamma: crate::geometry::Tensor3,
    zero: SymbolMatrix,
}

impl DXi {
    fn new(
        field: &MetricField,
        params: &LameParameters,
        xi: &CotangentVector,
        x: &[f64],
        h: f64,
    ) -> Result<Self> {
        let jet = jet_from_field(field, x, h)?;
        let ginv = jet.inverse_metric()?;
        let gamma = jet.christoffel()?;
        let w = &ginv * &xi.0;
        let n = jet.dim();
        Ok(Self {
            n,
            ginv,
            w,
            xi: xi.0.clone(),
            mu: params.mu(),
            ml: params.mu() + params.lambda(),
            gamma,
            zero: SymbolMatrix::zeros(n, n),
        })
    }

    /// d a_k / d xi_m.
    fn first(&self, k: usize, m: usize) -> SymbolMatrix {
        match k {
            2 => {
                // d a2 / d xi_m = -2 mu w_m I - (mu+lambda)(g^{jm} xi_k + w_j delta_km)
                let mut out = SymbolMatrix::zeros(self.n, self.n);
                for j in 0..self.n {
                    out[(j, j)] -= Complex64::from(2.0 * self.mu * self.w[m]);
                    for kk in 0..self.n {
                        let mut v = self.ginv[(j, m)] * self.xi[kk];
                        if kk == m {
                            v += self.w[j];
                        }
                        out[(j, kk)] -= Complex64::from(self.ml * v);
                    }
                }
                out
            }
            1 => {
                // a1 is linear in xi; this is its coefficient matrix on xi_m.
                let mut out = SymbolMatrix::zeros(self.n, self.n);
                let mut trc = 0.0;
                for a in 0..self.n {
                    for l in 0..self.n {
                        trc += self.ginv[(a, l)] * self.gamma.get(m, a, l);
                    }
                }
                for j in 0..self.n {
                    out[(j, j)] -= Complex64::new(0.0, self.mu * trc);
                    for kk in 0..self.n {
                        let mut b1 = 0.0;
                        for a in 0..self.n {
                            b1 += self.ginv[(a, m)] * self.gamma.get(j, kk, a);
                        }
                        let mut tr = 0.0;
                        for l in 0..self.n {
                            tr += self.gamma.get(l, kk, l);
                        }
                        let b2 = self.ginv[(j, m)] * tr;
                        out[(j, kk)] += Complex64::new(0.0, 2.0 * self.mu * b1 + self.ml * b2);
                    }
                }
                out
            }
            _ => self.zero.clone(),
        }
    }

    /// d^2 a_k / d xi_m d xi_p.
    fn second(&self, k: usize, m: usize, p: usize) -> SymbolMatrix {
        if k != 2 {
            return self.zero.clone();
        }
        let mut out = SymbolMatrix::zeros(self.n, self.n);
        for j in 0..self.n {
            out[(j, j)] -= Complex64::from(2.0 * self.mu * self.ginv[(m, p)]);
            out[(j, m)] -= Complex64::from(self.ml * self.ginv[(j, p)]);
            out[(j, p)] -= Complex64::from(self.ml * self.ginv[(j, m)]);
        }
        out
    }
}

/// Parametrix term of homogeneity `-2 - order` at a point of a metric field.
///
/// `order = 0` is the closed-form principal inverse; `order = 1, 2` follow the
/// composition recursion with coordinate derivatives taken by fourth-order
/// finite differences of the lower terms over the field.
pub fn resolvent_term(
    field: &MetricField,
    params: &LameParameters,
    x: &[f64],
    xi: &CotangentVector,
    tau: Complex64,
    order: usize,
    h: f64,
) -> Result<SymbolMatrix> {
    if order > MAX_RESOLVENT_ORDER {
        return Err(Error::InvalidParameter(format!(
            "resolvent recursion is limited to order {MAX_RESOLVENT_ORDER} by the available jet order, got {order}"
        )));
    }
    let rec = Recursion { field, params, xi, tau, h };
    rec.term(order, x)
}

/// Residual of the defining recursion equations, maximized over
/// `1 <= l <= max_order`.
///
/// The correction sum is re-evaluated with a halved finite-difference step so
/// the residual measures the numerical self-consistency of the recursion
/// rather than cancelling identically.
pub fn parametrix_defect(
    field: &MetricField,
    params: &LameParameters,
    x: &[f64],
    xi: &CotangentVector,
    tau: Complex64,
    max_order: usize,
    h: f64,
) -> Result<f64> {
    if max_order > MAX_RESOLVENT_ORDER {
        return Err(Error::InvalidParameter(format!(
            "defect check is limited to order {MAX_RESOLVENT_ORDER}, got {max_order}"
        )));
    }
    let rec = Recursion { field, params, xi, tau, h };
    let jet = jet_from_field(field, x, h)?;
    let split = split_symbol(&jet, params, xi, tau)?;
    let mut worst: f64 = 0.0;
    for l in 1..=max_order {
        let q_l = rec.term(l, x)?;
        let sum_half = rec.correction_sum(l, x, h / 2.0)?;
        let residual = &split.principal * q_l + sum_half;
        worst = worst.max(max_abs(&residual));
    }
    Ok(worst)
}
