//! Pointwise Riemannian metric data and derived curvature quantities.
//!
//! A [`MetricJet`] carries the metric and its first two coordinate
//! derivatives at a single point; that is exactly the data needed for
//! Christoffel symbols, their derivatives, and the mixed Ricci tensor.
//! A [`MetricField`] supplies jets anywhere on a chart by fourth-order
//! central differencing of a metric callback.
//!
//! All quantities are recomputed on demand; jets are plain value records
//! with no interior mutability.

use crate::error::Error;
use crate::Result;
use nalgebra::DMatrix;
use std::sync::Arc;

/// Default finite-difference step for jets sampled from a field: balances
/// O(h^4) truncation against double-precision cancellation.
pub const DEFAULT_JET_STEP: f64 = 1e-3;

/// Shear modulus and second elastic modulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LameParameters {
    mu: f64,
    lambda: f64,
}

impl LameParameters {
    /// Requires `mu > 0` and `mu + lambda >= 0`. Equality `mu + lambda == 0`
    /// is the Laplacian reduction limit; strict inequality is the admissible
    /// elasticity regime.
    pub fn new(mu: f64, lambda: f64) -> Result<Self> {
        if mu.is_nan() || mu <= 0.0 {
            return Err(Error::InvalidParameter(format!("mu must be positive, got {mu}")));
        }
        if (mu + lambda).is_nan() || mu + lambda < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "mu + lambda must be nonnegative, got {}",
                mu + lambda
            )));
        }
        Ok(Self { mu, lambda })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Speed-squared factor of the pressure branch, `2 mu + lambda`.
    pub fn pressure_modulus(&self) -> f64 {
        2.0 * self.mu + self.lambda
    }

    /// Strictly admissible regime `mu + lambda > 0`.
    pub fn is_admissible(&self) -> bool {
        self.mu + self.lambda > 0.0
    }

    /// `mu + lambda == 0`: the operator degenerates to `-mu` times the
    /// componentwise Laplacian.
    pub fn is_laplacian_limit(&self) -> bool {
        self.mu + self.lambda == 0.0
    }
}

/// Dense rank-3 array with `dim^3` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    dim: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![0.0; dim * dim * dim] }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.dim + j) * self.dim + k]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        self.data[(i * self.dim + j) * self.dim + k] = v;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Dense rank-4 array with `dim^4` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4 {
    dim: usize,
    data: Vec<f64>,
}

impl Tensor4 {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![0.0; dim * dim * dim * dim] }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[((i * self.dim + j) * self.dim + k) * self.dim + l]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        self.data[((i * self.dim + j) * self.dim + k) * self.dim + l] = v;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Metric 2-jet at a point: `g`, `dg[(j,k,l)] = d g_jk / d x_l`, and
/// `d2g[(j,k,l,m)] = d^2 g_jk / d x_l d x_m`.
#[derive(Debug, Clone)]
pub struct MetricJet {
    dim: usize,
    g: DMatrix<f64>,
    dg: Tensor3,
    d2g: Tensor4,
}

impl MetricJet {
    /// Validates that `g` is symmetric positive definite and that the
    /// derivative arrays carry the required index symmetries.
    pub fn new(g: DMatrix<f64>, dg: Tensor3, d2g: Tensor4) -> Result<Self> {
        let dim = g.nrows();
        if dim == 0 || g.ncols() != dim {
            return Err(Error::InvalidMetric("metric must be square and nonempty".into()));
        }
        if dg.dim() != dim || d2g.dim() != dim {
            return Err(Error::InvalidMetric("jet arrays must match the metric dimension".into()));
        }
        for i in 0..dim {
            for j in 0..i {
                if (g[(i, j)] - g[(j, i)]).abs() > 1e-12 * (1.0 + g[(i, j)].abs()) {
                    return Err(Error::InvalidMetric("metric is not symmetric".into()));
                }
            }
        }
        if g.clone().cholesky().is_none() {
            return Err(Error::InvalidMetric("metric is not positive definite".into()));
        }
        for l in 0..dim {
            for j in 0..dim {
                for k in 0..j {
                    if (dg.get(j, k, l) - dg.get(k, j, l)).abs() > 1e-10 {
                        return Err(Error::InvalidMetric(
                            "dg is not symmetric in its metric indices".into(),
                        ));
                    }
                }
            }
        }
        Ok(Self { dim, g, dg, d2g })
    }

    /// Flat jet: identity metric, vanishing derivatives.
    pub fn euclidean(dim: usize) -> Self {
        Self {
            dim,
            g: DMatrix::identity(dim, dim),
            dg: Tensor3::zeros(dim),
            d2g: Tensor4::zeros(dim),
        }
    }

    /// Plane in polar coordinates `(r, theta)` at radius `r`: `g = diag(1, r^2)`.
    pub fn polar_at(r: f64) -> Self {
        let mut g = DMatrix::identity(2, 2);
        g[(1, 1)] = r * r;
        let mut dg = Tensor3::zeros(2);
        dg.set(1, 1, 0, 2.0 * r);
        let mut d2g = Tensor4::zeros(2);
        d2g.set(1, 1, 0, 0, 2.0);
        Self { dim: 2, g, dg, d2g }
    }

    /// Round sphere of the given radius in coordinates `(theta, phi)`:
    /// `g = diag(radius^2, radius^2 sin^2 theta)`.
    pub fn sphere_at(radius: f64, theta: f64) -> Self {
        let r2 = radius * radius;
        let mut g = DMatrix::identity(2, 2);
        g[(0, 0)] = r2;
        g[(1, 1)] = r2 * theta.sin().powi(2);
        let mut dg = Tensor3::zeros(2);
        dg.set(1, 1, 0, r2 * (2.0 * theta).sin());
        let mut d2g = Tensor4::zeros(2);
        d2g.set(1, 1, 0, 0, 2.0 * r2 * (2.0 * theta).cos());
        Self { dim: 2, g, dg, d2g }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn g(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn dg(&self) -> &Tensor3 {
        &self.dg
    }

    pub fn d2g(&self) -> &Tensor4 {
        &self.d2g
    }

    /// Inverse metric, with `g * g^-1 = I` to machine precision.
    pub fn inverse_metric(&self) -> Result<DMatrix<f64>> {
        self.g
            .clone()
            .cholesky()
            .map(|c| c.inverse())
            .ok_or_else(|| Error::InvalidMetric("metric is not positive definite".into()))
    }

    /// Christoffel symbols `C[(j,l,k)] = Gamma^j_{lk}`, symmetric in `(l,k)`.
    pub fn christoffel(&self) -> Result<Tensor3> {
        let n = self.dim;
        let ginv = self.inverse_metric()?;
        let mut out = Tensor3::zeros(n);
        for j in 0..n {
            for l in 0..n {
                for k in 0..=l {
                    let mut s = 0.0;
                    for m in 0..n {
                        s += ginv[(j, m)]
                            * (self.dg.get(k, m, l) + self.dg.get(l, m, k) - self.dg.get(l, k, m));
                    }
                    out.set(j, l, k, 0.5 * s);
                    out.set(j, k, l, 0.5 * s);
                }
            }
        }
        Ok(out)
    }

    /// Exact chain-rule derivative `D[(j,l,k,p)] = d Gamma^j_{lk} / d x_p`
    /// through `g`, `dg`, `d2g`.
    pub fn christoffel_derivative(&self) -> Result<Tensor4> {
        let n = self.dim;
        let ginv = self.inverse_metric()?;
        // d g^{jm} / d x_p = - g^{ja} (d g_ab / d x_p) g^{bm}
        let mut dginv = Tensor3::zeros(n);
        for j in 0..n {
            for m in 0..n {
                for p in 0..n {
                    let mut s = 0.0;
                    for a in 0..n {
                        for b in 0..n {
                            s -= ginv[(j, a)] * self.dg.get(a, b, p) * ginv[(b, m)];
                        }
                    }
                    dginv.set(j, m, p, s);
                }
            }
        }
        let mut out = Tensor4::zeros(n);
        for j in 0..n {
            for l in 0..n {
                for k in 0..=l {
                    for p in 0..n {
                        let mut s = 0.0;
                        for m in 0..n {
                            s += dginv.get(j, m, p)
                                * (self.dg.get(k, m, l) + self.dg.get(l, m, k)
                                    - self.dg.get(l, k, m));
                            s += ginv[(j, m)]
                                * (self.d2g.get(k, m, l, p) + self.d2g.get(l, m, k, p)
                                    - self.d2g.get(l, k, m, p));
                        }
                        out.set(j, l, k, p, 0.5 * s);
                        out.set(j, k, l, p, 0.5 * s);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Mixed Ricci tensor `R^j_k`, contracted from the curvature of the
    /// Levi-Civita connection:
    /// `R_jk = d Gamma^l_{jk}/d x_l - d Gamma^l_{jl}/d x_k
    ///         + Gamma^l_{sl} Gamma^s_{jk} - Gamma^l_{sk} Gamma^s_{jl}`.
    pub fn ricci_mixed(&self) -> Result<DMatrix<f64>> {
        let n = self.dim;
        let gamma = self.christoffel()?;
        let dgamma = self.christoffel_derivative()?;
        let ginv = self.inverse_metric()?;
        let mut lower = DMatrix::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += dgamma.get(l, j, k, l) - dgamma.get(l, j, l, k);
                    for t in 0..n {
                        s += gamma.get(l, t, l) * gamma.get(t, j, k)
                            - gamma.get(l, t, k) * gamma.get(t, j, l);
                    }
                }
                lower[(j, k)] = s;
            }
        }
        Ok(ginv * lower)
    }
}

type MetricFn = dyn Fn(&[f64]) -> Result<DMatrix<f64>> + Send + Sync;

/// Metric tensor as a function of chart coordinates. Callbacks must be
/// re-entrant: fields are shared freely across threads.
#[derive(Clone)]
pub struct MetricField {
    dim: usize,
    eval: Arc<MetricFn>,
}

impl std::fmt::Debug for MetricField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MetricField").field("dim", &self.dim).finish()
    }
}

impl MetricField {
    pub fn from_fn<F>(dim: usize, eval: F) -> Self
    where
        F: Fn(&[f64]) -> Result<DMatrix<f64>> + Send + Sync + 'static,
    {
        Self { dim, eval: Arc::new(eval) }
    }

    /// Flat metric in Cartesian coordinates.
    pub fn euclidean(dim: usize) -> Self {
        Self::from_fn(dim, move |_| Ok(DMatrix::identity(dim, dim)))
    }

    /// Plane in polar coordinates `(r, theta)`, valid for `r > 0`.
    pub fn polar_plane() -> Self {
        Self::from_fn(2, |x| {
            let r = x[0];
            if r <= 0.0 {
                return Err(Error::ChartError(format!("polar chart requires r > 0, got {r}")));
            }
            let mut g = DMatrix::identity(2, 2);
            g[(1, 1)] = r * r;
            Ok(g)
        })
    }

    /// Round sphere of the given radius in coordinates `(theta, phi)`,
    /// valid for `0 < theta < pi`.
    pub fn round_sphere(radius: f64) -> Self {
        Self::from_fn(2, move |x| {
            let theta = x[0];
            if theta <= 0.0 || theta >= std::f64::consts::PI {
                return Err(Error::ChartError(format!(
                    "sphere chart requires 0 < theta < pi, got {theta}"
                )));
            }
            let r2 = radius * radius;
            let mut g = DMatrix::identity(2, 2);
            g[(0, 0)] = r2;
            g[(1, 1)] = r2 * theta.sin().powi(2);
            Ok(g)
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        debug_assert_eq!(x.len(), self.dim);
        (self.eval)(x)
    }
}

/// Metric 2-jet at `x` by fourth-order central differences of the field,
/// with the mixed second derivatives symmetrized by averaging.
pub fn jet_from_field(field: &MetricField, x: &[f64], h: f64) -> Result<MetricJet> {
    assert!(h > 0.0, "finite-difference step must be positive");
    let n = field.dim();
    let g = field.eval(x)?;

    let shifted = |l: usize, s: f64| -> Result<DMatrix<f64>> {
        let mut y = x.to_vec();
        y[l] += s;
        field.eval(&y)
    };
    // 4th-order stencils in pairwise-difference form, so a constant field
    // yields exactly zero derivatives instead of stencil round-off.
    let d1 = |l: usize| -> Result<DMatrix<f64>> {
        let outer = shifted(l, -2.0 * h)? - shifted(l, 2.0 * h)?;
        let inner = shifted(l, h)? - shifted(l, -h)?;
        Ok((outer + 8.0 * inner) / (12.0 * h))
    };
    let d2_pure = |l: usize| -> Result<DMatrix<f64>> {
        let near = (shifted(l, h)? - &g) + (shifted(l, -h)? - &g);
        let far = (shifted(l, 2.0 * h)? - &g) + (shifted(l, -2.0 * h)? - &g);
        Ok((16.0 * near - far) / (12.0 * h * h))
    };
    // Mixed derivative by the tensor-product stencil in double-difference form.
    let d2_mixed = |l: usize, m: usize| -> Result<DMatrix<f64>> {
        let coeffs = [(-2.0, -1.0), (-1.0, 8.0), (1.0, -8.0), (2.0, 1.0)];
        let rows: Vec<DMatrix<f64>> =
            coeffs.iter().map(|&(sl, _)| shifted(l, sl * h)).collect::<Result<_>>()?;
        let cols: Vec<DMatrix<f64>> =
            coeffs.iter().map(|&(sm, _)| shifted(m, sm * h)).collect::<Result<_>>()?;
        let mut acc = DMatrix::zeros(n, n);
        for (i, &(sl, cl)) in coeffs.iter().enumerate() {
            for (j, &(sm, cm)) in coeffs.iter().enumerate() {
                let mut y = x.to_vec();
                y[l] += sl * h;
                y[m] += sm * h;
                acc += (field.eval(&y)? - &rows[i] - &cols[j] + &g) * (cl * cm);
            }
        }
        Ok(acc / (144.0 * h * h))
    };

    let mut dg = Tensor3::zeros(n);
    for l in 0..n {
        let d = d1(l)?;
        for j in 0..n {
            for k in 0..n {
                // Average the (j,k) and (k,j) entries so the stored array is
                // exactly symmetric even if the callback is only nearly so.
                dg.set(j, k, l, 0.5 * (d[(j, k)] + d[(k, j)]));
            }
        }
    }
    let mut d2g = Tensor4::zeros(n);
    for l in 0..n {
        for m in l..n {
            let d = if l == m { d2_pure(l)? } else { d2_mixed(l, m)? };
            for j in 0..n {
                for k in 0..n {
                    let v = 0.5 * (d[(j, k)] + d[(k, j)]);
                    d2g.set(j, k, l, m, v);
                    d2g.set(j, k, m, l, v);
                }
            }
        }
    }
    MetricJet::new(g, dg, d2g)
}
