//! Closed-form heat-trace densities and coefficient predictions.
//!
//! The elasticity operator has two wave branches: a shear branch of
//! multiplicity `n - 1` with modulus `mu` and a pressure branch of
//! multiplicity one with modulus `2 mu + lambda`. Every density here is the
//! corresponding two-branch combination of scalar Gaussian heat kernels.

use crate::geometry::LameParameters;
use crate::special::{erfc, gamma};

/// Pointwise interior and integrated boundary-layer densities at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatDensity {
    pub t: f64,
    /// Interior trace density per unit volume.
    pub interior: f64,
    /// Boundary-layer contribution per unit boundary area (already
    /// integrated over the depth coordinate).
    pub boundary: f64,
    /// -1 for Dirichlet, +1 for the traction-free condition.
    pub bc_sign: i8,
}

impl HeatDensity {
    pub fn at(n: usize, params: &LameParameters, t: f64, bc_sign: i8) -> Self {
        assert!(t > 0.0);
        assert!(bc_sign == -1 || bc_sign == 1);
        Self {
            t,
            interior: interior_density(n, params, t),
            boundary: boundary_layer_integral(n, params, t),
            bc_sign,
        }
    }
}

/// Leading two heat-trace coefficients of a domain.
///
/// The Dirichlet trace model is `a0 t^{-n/2} - a1 t^{-(n-1)/2} + ...` and the
/// traction-free model flips the sign of `a1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientPrediction {
    pub a0: f64,
    /// Unsigned magnitude of the boundary coefficient.
    pub a1: f64,
    pub n: usize,
    pub vol: f64,
    pub boundary_vol: f64,
    pub params: LameParameters,
}

/// `(n-1)/(4 pi mu)^{n/2} + 1/(4 pi (2mu+lambda))^{n/2}`: the interior
/// density with the time factored out.
pub fn volume_density_factor(n: usize, params: &LameParameters) -> f64 {
    let nf = n as f64;
    (nf - 1.0) / (4.0 * std::f64::consts::PI * params.mu()).powf(nf / 2.0)
        + 1.0 / (4.0 * std::f64::consts::PI * params.pressure_modulus()).powf(nf / 2.0)
}

/// Same two-branch factor at boundary dimension `n - 1`.
pub fn boundary_density_factor(n: usize, params: &LameParameters) -> f64 {
    let nf = n as f64;
    (nf - 1.0) / (4.0 * std::f64::consts::PI * params.mu()).powf((nf - 1.0) / 2.0)
        + 1.0 / (4.0 * std::f64::consts::PI * params.pressure_modulus()).powf((nf - 1.0) / 2.0)
}

/// Contour integral of the principal resolvent trace against `e^{-t tau}`,
/// evaluated by residues: `(n-1) e^{-t mu q} + e^{-t (2mu+lambda) q}`.
pub fn residue_heat_symbol(n: usize, params: &LameParameters, q: f64, t: f64) -> f64 {
    assert!(t > 0.0 && q >= 0.0);
    (n as f64 - 1.0) * (-t * params.mu() * q).exp()
        + (-t * params.pressure_modulus() * q).exp()
}

/// Interior heat-trace density per unit volume:
/// `(n-1)/(4 pi mu t)^{n/2} + 1/(4 pi (2mu+lambda) t)^{n/2}`.
pub fn interior_density(n: usize, params: &LameParameters, t: f64) -> f64 {
    assert!(t > 0.0);
    volume_density_factor(n, params) / t.powf(n as f64 / 2.0)
}

/// Image-term trace density at depth `xn` from the boundary.
pub fn boundary_layer_density(n: usize, params: &LameParameters, t: f64, xn: f64) -> f64 {
    assert!(t > 0.0 && xn >= 0.0);
    let nf = n as f64;
    let pi = std::f64::consts::PI;
    let mu = params.mu();
    let pm = params.pressure_modulus();
    let d2 = (2.0 * xn) * (2.0 * xn);
    (nf - 1.0) / (4.0 * pi * mu * t).powf(nf / 2.0) * (-d2 / (4.0 * mu * t)).exp()
        + 1.0 / (4.0 * pi * pm * t).powf(nf / 2.0) * (-d2 / (4.0 * pm * t)).exp()
}

/// Closed-form depth integral of [`boundary_layer_density`] over `[0, inf)`:
/// the quarter factor of the boundary coefficient,
/// `(1/4) [(n-1)/(4 pi mu t)^{(n-1)/2} + 1/(4 pi (2mu+lambda) t)^{(n-1)/2}]`.
pub fn boundary_layer_integral(n: usize, params: &LameParameters, t: f64) -> f64 {
    assert!(t > 0.0);
    0.25 * boundary_density_factor(n, params) / t.powf((n as f64 - 1.0) / 2.0)
}

/// Depth integral of the image density over `[eps, inf)`; decays like a
/// Gaussian tail in `eps^2 / t`, which justifies truncating the boundary
/// layer at any fixed positive depth.
pub fn image_tail_bound(n: usize, params: &LameParameters, t: f64, eps: f64) -> f64 {
    assert!(t > 0.0 && eps > 0.0);
    let nf = n as f64;
    let pi = std::f64::consts::PI;
    let branch = |c: f64, weight: f64| -> f64 {
        // int_eps^inf (4 pi c t)^{-n/2} exp(-(2x)^2/(4ct)) dx
        //   = (4 pi c t)^{-n/2} * (sqrt(pi c t)/2) * erfc(eps / sqrt(c t))
        weight / (4.0 * pi * c * t).powf(nf / 2.0)
            * ((pi * c * t).sqrt() / 2.0)
            * erfc(eps / (c * t).sqrt())
    };
    branch(params.mu(), nf - 1.0) + branch(params.pressure_modulus(), 1.0)
}

/// Fills the two-coefficient prediction for a domain of volume `vol` with
/// boundary area `boundary_vol`.
pub fn predict_coefficients(
    n: usize,
    params: &LameParameters,
    vol: f64,
    boundary_vol: f64,
) -> CoefficientPrediction {
    assert!(vol > 0.0 && boundary_vol >= 0.0);
    CoefficientPrediction {
        a0: volume_density_factor(n, params) * vol,
        a1: 0.25 * boundary_density_factor(n, params) * boundary_vol,
        n,
        vol,
        boundary_vol,
        params: *params,
    }
}

/// Leading constant of the eigenvalue counting function:
/// `N(eta) ~ weyl_coefficient * eta^{n/2}`.
pub fn weyl_coefficient(n: usize, params: &LameParameters, vol: f64) -> f64 {
    assert!(vol > 0.0);
    vol / gamma(n as f64 / 2.0 + 1.0) * volume_density_factor(n, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn params(mu: f64, lambda: f64) -> LameParameters {
        LameParameters::new(mu, lambda).unwrap()
    }

    /// Numeric contour quadrature of `(1/2 pi i) oint e^{-t tau} Tr q_{-2} dtau`
    /// on a rectangle enclosing both poles: composite Simpson with 4096
    /// panels per edge, counterclockwise.
    pub(crate) fn contour_oracle(n: usize, prm: &LameParameters, q: f64, t: f64) -> f64 {
        let right = 3.0 * prm.pressure_modulus() * q + 1.0;
        let height = 10.0 * (1.0 + q.abs());
        let corners = [
            Complex64::new(-1.0, -height),
            Complex64::new(right, -height),
            Complex64::new(right, height),
            Complex64::new(-1.0, height),
        ];
        let panels = 4096usize;
        let f = |z: Complex64| {
            let tr = crate::symbol::principal_resolvent_trace_from_q(n, prm, q, z).unwrap();
            (-z * t).exp() * tr
        };
        let mut acc = Complex64::from(0.0);
        for e in 0..4 {
            let a = corners[e];
            let b = corners[(e + 1) % 4];
            let dz = (b - a) / Complex64::from(panels as f64);
            for k in 0..panels {
                let z0 = a + dz * Complex64::from(k as f64);
                let z1 = z0 + dz * Complex64::from(0.5);
                let z2 = z0 + dz;
                acc += (f(z0) + f(z1) * Complex64::from(4.0) + f(z2)) * dz / Complex64::from(6.0);
            }
        }
        (acc / Complex64::new(0.0, 2.0 * std::f64::consts::PI)).re
    }

    /// Composite Simpson on `[a, b]`.
    pub(crate) fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
        let h = (b - a) / panels as f64;
        let mut acc = 0.0;
        for k in 0..panels {
            let x0 = a + k as f64 * h;
            acc += f(x0) + 4.0 * f(x0 + 0.5 * h) + f(x0 + h);
        }
        acc * h / 6.0
    }

    #[test]
    fn residue_symbol_at_zero_covector() {
        let prm = params(1.0, 1.0);
        assert_relative_eq!(residue_heat_symbol(3, &prm, 0.0, 0.5), 3.0, epsilon = 1e-15);
    }

    #[test]
    fn residue_symbol_closed_form_values() {
        let prm = params(1.0, 1.0);
        let want = (-1.0f64).exp() + (-3.0f64).exp();
        assert_relative_eq!(residue_heat_symbol(2, &prm, 1.0, 1.0), want, epsilon = 1e-12);
        assert_relative_eq!(want, 0.417666, epsilon = 1e-6);

        let prm = params(2.0, 0.0);
        let want = 2.0 * (-2.0f64).exp() + (-4.0f64).exp();
        assert_relative_eq!(residue_heat_symbol(3, &prm, 2.0, 0.5), want, epsilon = 1e-12);
        assert_relative_eq!(want, 0.2889862, epsilon = 1e-7);
    }

    #[test]
    fn residue_symbol_matches_contour_quadrature() {
        let prm = params(1.0, 1.0);
        for &(n, q, t) in &[(2usize, 1.0, 1.0), (3, 2.0, 0.5), (2, 0.5, 0.2)] {
            let closed = residue_heat_symbol(n, &prm, q, t);
            let numeric = contour_oracle(n, &prm, q, t);
            assert_relative_eq!(closed, numeric, max_relative = 1e-8);
        }
    }

    #[test]
    fn interior_density_values() {
        let prm = params(1.0, 1.0);
        let v = interior_density(2, &prm, 0.01);
        let pi = std::f64::consts::PI;
        assert_relative_eq!(v, 1.0 / (0.04 * pi) + 1.0 / (0.12 * pi), epsilon = 1e-12);
        assert_relative_eq!(v, 10.610330, epsilon = 1e-5);
    }

    #[test]
    fn interior_density_laplacian_limit() {
        // mu + lambda = 0: n copies of the scalar heat density.
        let prm = params(1.3, -1.3);
        for &n in &[1usize, 2, 3] {
            let t = 0.05;
            let scalar = 1.0 / (4.0 * std::f64::consts::PI * 1.3 * t).powf(n as f64 / 2.0);
            assert_relative_eq!(interior_density(n, &prm, t), n as f64 * scalar, epsilon = 1e-12);
        }
    }

    #[test]
    fn interior_density_one_dimensional() {
        let prm = params(1.0, 0.0);
        // n = 1 kills the shear branch; only the pressure branch remains.
        let t = 0.2;
        assert_relative_eq!(
            interior_density(1, &prm, t),
            1.0 / (8.0 * std::f64::consts::PI * t).sqrt(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn boundary_layer_at_zero_depth_equals_interior() {
        let prm = params(1.0, 1.0);
        assert_relative_eq!(
            boundary_layer_density(2, &prm, 0.01, 0.0),
            interior_density(2, &prm, 0.01),
            epsilon = 1e-12
        );
    }

    #[test]
    fn boundary_layer_depth_value_and_fourier_oracle() {
        let prm = params(1.0, 1.0);
        let v = boundary_layer_density(2, &prm, 0.01, 0.5);
        let pi = std::f64::consts::PI;
        let direct = 1.0 / (0.04 * pi) * (-25.0f64).exp() + 1.0 / (0.12 * pi) * (-25.0f64 / 3.0).exp();
        assert_relative_eq!(v, direct, epsilon = 1e-15);
        assert!((v - 6.4e-4).abs() < 5e-6);

        // 1-D Fourier quadrature of the depth factor for each branch:
        // (1/2pi) int e^{2 i xn k} e^{-t c k^2} dk = (4 pi c t)^{-1/2} e^{-(2xn)^2/(4ct)}
        let fourier = |c: f64, t: f64, xn: f64| -> f64 {
            let limit = 12.0 / (c * t).sqrt();
            let nodes = 200_000usize;
            let dk = 2.0 * limit / nodes as f64;
            let mut acc = 0.0;
            for i in 0..=nodes {
                let k = -limit + i as f64 * dk;
                let w = if i == 0 || i == nodes { 0.5 } else { 1.0 };
                acc += w * (2.0 * xn * k).cos() * (-t * c * k * k).exp();
            }
            acc * dk / (2.0 * pi)
        };
        let t = 0.01;
        let xn = 0.5;
        let via_fourier = {
            // n = 2: one transverse Gaussian factor per branch
            let b1 = fourier(1.0, t, xn) * (4.0 * pi * 1.0 * t).sqrt().recip();
            let b2 = fourier(3.0, t, xn) * (4.0 * pi * 3.0 * t).sqrt().recip();
            b1 + b2
        };
        assert_relative_eq!(v, via_fourier, max_relative = 1e-8);
    }

    #[test]
    fn boundary_layer_integral_quarter_factor() {
        // Quadrature of the depth profile reproduces the closed-form quarter.
        let prm = params(1.0, 1.0);
        for &n in &[2usize, 3] {
            for &t in &[1e-3, 1e-2] {
                let upper = 14.0 * (prm.pressure_modulus() * t).sqrt();
                let acc = simpson(|x| boundary_layer_density(n, &prm, t, x), 0.0, upper, 40_000);
                let closed = boundary_layer_integral(n, &prm, t);
                assert!(
                    (acc - closed).abs() < 1e-10 * (1.0 + closed.abs()),
                    "n {n} t {t}: {acc} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn tail_bound_examples() {
        let prm = params(1.0, 1.0);
        assert!(image_tail_bound(2, &prm, 0.01, 10.0) < 1e-300);
        // Monotone decreasing in eps.
        let mut prev = f64::INFINITY;
        for &eps in &[0.05, 0.1, 0.2, 0.4, 0.8] {
            let v = image_tail_bound(2, &prm, 0.01, eps);
            assert!(v < prev);
            prev = v;
        }
        // Matches quadrature of the density from eps upward.
        let eps = 0.3;
        let t = 0.01;
        let upper = eps + 14.0 * (prm.pressure_modulus() * t).sqrt();
        let acc = simpson(|x| boundary_layer_density(2, &prm, t, x), eps, upper, 40_000);
        assert!((acc - image_tail_bound(2, &prm, t, eps)).abs() < 1e-12);
    }

    #[test]
    fn predictions_for_reference_domains() {
        let prm = params(1.0, 1.0);
        let pi = std::f64::consts::PI;
        let square = predict_coefficients(2, &prm, 1.0, 4.0);
        assert_relative_eq!(square.a0, 1.0 / (4.0 * pi) + 1.0 / (12.0 * pi), epsilon = 1e-12);
        assert_relative_eq!(square.a0, 0.1061033, epsilon = 1e-7);
        assert_relative_eq!(square.a1, 0.4449623, epsilon = 1e-7);

        let disk = predict_coefficients(2, &prm, pi, 2.0 * pi);
        assert_relative_eq!(disk.a0, 1.0 / 3.0, epsilon = 1e-12);
        // 0.25 * (1/sqrt(4 pi) + 1/sqrt(12 pi)) * 2 pi
        assert_relative_eq!(disk.a1, 0.6989451, epsilon = 1e-6);
        assert_relative_eq!(
            disk.a1,
            0.25 * ((4.0 * pi).sqrt().recip() + (12.0 * pi).sqrt().recip()) * 2.0 * pi,
            epsilon = 1e-14
        );

        // Laplacian limit: n copies of the scalar leading coefficient.
        let prm = params(0.8, -0.8);
        let v = 2.7;
        for &n in &[2usize, 3] {
            let p = predict_coefficients(n, &prm, v, 1.0);
            let scalar = v / (4.0 * pi * 0.8).powf(n as f64 / 2.0);
            assert_relative_eq!(p.a0, n as f64 * scalar, epsilon = 1e-12);
        }
    }

    #[test]
    fn prediction_linear_in_volumes() {
        let prm = params(1.0, 0.5);
        let p1 = predict_coefficients(2, &prm, 1.0, 1.0);
        let p2 = predict_coefficients(2, &prm, 3.5, 2.0);
        assert_eq!(p2.a0, 3.5 * p1.a0);
        assert_eq!(p2.a1, 2.0 * p1.a1);
    }

    #[test]
    fn weyl_coefficient_values() {
        let prm = params(1.0, 1.0);
        let pi = std::f64::consts::PI;
        assert_relative_eq!(
            weyl_coefficient(2, &prm, 1.0),
            1.0 / (4.0 * pi) + 1.0 / (12.0 * pi),
            epsilon = 1e-12
        );
        assert_relative_eq!(weyl_coefficient(2, &prm, pi), 1.0 / 3.0, epsilon = 1e-12);
        let prm = params(1.0, -1.0);
        for &n in &[2usize, 3] {
            let want = n as f64 * 2.0
                / ((4.0 * pi).powf(n as f64 / 2.0) * gamma(n as f64 / 2.0 + 1.0));
            assert_relative_eq!(weyl_coefficient(n, &prm, 2.0), want, epsilon = 1e-12);
        }
    }

    #[test]
    fn tauberian_consistency_of_weyl_constant() {
        // The Laplace transform of the leading counting measure
        // dN = C_W (n/2) eta^{n/2-1} d eta reproduces the interior density
        // times the volume. Quadrature after eta = u^2 keeps the n = 1
        // integrand smooth.
        let t = 1e-3_f64;
        let vol = 2.3;
        for &(n, mu, la) in &[(1usize, 1.0, 0.0), (2, 1.0, 1.0), (3, 2.0, 0.5)] {
            let prm = params(mu, la);
            let c_w = weyl_coefficient(n, &prm, vol);
            let upper = (80.0 / t).sqrt();
            let laplace = c_w
                * (n as f64 / 2.0)
                * 2.0
                * simpson(|u| u.powi(n as i32 - 1) * (-t * u * u).exp(), 0.0, upper, 200_000);
            let want = interior_density(n, &prm, t) * vol;
            assert_relative_eq!(laplace, want, max_relative = 1e-6);
        }
    }

    #[test]
    fn density_struct_carries_both_terms() {
        let prm = params(1.0, 1.0);
        let d = HeatDensity::at(2, &prm, 0.01, -1);
        assert_relative_eq!(d.interior, interior_density(2, &prm, 0.01), epsilon = 1e-15);
        assert_relative_eq!(d.boundary, boundary_layer_integral(2, &prm, 0.01), epsilon = 1e-15);
        assert_eq!(d.bc_sign, -1);
    }
}
