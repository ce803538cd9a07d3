//! Oracles shared by the integration and acceptance tests. Everything here
//! is deliberately independent of the production code paths it checks:
//! quadrature instead of closed forms, a radial grid discretization instead
//! of Bessel determinants.
#![allow(dead_code)]

pub mod radial_fd;

use nalgebra::DMatrix;
use nlspec_core::geometry::LameParameters;
use nlspec_core::symbol::principal_resolvent_trace_from_q;
use num_complex::Complex64;

/// Composite Simpson on `[a, b]`.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for k in 0..panels {
        let x0 = a + k as f64 * h;
        acc += f(x0) + 4.0 * f(x0 + 0.5 * h) + f(x0 + h);
    }
    acc * h / 6.0
}

/// Contour quadrature of `(1/2 pi i) oint e^{-t tau} Tr q_{-2} dtau` on a
/// rectangle with corners `-1 +/- iH` and `3(2mu+lambda)q + 1 +/- iH`,
/// `H = 10(1+|q|)`, composite Simpson with 4096 panels per edge,
/// counterclockwise.
pub fn contour_heat_oracle(n: usize, prm: &LameParameters, q: f64, t: f64) -> f64 {
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
        let tr = principal_resolvent_trace_from_q(n, prm, q, z).unwrap();
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

/// Gauss-Hermite nodes and weights for weight `exp(-x^2)` by the
/// Golub-Welsch eigen decomposition of the Jacobi matrix.
pub fn gauss_hermite(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut jac = DMatrix::zeros(m, m);
    for k in 1..m {
        let b = (k as f64 / 2.0).sqrt();
        jac[(k - 1, k)] = b;
        jac[(k, k - 1)] = b;
    }
    let eig = nalgebra::SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let node = eig.eigenvalues[i];
            let w = std::f64::consts::PI.sqrt() * eig.eigenvectors[(0, i)].powi(2);
            (node, w)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    pairs.into_iter().unzip()
}

/// Tensorized Gauss-Hermite quadrature of `f` over `R^n` with the Gaussian
/// scale `s` (nodes at `s * x_i`, modified weights `w_i e^{x_i^2} * s`).
pub fn gauss_hermite_integrate_nd(n: usize, s: f64, m: usize, f: impl Fn(&[f64]) -> f64) -> f64 {
    let (nodes, weights) = gauss_hermite(m);
    let wmod: Vec<f64> = nodes
        .iter()
        .zip(&weights)
        .map(|(x, w)| w * (x * x).exp() * s)
        .collect();
    let mut idx = vec![0usize; n];
    let mut acc = 0.0;
    loop {
        let point: Vec<f64> = idx.iter().map(|&i| s * nodes[i]).collect();
        let wprod: f64 = idx.iter().map(|&i| wmod[i]).product();
        acc += wprod * f(&point);
        // odometer increment
        let mut d = 0;
        loop {
            idx[d] += 1;
            if idx[d] < m {
                break;
            }
            idx[d] = 0;
            d += 1;
            if d == n {
                return acc;
            }
        }
    }
}

/// `sum_{k >= 1} exp(-a k^2)`, Poisson-accelerated for small `a`.
pub fn theta_sum(a: f64) -> f64 {
    assert!(a > 0.0);
    if a >= 1.0 {
        let mut acc = 0.0;
        for k in 1..200 {
            let term = (-a * (k * k) as f64).exp();
            acc += term;
            if term < 1e-300 {
                break;
            }
        }
        acc
    } else {
        let pi = std::f64::consts::PI;
        let mut dual = 0.0;
        for k in 1..200 {
            let term = (-pi * pi * (k * k) as f64 / a).exp();
            dual += term;
            if term < 1e-300 {
                break;
            }
        }
        ((pi / a).sqrt() * (1.0 + 2.0 * dual) - 1.0) / 2.0
    }
}
