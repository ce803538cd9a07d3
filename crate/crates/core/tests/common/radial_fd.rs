//! Polar-grid finite-difference oracle for the Dirichlet disk.
//!
//! The angular dependence is separated exactly (`u_r = f(r) cos(m theta)`,
//! `u_theta = g(r) sin(m theta)`), and the radial strain energy
//!
//! `E_m = int { lambda (f' + (f + m g)/r)^2 + 2 mu [f'^2 + ((f + m g)/r)^2]
//!              + mu (g' - (g + m f)/r)^2 } r dr`
//!
//! is discretized on a uniform radial grid by midpoint quadrature per cell
//! (derivatives by cell differences, values by cell averages). The mode
//! `m = 0` decouples into a radial branch (`g = 0`, energy
//! `lambda (f' + f/r)^2 + 2 mu (f'^2 + (f/r)^2)`) and a torsional branch
//! (`f = 0`, energy `mu (g' - g/r)^2`). Eigenvalues of order `m >= 1` carry
//! multiplicity two.
//!
//! This route shares nothing with the Bessel-determinant solver beyond the
//! angular separation forced by symmetry.

use nalgebra::DMatrix;
use nlspec_core::geometry::LameParameters;

/// Nodal value/derivative functionals of one field at a cell midpoint.
/// Entries are `(dof, value_coeff, derivative_coeff)` with eliminated
/// boundary nodes dropped.
fn cell_stencil(cell: usize, nun: usize, h: f64, base: usize) -> Vec<(usize, f64, f64)> {
    let mut out = Vec::with_capacity(2);
    for (node, s) in [(cell, -1.0), (cell + 1, 1.0)] {
        if node >= 1 && node <= nun {
            out.push((base + node - 1, 0.5, s / h));
        }
    }
    out
}

/// Same, but node 0 maps to a shared degree of freedom with the given sign.
/// Angular order one admits nonzero center values constrained by
/// `f(0) + g(0) = 0` (translations have `f = 1`, `g = -1`), so the center is
/// one shared unknown instead of two eliminated ones.
fn cell_stencil_shared_center(
    cell: usize,
    nun: usize,
    h: f64,
    base: usize,
    center_dof: usize,
    center_sign: f64,
) -> Vec<(usize, f64, f64)> {
    let mut out = Vec::with_capacity(2);
    for (node, s) in [(cell, -1.0), (cell + 1, 1.0)] {
        if node == 0 {
            out.push((center_dof, 0.5 * center_sign, s / h * center_sign));
        } else if node <= nun {
            out.push((base + node - 1, 0.5, s / h));
        }
    }
    out
}

/// Generalized eigenvalues of `K x = tau M x`, ascending, first `take`.
fn generalized_eigenvalues(k: DMatrix<f64>, m: DMatrix<f64>, take: usize) -> Vec<f64> {
    let chol = m.cholesky().expect("radial mass matrix is positive definite");
    let l = chol.l();
    let y = l.solve_lower_triangular(&k).unwrap();
    let z = l.solve_lower_triangular(&y.transpose()).unwrap();
    let sym = (&z + z.transpose()) * 0.5;
    let mut evs: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    evs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    evs.truncate(take);
    evs
}

/// Accumulates `w * (sum_quadratic_terms)` into `K` and `w * mass` into `M`
/// from sparse linear functionals.
fn rank_one_add(mat: &mut DMatrix<f64>, w: f64, func: &[(usize, f64)]) {
    for &(p, cp) in func {
        for &(q, cq) in func {
            mat[(p, q)] += w * cp * cq;
        }
    }
}

/// Sparse linear-functional algebra on (dof, coeff) lists.
fn combine(parts: &[(&[(usize, f64, f64)], f64, f64)]) -> Vec<(usize, f64)> {
    // parts: (stencil, value_weight, derivative_weight)
    let mut out: Vec<(usize, f64)> = Vec::new();
    for (stencil, vw, dw) in parts {
        for &(d, v, der) in *stencil {
            let c = vw * v + dw * der;
            match out.iter_mut().find(|(dd, _)| *dd == d) {
                Some((_, cc)) => *cc += c,
                None => out.push((d, c)),
            }
        }
    }
    out
}

fn coupled_mode(radius: f64, params: &LameParameters, m: usize, n_r: usize, take: usize) -> Vec<f64> {
    let h = radius / n_r as f64;
    let (mu, la) = (params.mu(), params.lambda());
    let nun = n_r - 1;
    let shared_center = m == 1;
    let dim = if shared_center { 2 * nun + 1 } else { 2 * nun };
    let center_dof = 2 * nun;
    let mf = m as f64;
    let mut k = DMatrix::zeros(dim, dim);
    let mut mm = DMatrix::zeros(dim, dim);
    for cell in 0..n_r {
        let rm = (cell as f64 + 0.5) * h;
        let w = h * rm;
        let (f, g) = if shared_center {
            (
                cell_stencil_shared_center(cell, nun, h, 0, center_dof, 1.0),
                cell_stencil_shared_center(cell, nun, h, nun, center_dof, -1.0),
            )
        } else {
            (cell_stencil(cell, nun, h, 0), cell_stencil(cell, nun, h, nun))
        };
        let e1 = combine(&[(&f, 0.0, 1.0)]); // f'
        let e2 = combine(&[(&f, 1.0 / rm, 0.0), (&g, mf / rm, 0.0)]); // (f + m g)/r
        let e3 = combine(&[(&g, -1.0 / rm, 1.0), (&f, -mf / rm, 0.0)]); // g' - (g + m f)/r
        let div = combine(&[(&f, 1.0 / rm, 1.0), (&g, mf / rm, 0.0)]); // e1 + e2
        rank_one_add(&mut k, w * la, &div);
        rank_one_add(&mut k, w * 2.0 * mu, &e1);
        rank_one_add(&mut k, w * 2.0 * mu, &e2);
        rank_one_add(&mut k, w * mu, &e3);
        rank_one_add(&mut mm, w, &combine(&[(&f, 1.0, 0.0)]));
        rank_one_add(&mut mm, w, &combine(&[(&g, 1.0, 0.0)]));
    }
    generalized_eigenvalues(k, mm, take)
}

fn radial_mode_zero(radius: f64, params: &LameParameters, n_r: usize, take: usize) -> Vec<f64> {
    let h = radius / n_r as f64;
    let (mu, la) = (params.mu(), params.lambda());
    let nun = n_r - 1;
    let mut k = DMatrix::zeros(nun, nun);
    let mut mm = DMatrix::zeros(nun, nun);
    for cell in 0..n_r {
        let rm = (cell as f64 + 0.5) * h;
        let w = h * rm;
        let f = cell_stencil(cell, nun, h, 0);
        let e1 = combine(&[(&f, 0.0, 1.0)]);
        let e2 = combine(&[(&f, 1.0 / rm, 0.0)]);
        let div = combine(&[(&f, 1.0 / rm, 1.0)]);
        rank_one_add(&mut k, w * la, &div);
        rank_one_add(&mut k, w * 2.0 * mu, &e1);
        rank_one_add(&mut k, w * 2.0 * mu, &e2);
        rank_one_add(&mut mm, w, &combine(&[(&f, 1.0, 0.0)]));
    }
    generalized_eigenvalues(k, mm, take)
}

fn torsional_mode_zero(radius: f64, params: &LameParameters, n_r: usize, take: usize) -> Vec<f64> {
    let h = radius / n_r as f64;
    let mu = params.mu();
    let nun = n_r - 1;
    let mut k = DMatrix::zeros(nun, nun);
    let mut mm = DMatrix::zeros(nun, nun);
    for cell in 0..n_r {
        let rm = (cell as f64 + 0.5) * h;
        let w = h * rm;
        let g = cell_stencil(cell, nun, h, 0);
        let e3 = combine(&[(&g, -1.0 / rm, 1.0)]);
        rank_one_add(&mut k, w * mu, &e3);
        rank_one_add(&mut mm, w, &combine(&[(&g, 1.0, 0.0)]));
    }
    generalized_eigenvalues(k, mm, take)
}

/// Lowest `count` Dirichlet disk eigenvalues (with multiplicity, ascending)
/// from the radial-grid oracle over angular modes `0..=m_modes`.
pub fn disk_oracle_eigenvalues(
    radius: f64,
    params: &LameParameters,
    m_modes: usize,
    n_r: usize,
    count: usize,
) -> Vec<f64> {
    let per_mode = count.max(4);
    let mut all: Vec<f64> = Vec::new();
    all.extend(radial_mode_zero(radius, params, n_r, per_mode));
    all.extend(torsional_mode_zero(radius, params, n_r, per_mode));
    for m in 1..=m_modes {
        for v in coupled_mode(radius, params, m, n_r, per_mode) {
            all.push(v);
            all.push(v); // multiplicity two
        }
    }
    all.sort_by(|a, b| a.partial_cmp(b).unwrap());
    all.truncate(count);
    all
}
