//! Dirichlet eigenvalues of the disk through Bessel boundary determinants.
//!
//! Displacements split into a pressure potential with wavenumber
//! `alpha = sqrt(tau/(2mu+lambda))` and a shear potential with
//! `beta = sqrt(tau/mu)`. Imposing zero displacement at the rim couples the
//! two potentials per angular order `m` into a 2x2 determinant
//!
//! `E_m(tau) = m^2 J_m(alpha R) J_m(beta R)
//!             - (alpha R)(beta R) J'_m(alpha R) J'_m(beta R)`,
//!
//! whose positive roots are the eigenvalues of that order (multiplicity two
//! for `m >= 1`). The order `m = 0` decouples into a torsional branch
//! `J_1(beta R) = 0` and a radial branch `J_1(alpha R) = 0`.

use super::{BoundaryCondition, Domain, SolveMethod, Spectrum, SpectrumEntry};
use crate::error::Error;
use crate::geometry::LameParameters;
use crate::special::bessel_j_sequence;
use crate::Result;

/// Relative bisection tolerance on the root abscissa.
const ROOT_REL_TOL: f64 = 1e-12;
/// Scan step in the shear-branch variable `beta R`; a quarter of the densest
/// root spacing would be pi/4, this leaves extra margin for near-degenerate
/// pairs.
const SCAN_STEP: f64 = std::f64::consts::PI / 128.0;

fn j_and_prime(m: usize, z: f64) -> (f64, f64) {
    if z == 0.0 {
        let j = if m == 0 { 1.0 } else { 0.0 };
        let jp = if m == 1 { 0.5 } else { 0.0 };
        return (j, jp);
    }
    let seq = bessel_j_sequence(m + 1, z);
    let j = seq[m];
    let jp = if m == 0 { -seq[1] } else { seq[m - 1] - (m as f64 / z) * seq[m] };
    (j, jp)
}

/// Boundary determinant of angular order `m` as a function of `zb = beta R`.
fn determinant(m: usize, zb: f64, speed_ratio: f64) -> f64 {
    let za = zb * speed_ratio;
    let (ja, jap) = j_and_prime(m, za);
    let (jb, jbp) = j_and_prime(m, zb);
    (m as f64).powi(2) * ja * jb - za * zb * jap * jbp
}

/// Bisects a bracketed sign change to relative tolerance.
fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut flo = f(lo);
    if flo == 0.0 {
        return Ok(lo);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo) < ROOT_REL_TOL * mid {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Err(Error::RootBracketFailure(format!(
        "bisection did not reach relative tolerance {ROOT_REL_TOL} on [{lo}, {hi}]"
    )))
}

/// All roots of `f` on `(z_lo, z_hi]` found by uniform sign-change scanning.
fn scan_roots<F: Fn(f64) -> f64>(f: F, z_lo: f64, z_hi: f64, step: f64) -> Result<Vec<f64>> {
    let mut roots = Vec::new();
    let mut z_prev = z_lo;
    let mut f_prev = f(z_prev);
    let nsteps = ((z_hi - z_lo) / step).ceil() as usize;
    for k in 1..=nsteps {
        let z = (z_lo + k as f64 * step).min(z_hi);
        let fz = f(z);
        if f_prev == 0.0 {
            roots.push(z_prev);
        } else if fz != 0.0 && (fz > 0.0) != (f_prev > 0.0) {
            roots.push(bisect(&f, z_prev, z)?);
        }
        z_prev = z;
        f_prev = fz;
    }
    Ok(roots)
}

/// Dirichlet spectrum of the disk with angular orders up to `m_max` and a
/// search window sized for about `k_max` radial roots per branch.
///
/// The returned sequence is complete below the window
/// `tau_w = mu/R^2 * min((m_max+1)^2, ((k_max+1) pi)^2)`: branches above
/// `m_max` start strictly above it.
pub fn disk_spectrum(
    radius: f64,
    params: &LameParameters,
    m_max: usize,
    k_max: usize,
) -> Result<Spectrum> {
    let domain = Domain::Disk { radius };
    domain.validate()?;
    if m_max < 1 || k_max < 1 {
        return Err(Error::InvalidParameter("m_max and k_max must be at least 1".into()));
    }
    let mu = params.mu();
    let pm = params.pressure_modulus();
    let speed_ratio = (mu / pm).sqrt(); // alpha R = (beta R) * speed_ratio, <= 1

    // Window in the shear variable zb = R sqrt(tau/mu).
    let zb_max =
        ((m_max + 1) as f64).min((k_max as f64 + 1.0) * std::f64::consts::PI);
    let tau_window = mu * (zb_max / radius).powi(2);
    let tau_of_zb = |zb: f64| mu * (zb / radius).powi(2);

    let mut values: Vec<(f64, u32)> = Vec::new();

    // m = 0 decouples: torsional J_1(beta R) = 0 and radial J_1(alpha R) = 0.
    let j1 = |z: f64| j_and_prime(1, z).0;
    for z in scan_roots(j1, 0.5, zb_max, SCAN_STEP)? {
        values.push((tau_of_zb(z), 1));
    }
    for z in scan_roots(j1, 0.5, zb_max * speed_ratio, SCAN_STEP)? {
        values.push((pm * (z / radius).powi(2), 1));
    }

    // Coupled orders m >= 1, multiplicity two.
    for m in 1..=m_max {
        let f = |zb: f64| determinant(m, zb, speed_ratio);
        // No eigenvalue of order m sits below mu (j_{m-1,1}/R)^2 >= mu (m-1)^2/R^2.
        let z_lo = ((m - 1) as f64).max(0.5);
        if z_lo >= zb_max {
            continue;
        }
        for z in scan_roots(f, z_lo, zb_max, SCAN_STEP)? {
            values.push((tau_of_zb(z), 2));
        }
    }

    values.retain(|(v, _)| *v <= tau_window);
    values.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let entries: Vec<SpectrumEntry> =
        values.into_iter().map(|(value, multiplicity)| SpectrumEntry { value, multiplicity }).collect();
    if entries.is_empty() {
        return Err(Error::RootBracketFailure(
            "no determinant roots found inside the search window".into(),
        ));
    }
    Spectrum::new(entries, BoundaryCondition::Dirichlet, *params, domain, SolveMethod::BesselRoots)
}
