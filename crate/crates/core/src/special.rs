//! Special functions used by the solvers: Bessel functions of the first kind,
//! the gamma function, the complementary error function, and the upper
//! incomplete gamma function.
//!
//! Everything here is plain double-precision scalar code. Bessel values come
//! from three-term recurrences with the standard stability switch: upward
//! recurrence is stable while the order stays below the argument, downward
//! (Miller) recurrence with sum normalization is stable everywhere else.

/// J_0..J_{m_hi} at argument `z >= 0`.
///
/// Upward recurrence from J_0, J_1 when `z` clearly exceeds the highest
/// order, Miller downward recurrence otherwise.
pub fn bessel_j_sequence(m_hi: usize, z: f64) -> Vec<f64> {
    assert!(z >= 0.0, "bessel argument must be nonnegative");
    if z == 0.0 {
        let mut out = vec![0.0; m_hi + 1];
        out[0] = 1.0;
        return out;
    }
    if z > m_hi as f64 + 2.0 {
        bessel_upward(m_hi, z)
    } else {
        bessel_miller(m_hi, z)
    }
}

/// J_m(z) for a single order.
pub fn bessel_j(m: usize, z: f64) -> f64 {
    bessel_j_sequence(m, z)[m]
}

/// d/dz J_m(z), from J_{m-1} - (m/z) J_m (and -J_1 for m = 0).
pub fn bessel_j_prime(m: usize, z: f64) -> f64 {
    if z == 0.0 {
        return if m == 1 { 0.5 } else { 0.0 };
    }
    let seq = bessel_j_sequence(m + 1, z);
    if m == 0 {
        -seq[1]
    } else {
        seq[m - 1] - (m as f64 / z) * seq[m]
    }
}

fn bessel_upward(m_hi: usize, z: f64) -> Vec<f64> {
    // J_0 and J_1 seeded from the downward pass, which is accurate for any z.
    let seed = bessel_miller(1, z);
    let mut out = Vec::with_capacity(m_hi + 1);
    out.push(seed[0]);
    if m_hi >= 1 {
        out.push(seed[1]);
    }
    for m in 1..m_hi {
        let next = (2.0 * m as f64 / z) * out[m] - out[m - 1];
        out.push(next);
    }
    out
}

fn bessel_miller(m_hi: usize, z: f64) -> Vec<f64> {
    // Start well above both the target order and the turning point m ~ z.
    let start = (m_hi + 1).max(z.ceil() as usize) + 15 + (z.sqrt() as usize) * 2;
    let start = if start.is_multiple_of(2) { start } else { start + 1 };
    let mut jp = 0.0_f64; // J_{k+1} (unnormalized)
    let mut j = 1e-300_f64; // J_k
    let mut sum = 0.0_f64; // J_0 + 2 sum_{k even >= 2} J_k
    let mut out = vec![0.0; m_hi + 1];
    for k in (0..start).rev() {
        let jm = (2.0 * (k as f64 + 1.0) / z) * j - jp;
        jp = j;
        j = jm;
        if k % 2 == 0 && k > 0 {
            sum += 2.0 * j;
        }
        if k <= m_hi {
            out[k] = j;
        }
        // Rescale to avoid overflow of the unnormalized recurrence.
        if j.abs() > 1e250 {
            let s = 1e-250;
            jp *= s;
            j *= s;
            sum *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    sum += j; // adds J_0
    for v in out.iter_mut() {
        *v /= sum;
    }
    out
}

/// Gamma function by the Lanczos approximation (g = 7, 9 coefficients,
/// ~15 significant digits for positive arguments).
pub fn gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    #[allow(clippy::excessive_precision)] // published coefficients, kept verbatim
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // Reflection formula.
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut a = COEF[0];
        for (i, &c) in COEF.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        let t = x + G + 0.5;
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}

/// Complementary error function, series for small arguments and a Lentz
/// continued fraction for the tail; relative accuracy ~1e-15.
pub fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 2.0 {
        1.0 - erf_series(x)
    } else {
        // erfc(x) = exp(-x^2)/sqrt(pi) * CF, CF = 1/(x + 1/2/(x + 1/(x + 3/2/(x + ...))))
        let mut cf = 0.0;
        for k in (1..=60).rev() {
            cf = (k as f64 / 2.0) / (x + cf);
        }
        (-x * x).exp() / (std::f64::consts::PI.sqrt() * (x + cf))
    }
}

fn erf_series(x: f64) -> f64 {
    // erf(x) = 2/sqrt(pi) * sum (-1)^k x^{2k+1} / (k! (2k+1))
    let mut term = x;
    let mut sum = x;
    let x2 = x * x;
    for k in 1..200 {
        term *= -x2 / k as f64;
        let add = term / (2.0 * k as f64 + 1.0);
        sum += add;
        if add.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    2.0 / std::f64::consts::PI.sqrt() * sum
}

/// Upper incomplete gamma function Gamma(s, x) for s > 0, x >= 0.
pub fn gamma_upper(s: f64, x: f64) -> f64 {
    assert!(s > 0.0 && x >= 0.0);
    if x == 0.0 {
        return gamma(s);
    }
    if x < s + 1.0 {
        // Via the lower series: Gamma(s,x) = Gamma(s) - gamma_lower(s,x).
        let mut term = 1.0 / s;
        let mut sum = term;
        for k in 1..500 {
            term *= x / (s + k as f64);
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        gamma(s) - sum * x.powf(s) * (-x).exp()
    } else {
        // Continued fraction (Lentz).
        let mut b = x + 1.0 - s;
        let mut c = 1e300;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -(i as f64) * (i as f64 - s);
            b += 2.0;
            d = an * d + b;
            if d.abs() < 1e-300 {
                d = 1e-300;
            }
            c = b + an / c;
            if c.abs() < 1e-300 {
                c = 1e-300;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        x.powf(s) * (-x).exp() * h
    }
}
