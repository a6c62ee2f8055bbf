//! Log-gamma, the regularized incomplete gamma functions and chi-square quantiles.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Natural log of the Gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("ln_gamma", format!("x = {x} must be positive")));
    }
    Ok(ln_gamma_pos(x))
}

pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    if x < 0.5 {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return (PI / (PI * x).sin()).ln() - ln_gamma_pos(1.0 - x);
    }
    if x >= 10.0 {
        return stirling(x);
    }
    lanczos(x)
}

fn stirling(x: f64) -> f64 {
    // Bernoulli terms B_{2k} / (2k (2k-1) x^{2k-1})
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
    ];
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    let mut pow = inv;
    for c in C {
        corr += c * pow;
        pow *= inv2;
    }
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + corr
}

fn lanczos(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    let z = x - 1.0;
    let mut sum = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + sum.ln()
}

/// Regularized lower incomplete gamma `P(a, x)`.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        gamma_series(a, x)
    } else {
        1.0 - gamma_cf(a, x)
    }
}

/// Regularized upper incomplete gamma `Q(a, x) = 1 - P(a, x)`.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_series(a, x)
    } else {
        gamma_cf(a, x)
    }
}

fn prefactor(a: f64, x: f64) -> f64 {
    (a * x.ln() - x - ln_gamma_pos(a)).exp()
}

fn gamma_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..10_000 {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * 1e-17 {
            break;
        }
    }
    sum * prefactor(a, x)
}

fn gamma_cf(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    prefactor(a, x) * h
}

/// Quantile of the chi-square law with `dof` degrees of freedom.
pub fn chisq_quantile(p: f64, dof: u32) -> Result<f64> {
    check_chisq("chisq_quantile", p, dof)?;
    gamma_inverse(0.5 * dof as f64, p, false).map(|y| 2.0 * y)
}

/// Upper-tail quantile: the `x` with `P(chi2_dof > x) = q`.
///
/// Equivalent to `chisq_quantile(1 - q, dof)` but keeps full relative
/// accuracy when `q` is tiny.
pub fn chisq_upper_quantile(q: f64, dof: u32) -> Result<f64> {
    check_chisq("chisq_upper_quantile", q, dof)?;
    gamma_inverse(0.5 * dof as f64, q, true).map(|y| 2.0 * y)
}

fn check_chisq(func: &'static str, p: f64, dof: u32) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(func, format!("p = {p} not in (0, 1)")));
    }
    if dof < 1 {
        return Err(Error::domain(func, "dof must be at least 1"));
    }
    Ok(())
}

// Solves P(a, y) = target (or Q(a, y) = target when `upper`) by safeguarded
// Newton iteration on a bisection bracket.
fn gamma_inverse(a: f64, target: f64, upper: bool) -> Result<f64> {
    let resid = |y: f64| {
        if upper {
            target - gamma_q(a, y)
        } else {
            gamma_p(a, y) - target
        }
    };
    let density = |y: f64| ((a - 1.0) * y.ln() - y - ln_gamma_pos(a)).exp();

    let mut lo = 0.0;
    let mut hi = a.max(1.0);
    while resid(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NoConvergence {
                what: "chi-square bracket",
                iterations: 0,
            });
        }
    }

    // Wilson-Hilferty start, clamped into the bracket.
    let p_lower = if upper { 1.0 - target } else { target };
    let z = super::normal::normal_quantile_unchecked(p_lower.clamp(1e-300, 1.0 - 1e-16));
    let dof = 2.0 * a;
    let wh = dof * (1.0 - 2.0 / (9.0 * dof) + z * (2.0 / (9.0 * dof)).sqrt()).powi(3) / 2.0;
    let mut y = if wh > lo && wh < hi { wh } else { 0.5 * (lo + hi) };

    for _ in 0..300 {
        let r = resid(y);
        if r == 0.0 {
            return Ok(y);
        }
        if r < 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        let d = density(y);
        let mut next = y - r / d;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - y).abs() <= 1e-15 * y.abs() || hi - lo <= 1e-15 * hi {
            return Ok(next);
        }
        y = next;
    }
    Err(Error::NoConvergence {
        what: "chi-square quantile",
        iterations: 300,
    })
}
