//! Standard normal distribution function and its inverse.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Complementary error function.
///
/// Positive-term series for erf below 1.5, the even continued fraction of
/// erfc above. Relative accuracy is a few ulps on the whole line.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 1.5 {
        1.0 - erf_series(x)
    } else if x < 27.3 {
        erfc_cf(x)
    } else {
        0.0
    }
}

pub fn erf(x: f64) -> f64 {
    if x.abs() < 1.5 {
        erf_series(x)
    } else {
        1.0 - erfc(x)
    }
}

// erf(x) = 2/sqrt(pi) e^{-x^2} sum_n (2x^2)^n x / (1*3*...*(2n+1))
fn erf_series(x: f64) -> f64 {
    let x2 = 2.0 * x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= x2 / (2.0 * n + 1.0);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    FRAC_2_SQRT_PI * (-x * x).exp() * sum
}

// erfc(x) = 2x/sqrt(pi) e^{-x^2} / (2x^2+1 - 1*2/(2x^2+5 - 3*4/(2x^2+9 - ...))), modified Lentz.
fn erfc_cf(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let x2 = x * x;
    let mut f = 2.0 * x2 + 1.0;
    let mut c = f;
    let mut d = 0.0;
    for n in 1..500 {
        let n = n as f64;
        let a = -(2.0 * n - 1.0) * (2.0 * n);
        let b = 2.0 * x2 + 4.0 * n + 1.0;
        d = b + a * d;
        if d == 0.0 {
            d = TINY;
        }
        d = 1.0 / d;
        c = b + a / c;
        if c == 0.0 {
            c = TINY;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    FRAC_2_SQRT_PI * x * (-x2).exp() / f
}

/// Standard normal distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}

/// Upper tail `1 - normal_cdf(x)`, without cancellation for large `x`.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * erfc(x * FRAC_1_SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / SQRT_2PI
}

/// Inverse of [`normal_cdf`] on the open unit interval.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(
            "normal_quantile",
            format!("p = {p} not in (0, 1)"),
        ));
    }
    Ok(normal_quantile_unchecked(p))
}

pub(crate) fn normal_quantile_unchecked(p: f64) -> f64 {
    if p == 0.5 {
        0.0
    } else if p > 0.5 {
        // 1 - p is exact for p in [0.5, 1).
        -lower_quantile(1.0 - p)
    } else {
        lower_quantile(p)
    }
}

// Rational starting point (Acklam) refined by Halley steps against the
// accurate lower tail. Valid for p in (0, 0.5].
fn lower_quantile(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.024_25;

    let mut x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    };
    for _ in 0..2 {
        let e = normal_cdf(x) - p;
        let u = e * SQRT_2PI * (0.5 * x * x).exp();
        let step = u / (1.0 + 0.5 * x * u);
        x -= step;
        if step.abs() <= 1e-16 * x.abs() {
            break;
        }
    }
    x
}
