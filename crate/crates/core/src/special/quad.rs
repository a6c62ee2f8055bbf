//! Adaptive Gauss-Kronrod (7/15) quadrature.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kron * half,
        error: ((kron - gauss) * half).abs(),
    }
}

/// Integrates `f` over a finite interval until the estimated error is below
/// `max(abs_tol, rel_tol * |I|)`.
pub(crate) fn integrate_finite(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<f64> {
    if lo == hi {
        return Ok(0.0);
    }
    let mut segments = vec![kronrod(&f, lo, hi)];
    loop {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let err: f64 = segments.iter().map(|s| s.error).sum();
        if !total.is_finite() {
            return Err(Error::NoConvergence {
                what: "quadrature (non-finite integrand)",
                iterations: segments.len(),
            });
        }
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        if segments.len() >= MAX_INTERVALS {
            return Err(Error::NoConvergence {
                what: "adaptive quadrature",
                iterations: segments.len(),
            });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("non-empty");
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            return Err(Error::NoConvergence {
                what: "adaptive quadrature (interval exhausted)",
                iterations: segments.len(),
            });
        }
        segments.push(kronrod(&f, s.a, mid));
        segments.push(kronrod(&f, mid, s.b));
    }
}

/// Integral of `f` over `[lo, hi]` to relative tolerance `tol`.
///
/// Either limit may be infinite; infinite tails are mapped onto finite
/// intervals by `x = 1/t`.
pub fn integrate(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    integrate_dyn(&f, lo, hi, tol)
}

fn integrate_dyn(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if lo.is_nan() || hi.is_nan() {
        return Err(Error::domain("integrate", "NaN limit"));
    }
    if lo > hi {
        return integrate_dyn(f, hi, lo, tol).map(|v| -v);
    }
    let abs_tol = 1e-300;
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => integrate_finite(f, lo, hi, tol, abs_tol),
        (true, false) => {
            if lo > 0.0 {
                upper_tail(f, lo, tol, abs_tol)
            } else {
                let head = integrate_finite(f, lo, 1.0, tol, abs_tol)?;
                Ok(head + upper_tail(f, 1.0, tol, abs_tol)?)
            }
        }
        (false, true) => integrate_dyn(&|x| f(-x), -hi, f64::INFINITY, tol),
        (false, false) => {
            let left = integrate_dyn(&|x| f(-x), 0.0, f64::INFINITY, tol)?;
            Ok(left + integrate_dyn(f, 0.0, f64::INFINITY, tol)?)
        }
    }
}

// int_lo^inf f(x) dx = int_0^{1/lo} f(1/t) / t^2 dt for lo > 0
fn upper_tail(f: &dyn Fn(f64) -> f64, lo: f64, tol: f64, abs_tol: f64) -> Result<f64> {
    integrate_finite(
        |t| {
            if t == 0.0 {
                0.0
            } else {
                f(1.0 / t) / (t * t)
            }
        },
        0.0,
        1.0 / lo,
        tol,
        abs_tol,
    )
}
