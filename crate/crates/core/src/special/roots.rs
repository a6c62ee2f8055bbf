//! Bracketing root finder.

use crate::error::{Error, Result};

pub const MAX_ITERATIONS: usize = 200;

/// An interval `[lo, hi]` on which a function is known to change sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket {
    lo: f64,
    hi: f64,
    f_lo: f64,
    f_hi: f64,
}

impl RootBracket {
    /// Evaluates `f` at both ends and checks the sign change.
    pub fn new(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<Self> {
        Self::from_values(lo, hi, f(lo), f(hi))
    }

    pub fn from_values(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Self> {
        let sign_change = (f_lo <= 0.0 && f_hi >= 0.0) || (f_lo >= 0.0 && f_hi <= 0.0);
        if !(lo < hi) || !sign_change || f_lo.is_nan() || f_hi.is_nan() {
            return Err(Error::Bracket { lo, hi, f_lo, f_hi });
        }
        Ok(Self { lo, hi, f_lo, f_hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }
}

/// Brent's method. Stops once the bracket is narrower than
/// `tol + 4 eps |x|`, so `tol = 0` asks for full machine precision.
/// The returned root always lies inside the initial bracket.
pub fn find_root(f: impl Fn(f64) -> f64, bracket: RootBracket, tol: f64) -> Result<f64> {
    let RootBracket {
        lo: mut a,
        hi: mut b,
        f_lo: mut fa,
        f_hi: mut fb,
    } = bracket;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..MAX_ITERATIONS {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic interpolation, or secant when a == c
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * xm * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
        if fb.is_nan() {
            return Err(Error::NoConvergence {
                what: "root finder (NaN objective)",
                iterations: 0,
            });
        }
    }
    Err(Error::NoConvergence {
        what: "root finder",
        iterations: MAX_ITERATIONS,
    })
}

/// Plain bisection for a monotone function; used where the objective is
/// only piecewise smooth (Monte Carlo quantiles, thresholds inverted by search).
pub fn bisect(f: impl Fn(f64) -> f64, bracket: RootBracket, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    let lo_negative = bracket.f_lo < 0.0;
    for _ in 0..MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol + 4.0 * f64::EPSILON * mid.abs() || mid == lo || mid == hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
