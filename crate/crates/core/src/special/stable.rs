//! Totally skewed (beta = 1) stable laws with unit scale and zero shift.
//!
//! The law is pinned by the characteristic function
//!
//! ```text
//! alpha != 1:  exp(-|t|^alpha (1 - i sign(t) tan(pi alpha / 2)))
//! alpha == 1:  exp(-|t| (1 + i (2/pi) sign(t) log|t|))
//! ```
//!
//! which is the Samorodnitsky-Taqqu "S1" parameterization with
//! `beta = 1, sigma = 1, mu = 0`. The distribution function is evaluated
//! with Nolan's integral representation, which is written in the "S0"
//! parameterization. For unit scale the two differ only by a shift,
//! `x0 = x1 - tan(pi alpha / 2)` when `alpha != 1` and no shift when
//! `alpha == 1`. With `beta = 1` that shift cancels the S0 mode offset
//! `zeta = -tan(pi alpha / 2)`, so in S1 coordinates the branch point sits at
//! `x = 0`. For `alpha < 1` the law is supported on `(0, inf)`; at
//! `alpha = 1/2` it is the Levy law with scale 1, `F(x) = erfc(1/sqrt(2x))`.
//!
//! For `alpha >= 2` the law is, by convention, the standard normal.

use std::f64::consts::{FRAC_PI_2, PI};

use super::normal::{normal_cdf, normal_quantile, normal_sf};
use super::quad::integrate_finite;
use super::roots::{find_root, RootBracket};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableLaw {
    alpha: f64,
}

impl StableLaw {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || alpha.is_nan() {
            return Err(Error::domain(
                "StableLaw",
                format!("alpha = {alpha} must be positive"),
            ));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn is_normal(&self) -> bool {
        self.alpha >= 2.0
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        if self.is_normal() {
            return Ok(normal_cdf(x));
        }
        Ok(self.tails(x)?.0)
    }

    pub fn sf(&self, x: f64) -> Result<f64> {
        if self.is_normal() {
            return Ok(normal_sf(x));
        }
        Ok(self.tails(x)?.1)
    }

    // (F(x), 1 - F(x)), each computed directly where it is the small one.
    fn tails(&self, x: f64) -> Result<(f64, f64)> {
        let a = self.alpha;
        if a == 1.0 {
            let ln_shift = -FRAC_PI_2 * x;
            let ln_g = |t: f64| ln_shift + ln_v_unit(t);
            if x < 0.0 {
                let lower = nolan_integral(ln_g, -FRAC_PI_2, FRAC_PI_2, Kernel::Exp)?;
                return Ok((lower, 1.0 - lower));
            }
            let upper = nolan_integral(ln_g, -FRAC_PI_2, FRAC_PI_2, Kernel::NegExpm1)?;
            return Ok((1.0 - upper, upper));
        }
        if a < 1.0 {
            if x <= 0.0 {
                return Ok((0.0, 1.0));
            }
            let (theta0, ln_g) = ln_g_general(a, 1.0, x);
            let lo = -theta0;
            let hi = FRAC_PI_2;
            // F = (1/pi) int exp(-g); g grows as x shrinks
            let lower = nolan_integral(&ln_g, lo, hi, Kernel::Exp)?;
            if lower < 0.5 {
                return Ok((lower, 1.0 - lower));
            }
            let upper = nolan_integral(&ln_g, lo, hi, Kernel::NegExpm1)?;
            return Ok((1.0 - upper, upper));
        }
        // 1 < alpha < 2
        if x == 0.0 {
            return Ok((1.0 / a, 1.0 - 1.0 / a));
        }
        if x > 0.0 {
            let (theta0, ln_g) = ln_g_general(a, 1.0, x);
            let upper = nolan_integral(ln_g, -theta0, FRAC_PI_2, Kernel::Exp)?;
            Ok((1.0 - upper, upper))
        } else {
            let (theta0, ln_g) = ln_g_general(a, -1.0, -x);
            let lower = nolan_integral(ln_g, -theta0, FRAC_PI_2, Kernel::Exp)?;
            Ok((lower, 1.0 - lower))
        }
    }

    /// The `p`-quantile. Bit-identical to [`normal_quantile`] for `alpha >= 2`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(
                "stable_quantile",
                format!("p = {p} not in (0, 1)"),
            ));
        }
        if self.is_normal() {
            return normal_quantile(p);
        }
        let upper = p > 0.5;
        let target = if upper { 1.0 - p } else { p };
        // Residual in a variable where it is monotone increasing.
        let resid = |x: f64| -> f64 {
            match self.tails(x) {
                Ok((lo, hi)) => {
                    if upper {
                        target - hi
                    } else {
                        lo - target
                    }
                }
                Err(_) => f64::NAN,
            }
        };
        if self.alpha < 1.0 {
            // positive support: search in log x
            let h = |u: f64| resid(u.exp());
            let bracket = expand_bracket(&h, 0.0, 2.0, 700.0)?;
            return find_root(h, bracket, 1e-13).map(f64::exp);
        }
        let bracket = expand_bracket(&resid, 0.0, 1.0, 1e300)?;
        find_root(resid, bracket, 0.0)
    }
}

/// Quantile of a [`StableLaw`]; see [`StableLaw::quantile`].
pub fn stable_quantile(law: StableLaw, p: f64) -> Result<f64> {
    law.quantile(p)
}

// Widens [c - step, c + step] (doubling the step) until `h` changes sign.
fn expand_bracket(h: &impl Fn(f64) -> f64, center: f64, step: f64, limit: f64) -> Result<RootBracket> {
    let mut lo = center - step;
    let mut hi = center + step;
    let mut f_lo = h(lo);
    let mut f_hi = h(hi);
    let mut width = step;
    while f_lo > 0.0 && lo > -limit {
        hi = lo;
        f_hi = f_lo;
        width *= 2.0;
        lo = (lo - width).max(-limit);
        f_lo = h(lo);
    }
    while f_hi < 0.0 && hi < limit {
        lo = hi;
        f_lo = f_hi;
        width *= 2.0;
        hi = (hi + width).min(limit);
        f_hi = h(hi);
    }
    RootBracket::from_values(lo, hi, f_lo, f_hi)
}

#[derive(Clone, Copy)]
enum Kernel {
    /// exp(-g)
    Exp,
    /// 1 - exp(-g)
    NegExpm1,
}

// (1/pi) * int_lo^hi kernel(g(theta)) dtheta with g = exp(ln_g).
fn nolan_integral(ln_g: impl Fn(f64) -> f64, lo: f64, hi: f64, kernel: Kernel) -> Result<f64> {
    if !(hi > lo) {
        return Ok(0.0);
    }
    let integrand = |t: f64| {
        let lg = ln_g(t);
        let g = lg.exp();
        let v = match kernel {
            Kernel::Exp => (-g).exp(),
            Kernel::NegExpm1 => -(-g).exp_m1(),
        };
        if v.is_nan() {
            0.0
        } else {
            v
        }
    };

    // Split where g = 1: the integrand switches between 0 and 1 there and the
    // transition can be very sharp.
    let eps = (hi - lo) * 1e-12;
    let a = lo + eps;
    let b = hi - eps;
    let (la, lb) = (ln_g(a), ln_g(b));
    let mut cuts = vec![lo];
    if la.is_finite() && lb.is_finite() && la.signum() != lb.signum() {
        if let Ok(br) = RootBracket::from_values(a, b, la, lb) {
            if let Ok(t) = find_root(&ln_g, br, 1e-14) {
                cuts.push(t);
            }
        }
    }
    cuts.push(hi);

    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += integrate_finite(&integrand, w[0], w[1], 1e-11, 1e-300)?;
    }
    Ok((total / PI).clamp(0.0, 1.0))
}

// ln V for alpha == 1, beta == 1.
fn ln_v_unit(t: f64) -> f64 {
    let u = FRAC_PI_2 + t;
    (2.0 / PI).ln() + u.ln() - t.cos().ln() + u * t.tan()
}

// Returns theta0 and ln g(theta) = (alpha/(alpha-1)) ln d + ln V(theta) for
// the S0 law with skewness `beta` (= +-1) evaluated at distance `d > 0` beyond
// the branch point.
fn ln_g_general(alpha: f64, beta: f64, d: f64) -> (f64, impl Fn(f64) -> f64) {
    let theta0 = (beta * (PI * alpha / 2.0).tan()).atan() / alpha;
    let at0 = alpha * theta0;
    let e = alpha / (alpha - 1.0);
    let base = at0.cos().ln() / (alpha - 1.0) + e * d.ln();
    let ln_g = move |t: f64| {
        let ct = t.cos();
        base + e * (ct.ln() - (alpha * (theta0 + t)).sin().ln())
            + (at0 + (alpha - 1.0) * t).cos().ln()
            - ct.ln()
    };
    (theta0, ln_g)
}
