use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Standard Cauchy distribution function `arctan(x)/pi + 1/2`.
pub fn cauchy_cdf(x: f64) -> f64 {
    if x < 0.0 {
        // avoids cancellation in 1/2 + arctan(x)/pi far in the left tail
        (-1.0 / x).atan() / PI
    } else {
        0.5 + x.atan() / PI
    }
}

/// Standard Cauchy quantile `tan(pi (p - 1/2))` on the open unit interval.
pub fn cauchy_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(
            "cauchy_quantile",
            format!("p = {p} not in (0, 1)"),
        ));
    }
    Ok(cauchy_quantile_unchecked(p))
}

pub(crate) fn cauchy_quantile_unchecked(p: f64) -> f64 {
    if p < 0.5 {
        -1.0 / (PI * p).tan()
    } else if p > 0.5 {
        cauchy_upper(1.0 - p)
    } else {
        0.0
    }
}

/// `C^{-1}(1 - s)` evaluated from `s` directly, i.e. `cot(pi s)`.
pub(crate) fn cauchy_upper(s: f64) -> f64 {
    1.0 / (PI * s).tan()
}
