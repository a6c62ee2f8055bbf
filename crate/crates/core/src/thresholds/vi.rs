use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::{Diagnostics, Mode, ThresholdResult};
use crate::combiners::{combine, ExtendedReal, MergingMethod, PValueVector};
use crate::dependence_sim::rng::{replication_rng, uniform_open};
use crate::error::{Error, Result};
use crate::special::{chisq_upper_quantile, integrate, ln_gamma, normal_quantile, StableLaw};

pub(super) fn vi(method: &MergingMethod, eps: f64, k: usize, mode: Mode) -> Result<ThresholdResult> {
    if let Mode::MonteCarlo { n, seed } = mode {
        let (value, se) = monte_carlo_quantile(method, eps, k, n, seed)?;
        return Ok(ThresholdResult {
            value,
            mode_used: mode,
            diagnostics: Diagnostics {
                mc_standard_error: Some(se),
                ..Diagnostics::default()
            },
        });
    }
    let kf = k as f64;
    let unavailable = || Error::ModeUnavailable {
        method: method.to_string(),
        kind: "VI",
        mode: mode.to_string(),
    };
    let exact = |value: f64| -> Result<ThresholdResult> {
        if mode == Mode::Exact {
            Ok(ThresholdResult::exact(value))
        } else {
            Err(unavailable())
        }
    };
    match method {
        // P(min > t) = (1 - t)^K
        MergingMethod::Bonferroni => exact(-((-eps).ln_1p() / kf).exp_m1()),
        // uniform under independence
        MergingMethod::Simes | MergingMethod::Cauchy => exact(eps),
        MergingMethod::OrderStatistics(_) => {
            if mode == Mode::Exact {
                Err(Error::NoClosedForm {
                    method: method.to_string(),
                    kind: "VI",
                })
            } else {
                Err(unavailable())
            }
        }
        // P(max <= t) = t^K
        MergingMethod::GeneralizedMean(ExtendedReal::PosInf) => exact(eps.powf(1.0 / kf)),
        MergingMethod::GeneralizedMean(ExtendedReal::NegInf) => {
            exact(-((-eps).ln_1p() / kf).exp_m1())
        }
        // -2 sum log U is chi-square with 2K degrees of freedom
        MergingMethod::GeneralizedMean(ExtendedReal::Finite(r)) if *r == 0.0 => {
            let dof = u32::try_from(2 * k).map_err(|_| Error::domain("vi_threshold", "K too large"))?;
            exact((-chisq_upper_quantile(eps, dof)? / (2.0 * kf)).exp())
        }
        MergingMethod::GeneralizedMean(ExtendedReal::Finite(r)) if *r > 0.0 => match mode {
            Mode::Exact => positive_exact(*r, eps, k).map(ThresholdResult::exact),
            Mode::LargeKAsymptotic => Ok(ThresholdResult {
                value: positive_clt(*r, eps, k)?,
                mode_used: mode,
                diagnostics: Diagnostics::default(),
            }),
            _ => Err(unavailable()),
        },
        MergingMethod::GeneralizedMean(ExtendedReal::Finite(r)) => {
            let r = *r;
            let value = match mode {
                Mode::Exact => {
                    return Err(Error::NoClosedForm {
                        method: method.to_string(),
                        kind: "VI",
                    })
                }
                Mode::SmallEpsAsymptotic => kf.powf(-1.0 - 1.0 / r) * eps,
                Mode::MaximumTail => -((-eps).ln_1p() / kf).exp_m1() * kf.powf(-1.0 / r),
                Mode::LargeKAsymptotic => negative_large_k(r, eps, k)?,
                Mode::MonteCarlo { .. } => unreachable!("handled above"),
            };
            Ok(ThresholdResult {
                value,
                mode_used: mode,
                diagnostics: Diagnostics::default(),
            })
        }
    }
}

/// Largest `eps` for which the closed form for `r > 0` holds:
/// `Gamma(1 + 1/r)^K / Gamma(1 + K/r)`.
pub fn positive_exponent_bound(r: f64, k: usize) -> Result<f64> {
    let kf = k as f64;
    Ok((kf * ln_gamma(1.0 + 1.0 / r)? - ln_gamma(1.0 + kf / r)?).exp())
}

// While K t^r <= 1 the event {sum U_i^r <= K t^r} has probability
// (K t^r)^(K/r) Gamma(1+1/r)^K / Gamma(1+K/r).
fn positive_exact(r: f64, eps: f64, k: usize) -> Result<f64> {
    let bound = positive_exponent_bound(r, k)?;
    if eps > bound {
        return Err(Error::BoundViolation {
            epsilon: eps,
            bound,
        });
    }
    let kf = k as f64;
    Ok(((ln_gamma(1.0 + kf / r)? + eps.ln()) / kf - kf.ln() / r - ln_gamma(1.0 + 1.0 / r)?).exp())
}

// Central limit form: the mean of U^r has mean 1/(r+1) and variance
// r^2 / ((1+2r)(1+r)^2).
fn positive_clt(r: f64, eps: f64, k: usize) -> Result<f64> {
    let mu = 1.0 / (r + 1.0);
    let sigma = (r * r / ((1.0 + 2.0 * r) * (1.0 + r) * (1.0 + r))).sqrt();
    let level = mu + sigma / (k as f64).sqrt() * normal_quantile(eps)?;
    if level <= 0.0 {
        return Err(Error::domain(
            "vi_threshold",
            format!("normal approximation gives a negative level for K = {k}, epsilon = {eps}"),
        ));
    }
    Ok(level.powf(1.0 / r))
}

/// Scale and centring of `sum_i U_i^r` (`r < 0`) in its stable limit,
/// `sum_i U_i^r ~ scale * S + shift` with `S` stable of index `-1/r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LargeKConstants {
    pub alpha: f64,
    pub scale: f64,
    pub shift: f64,
}

pub fn large_k_constants(r: f64, k: usize) -> Result<LargeKConstants> {
    if !(r < 0.0) || !r.is_finite() {
        return Err(Error::domain(
            "large_k_constants",
            format!("needs a finite negative exponent, got {r}"),
        ));
    }
    let kf = k as f64;
    let alpha = -1.0 / r;
    let mean = kf * alpha / (alpha - 1.0);
    let (scale, shift) = if alpha > 2.0 {
        let var = alpha / (alpha - 2.0) - (alpha / (alpha - 1.0)).powi(2);
        ((kf * var).sqrt(), mean)
    } else if alpha == 2.0 {
        ((kf * kf.ln()).sqrt(), mean)
    } else if alpha == 1.0 {
        (kf * PI / 2.0, PI * kf * kf / 2.0 * sine_tail(2.0 / (kf * PI))?)
    } else {
        let c = (gamma_near_zero(1.0 - alpha)? * (PI * alpha / 2.0).cos()).powf(1.0 / alpha);
        let shift = if alpha > 1.0 { mean } else { 0.0 };
        (kf.powf(1.0 / alpha) * c, shift)
    };
    Ok(LargeKConstants { alpha, scale, shift })
}

fn negative_large_k(r: f64, eps: f64, k: usize) -> Result<f64> {
    let c = large_k_constants(r, k)?;
    let q = StableLaw::new(c.alpha)?.quantile(1.0 - eps)?;
    let level = c.scale * q + c.shift;
    if level <= 0.0 {
        return Err(Error::domain(
            "vi_threshold",
            format!("stable approximation gives a non-positive level for K = {k}, epsilon = {eps}"),
        ));
    }
    Ok((level / k as f64).powf(1.0 / r))
}

// Gamma(x) for x in (-1, 0) or x > 0.
fn gamma_near_zero(x: f64) -> Result<f64> {
    if x < 0.0 {
        Ok(ln_gamma(x + 1.0)?.exp() / x)
    } else {
        Ok(ln_gamma(x)?.exp())
    }
}

/// `int_1^inf sin(a x) / x^2 dx` for `a > 0`.
///
/// Substituting `u = a x` gives `a int_a^inf sin(u)/u^2 du`. The range is cut
/// at a whole number of periods `U = 2 pi n`, beyond which integration by
/// parts leaves `1/U^2 - 6/U^4 + O(U^-6)`.
fn sine_tail(a: f64) -> Result<f64> {
    let u_max = 2.0 * PI * 400.0_f64.max((a / (2.0 * PI)).ceil() + 400.0);
    let head = integrate(|u: f64| u.sin() / (u * u), a, u_max, 1e-13)?;
    Ok(a * (head + u_max.powi(-2) - 6.0 * u_max.powi(-4)))
}

/// Empirical `eps`-quantile of the merged value over `n` vectors of `k`
/// independent uniforms, with a standard error from the spread of the order
/// statistics one binomial standard deviation either side.
pub(crate) fn monte_carlo_quantile(
    method: &MergingMethod,
    eps: f64,
    k: usize,
    n: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::Config("Monte Carlo needs at least one replication".into()));
    }
    let mut values = (0..n)
        .into_par_iter()
        .map_init(
            || Vec::with_capacity(k),
            |buf, i| {
                let mut rng = replication_rng(seed, i as u64);
                buf.clear();
                buf.extend((0..k).map(|_| uniform_open(&mut rng)));
                let p = PValueVector::from_unchecked(std::mem::take(buf));
                let v = combine(method, &p);
                *buf = p.into_inner();
                v
            },
        )
        .collect::<Result<Vec<f64>>>()?;
    values.sort_unstable_by(f64::total_cmp);
    let nf = n as f64;
    let rank = |x: f64| (x.ceil() as usize).clamp(1, n) - 1;
    let centre = nf * eps;
    let spread = (nf * eps * (1.0 - eps)).sqrt();
    let value = values[rank(centre)];
    let se = (values[rank(centre + spread)] - values[rank(centre - spread)]) / 2.0;
    Ok((value, se))
}
