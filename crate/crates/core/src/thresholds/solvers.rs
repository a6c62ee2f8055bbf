//! Root equations behind the VAD thresholds of the geometric mean, the
//! harmonic mean and the Cauchy combination.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::{cauchy_cdf, find_root, RootBracket};

/// A solved root together with the residual of its defining equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootSolution {
    pub root: f64,
    /// Residual in the equation's natural (relative) scale.
    pub residual: f64,
}

const TOL: f64 = 1e-15;

fn require_k(k: usize, what: &'static str) -> Result<()> {
    if k < 3 {
        return Err(Error::domain(what, format!("K = {k}; the root equation needs K >= 3")));
    }
    Ok(())
}

// log(1/c - (K-1)) - (K - K^2 c) written in t = -log c
fn geometric_residual(k: f64, t: f64) -> f64 {
    let c = (-t).exp();
    t + (-(k - 1.0) * c).ln_1p() - k + k * k * c
}

/// Root `c` in `(0, 1/K)` of `log(1/c - (K-1)) = K - K^2 c`.
///
/// The root is close to `exp(-K)`, far below the double-precision floor for
/// large `K`, so the equation is solved for `t = -log c` and the solution
/// reports `t` in `root`. Use [`geometric_multiplier`] for `a0`.
pub fn solve_ck(k: usize) -> Result<RootSolution> {
    require_k(k, "solve_ck")?;
    let kf = k as f64;
    let g = |t: f64| geometric_residual(kf, t);
    // just inside c = 1/K, where both sides vanish and the difference is
    // negative to second order
    let lo = kf.ln() - (-1e-3_f64).ln_1p();
    let hi = kf + kf.ln() + 1.0;
    let t = find_root(g, RootBracket::new(g, lo, hi)?, TOL)?;
    Ok(RootSolution {
        root: t,
        residual: g(t).abs() / kf,
    })
}

/// `a0 = c exp((K-1)/(1 - K c))`, the VAD multiplier of the geometric mean.
pub fn geometric_multiplier(k: usize) -> Result<(f64, RootSolution)> {
    let sol = solve_ck(k)?;
    let kf = k as f64;
    let c = (-sol.root).exp();
    // -t + (K-1)/(1-Kc) with t eliminated through the root equation: the
    // exponent is -1 plus terms of order K^2 c, which keeps the digits lost
    // when t ~ K is subtracted directly
    let delta = kf * kf * c + (-(kf - 1.0) * c).ln_1p() + kf * (kf - 1.0) * c / (1.0 - kf * c);
    let a0 = (-1.0 + delta).exp();
    Ok((a0, sol))
}

// ((y+1) log(1+y) - y) / y^2
fn harmonic_ratio(y: f64) -> f64 {
    if y < 0.25 {
        // sum_{n>=2} (-1)^n y^(n-2) / (n (n-1))
        let mut sum = 0.0;
        let mut pow = 1.0;
        for n in 2..80 {
            let n = n as f64;
            let term = pow / (n * (n - 1.0));
            sum += if (n as u32) % 2 == 0 { term } else { -term };
            pow *= y;
            if term < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        ((y + 1.0) * y.ln_1p() - y) / (y * y)
    }
}

/// Root `y` in `(0, inf)` of `y^2 = K((y+1) log(y+1) - y)`.
pub fn solve_yk(k: usize) -> Result<RootSolution> {
    require_k(k, "solve_yk")?;
    let kf = k as f64;
    // divided through by y^2
    let h = |y: f64| 1.0 - kf * harmonic_ratio(y);
    let lo = 1e-12;
    let mut hi = kf * 1e3;
    let mut f_hi = h(hi);
    while f_hi <= 0.0 && hi < 1e300 {
        hi *= 10.0;
        f_hi = h(hi);
    }
    let bracket = RootBracket::from_values(lo, hi, h(lo), f_hi)?;
    let y = find_root(h, bracket, TOL * kf)?;
    Ok(RootSolution {
        root: y,
        residual: h(y).abs(),
    })
}

/// `a_{-1} = (y_K + 1) K / (y_K + K)^2`, the VAD multiplier of the harmonic mean.
pub fn harmonic_multiplier(k: usize) -> Result<(f64, RootSolution)> {
    let sol = solve_yk(k)?;
    let kf = k as f64;
    let y = sol.root;
    Ok(((y + 1.0) * kf / ((y + kf) * (y + kf)), sol))
}

/// Pieces of the Cauchy VAD equation at a fixed `(eps, K)`.
#[derive(Debug, Clone, Copy)]
struct CauchyVad {
    eps: f64,
    k: f64,
}

impl CauchyVad {
    // eps - (K-1) x: the upper-tail mass left to each of the other K-1 values
    fn shared(&self, x: f64) -> f64 {
        self.eps - (self.k - 1.0) * x
    }

    // (K-1) C^-1(1 - eps + (K-1)x) + C^-1(1 - x), using C^-1(1-s) = cot(pi s)
    fn h(&self, x: f64) -> f64 {
        (self.k - 1.0) / (PI * self.shared(x)).tan() + 1.0 / (PI * x).tan()
    }

    // int_x^{eps/K} h(t) dt via the antiderivative -(1/pi) log sin(pi p) of C^-1
    fn integral(&self, x: f64) -> f64 {
        ((PI * self.shared(x)).sin() / (PI * x).sin()).ln() / PI
    }

    fn lhs_rhs(&self, x: f64) -> (f64, f64) {
        (self.k * self.integral(x), (self.eps - self.k * x) * self.h(x))
    }

    fn f(&self, x: f64) -> f64 {
        let (l, r) = self.lhs_rhs(x);
        l - r
    }
}

/// Root `x` in `(0, eps/K)` of `K int_x^{eps/K} H(t) dt = (eps - K x) H(x)`,
/// where `H(x) = (K-1) C^-1(1 - eps + (K-1) x) + C^-1(1 - x)`.
pub fn solve_xk(eps: f64, k: usize) -> Result<RootSolution> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::domain(
            "solve_xk",
            format!("epsilon = {eps} must lie in (0, 1/2)"),
        ));
    }
    if k < 2 {
        return Err(Error::domain("solve_xk", format!("K = {k}; needs K >= 2")));
    }
    let eq = CauchyVad { eps, k: k as f64 };
    let end = eps / k as f64;
    if k == 2 {
        // f < 0 on all of (0, eps/2): the boundary point is the solution
        return Ok(RootSolution { root: end, residual: 0.0 });
    }
    let f = |x: f64| eq.f(x);
    let lo = end * 1e-15;
    let f_lo = f(lo);
    // f vanishes at eps/K itself, where the difference drowns in rounding
    let mut bracket = None;
    for back_off in [1e-3, 1e-2, 1e-1] {
        let hi = end * (1.0 - back_off);
        let f_hi = f(hi);
        if f_hi > 0.0 {
            bracket = Some(RootBracket::from_values(lo, hi, f_lo, f_hi)?);
            break;
        }
    }
    let bracket = match bracket {
        Some(b) => b,
        None => RootBracket::new(f, lo, end * (1.0 - 1e-3))?,
    };
    let x = find_root(f, bracket, end * 1e-15)?;
    let (l, r) = eq.lhs_rhs(x);
    Ok(RootSolution {
        root: x,
        residual: (l - r).abs() / l.abs().max(r.abs()),
    })
}

/// `C(-H(x_K)/K)`, the VAD threshold of the Cauchy combination.
pub fn cauchy_vad(eps: f64, k: usize) -> Result<(f64, RootSolution)> {
    if k == 1 {
        return Ok((
            eps,
            RootSolution {
                root: f64::NAN,
                residual: 0.0,
            },
        ));
    }
    let sol = solve_xk(eps, k)?;
    let eq = CauchyVad { eps, k: k as f64 };
    Ok((cauchy_cdf(-eq.h(sol.root) / k as f64), sol))
}
