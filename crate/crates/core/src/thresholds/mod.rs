//! Critical values for merged p-values.
//!
//! A threshold `g` makes `F(P_1, ..., P_K) < g(eps)` a level-`eps` test under
//! some dependence assumption:
//!
//! * VAD: valid for any dependence among the p-variables,
//! * VI: valid when they are independent,
//! * VC: valid when they are comonotonic (all equal).
//!
//! The ratio of a VI or VC threshold to the VAD threshold is the price for
//! validity: how much the critical value shrinks when the assumption is
//! dropped.
//!
//! Two readings are worth stating. In the closed form for positive exponents
//! the gamma-function arguments `1 + K/r` and `1 + 1/r` use the mean's
//! exponent `r`. In the Cauchy VAD root equation `(eps - K x) H(x)` the
//! function `H` is the same `eps`-dependent `H` as on the left-hand side.

mod solvers;
mod table;
mod vi;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use serde::Serialize;

pub use solvers::{
    cauchy_vad, geometric_multiplier, harmonic_multiplier, solve_ck, solve_xk, solve_yk,
    RootSolution,
};
pub use table::{
    default_methods, generate_log_k_table, generate_table, write_log_k_csv, LogKRow,
    ModePolicy, PriceTable, TableCell, DEFAULT_KS,
};
pub use vi::{large_k_constants, positive_exponent_bound, LargeKConstants};

use crate::combiners::{ell, ExtendedReal, MergingMethod};
use crate::error::{Error, Result};
use crate::numfmt::format_sig;

/// Replications used by [`Mode::MonteCarlo`] when none are given.
pub const DEFAULT_MC_REPLICATIONS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ThresholdKind {
    #[serde(rename = "VAD")]
    Vad,
    #[serde(rename = "VI")]
    Vi,
    #[serde(rename = "VC")]
    Vc,
}

impl fmt::Display for ThresholdKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThresholdKind::Vad => "VAD",
            ThresholdKind::Vi => "VI",
            ThresholdKind::Vc => "VC",
        })
    }
}

impl FromStr for ThresholdKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "vad" => Ok(ThresholdKind::Vad),
            "vi" => Ok(ThresholdKind::Vi),
            "vc" => Ok(ThresholdKind::Vc),
            _ => Err(Error::Config(format!(
                "unknown threshold kind {s:?}; expected vad, vi or vc"
            ))),
        }
    }
}

/// How a threshold is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    /// Closed form or root of an exact equation.
    Exact,
    /// `K^(-1-1/r) eps`, the leading term as `eps -> 0` (negative `r`).
    SmallEpsAsymptotic,
    /// Stable-law (negative `r`) or normal (positive `r`) limit as `K -> inf`.
    LargeKAsymptotic,
    /// Negative `r`: the sum of `p_i^r` is replaced by its largest term,
    /// giving `(1 - (1-eps)^(1/K)) K^(-1/r)`.
    MaximumTail,
    /// Empirical `eps`-quantile over `n` independent uniform vectors.
    MonteCarlo { n: usize, seed: u64 },
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::SmallEpsAsymptotic => f.write_str("small-eps"),
            Mode::LargeKAsymptotic => f.write_str("large-k"),
            Mode::MaximumTail => f.write_str("maximum-tail"),
            Mode::MonteCarlo { n, seed } => write!(f, "monte-carlo(N={n};seed={seed})"),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    /// Parses a mode name; `monte-carlo` gets the default replication count
    /// and seed 0.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(Mode::Exact),
            "small-eps" => Ok(Mode::SmallEpsAsymptotic),
            "large-k" => Ok(Mode::LargeKAsymptotic),
            "maximum-tail" => Ok(Mode::MaximumTail),
            "monte-carlo" => Ok(Mode::MonteCarlo {
                n: DEFAULT_MC_REPLICATIONS,
                seed: 0,
            }),
            _ => Err(Error::Config(format!(
                "unknown mode {s:?}; expected exact, small-eps, large-k, maximum-tail or monte-carlo"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdQuery {
    pub method: MergingMethod,
    pub kind: ThresholdKind,
    pub epsilon: f64,
    pub k: usize,
    pub mode: Mode,
}

impl ThresholdQuery {
    pub fn new(method: MergingMethod, kind: ThresholdKind, epsilon: f64, k: usize) -> Self {
        Self {
            method,
            kind,
            epsilon,
            k,
            mode: Mode::Exact,
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::domain(
                "threshold",
                format!("epsilon = {} must lie in (0, 1)", self.epsilon),
            ));
        }
        if self.k == 0 {
            return Err(Error::domain("threshold", "K must be at least 1"));
        }
        if let MergingMethod::OrderStatistics(w) = &self.method {
            if w.len() != self.k {
                return Err(Error::Config(format!(
                    "{} order-statistic weights for K = {}",
                    w.len(),
                    self.k
                )));
            }
        }
        if let Mode::MonteCarlo { n, .. } = self.mode {
            if n == 0 {
                return Err(Error::Config("Monte Carlo needs at least one replication".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    /// `c_K`, `y_K` or `x_K` for root-based thresholds.
    pub root_value: Option<f64>,
    pub residual: Option<f64>,
    pub mc_standard_error: Option<f64>,
}

impl Diagnostics {
    fn from_root(sol: &RootSolution) -> Self {
        Self {
            root_value: Some(sol.root),
            residual: Some(sol.residual),
            mc_standard_error: None,
        }
    }

    /// `key=value` pairs joined by `;`, empty when there is nothing to report.
    pub fn render(&self, digits: usize) -> String {
        let mut parts = Vec::new();
        if let Some(v) = self.root_value {
            parts.push(format!("root={}", format_sig(v, digits)));
        }
        if let Some(v) = self.residual {
            parts.push(format!("residual={}", format_sig(v, 3)));
        }
        if let Some(v) = self.mc_standard_error {
            parts.push(format!("se={}", format_sig(v, digits)));
        }
        parts.join(";")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub value: f64,
    pub mode_used: Mode,
    pub diagnostics: Diagnostics,
}

impl ThresholdResult {
    fn exact(value: f64) -> Self {
        Self {
            value,
            mode_used: Mode::Exact,
            diagnostics: Diagnostics::default(),
        }
    }
}

/// Dispatches on `q.kind`.
pub fn threshold(q: &ThresholdQuery) -> Result<ThresholdResult> {
    match q.kind {
        ThresholdKind::Vad => vad_threshold(q),
        ThresholdKind::Vi => vi_threshold(q),
        ThresholdKind::Vc => vc_threshold(q),
    }
}

const VAD_SUPPORTED: &str = "bonferroni, simes, cauchy, harmonic, geometric, negative-quartic";

fn require_exact(q: &ThresholdQuery) -> Result<()> {
    if q.mode != Mode::Exact {
        return Err(Error::ModeUnavailable {
            method: q.method.to_string(),
            kind: kind_name(q.kind),
            mode: q.mode.to_string(),
        });
    }
    Ok(())
}

fn kind_name(kind: ThresholdKind) -> &'static str {
    match kind {
        ThresholdKind::Vad => "VAD",
        ThresholdKind::Vi => "VI",
        ThresholdKind::Vc => "VC",
    }
}

/// Threshold valid under arbitrary dependence.
pub fn vad_threshold(q: &ThresholdQuery) -> Result<ThresholdResult> {
    q.validate()?;
    require_exact(q)?;
    let eps = q.epsilon;
    let k = q.k;
    let kf = k as f64;
    let method = q.method.canonical();
    let unsupported = || Error::Unsupported {
        method: method.to_string(),
        kind: "VAD",
        supported: VAD_SUPPORTED,
    };
    let supported = match &method {
        MergingMethod::Bonferroni | MergingMethod::Simes | MergingMethod::Cauchy => true,
        MergingMethod::GeneralizedMean(ExtendedReal::Finite(r)) => [-4.0, -1.0, 0.0].contains(r),
        _ => false,
    };
    if !supported {
        return Err(unsupported());
    }
    if method == MergingMethod::Cauchy && eps >= 0.5 {
        return Err(Error::domain(
            "vad_threshold",
            format!("Cauchy VAD threshold needs epsilon < 1/2, got {eps}"),
        ));
    }
    // every supported combiner is the identity on a single p-value
    if k == 1 {
        return Ok(ThresholdResult::exact(eps));
    }
    let result = match method {
        MergingMethod::Bonferroni => ThresholdResult::exact(eps / kf),
        MergingMethod::Simes => ThresholdResult::exact(eps / ell(k)),
        MergingMethod::Cauchy => {
            let (a, sol) = cauchy_vad(eps, k)?;
            ThresholdResult {
                value: a,
                mode_used: Mode::Exact,
                diagnostics: Diagnostics::from_root(&sol),
            }
        }
        MergingMethod::GeneralizedMean(ExtendedReal::Finite(r)) if r == -4.0 => {
            // constant taken as published for the negative-quartic mean
            ThresholdResult::exact(0.75 * kf.powf(-0.75) * eps)
        }
        MergingMethod::GeneralizedMean(ExtendedReal::Finite(r)) => {
            let which = if r == 0.0 {
                Multiplier::Geometric
            } else {
                Multiplier::Harmonic
            };
            let (m, sol) = cached_multiplier(which, k)?;
            ThresholdResult {
                value: m * eps,
                mode_used: Mode::Exact,
                diagnostics: Diagnostics::from_root(&sol),
            }
        }
        _ => return Err(unsupported()),
    };
    Ok(result)
}

/// Threshold valid under independence.
pub fn vi_threshold(q: &ThresholdQuery) -> Result<ThresholdResult> {
    q.validate()?;
    vi::vi(&q.method.canonical(), q.epsilon, q.k, q.mode)
}

/// Threshold valid under comonotonicity.
///
/// All generalized means, the Cauchy combination and Simes return a common
/// value unchanged, so the threshold is `eps`. General order-statistic weights
/// map a common value `u` to `u / w_K`, giving `eps / w_K`.
pub fn vc_threshold(q: &ThresholdQuery) -> Result<ThresholdResult> {
    q.validate()?;
    require_exact(q)?;
    let value = match q.method.canonical() {
        // S(u, ..., u) = u / w_K with w_K the largest weight
        MergingMethod::OrderStatistics(w) => {
            q.epsilon / w.as_slice().last().copied().unwrap_or(1.0)
        }
        _ => q.epsilon,
    };
    Ok(ThresholdResult::exact(value))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Assumption {
    Independence,
    Comonotonicity,
}

impl Assumption {
    pub fn kind(self) -> ThresholdKind {
        match self {
            Assumption::Independence => ThresholdKind::Vi,
            Assumption::Comonotonicity => ThresholdKind::Vc,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Price {
    pub ratio: f64,
    pub numerator: ThresholdResult,
    pub vad: ThresholdResult,
}

/// `b_F(eps) / a_F(eps)` or `c_F(eps) / a_F(eps)`.
///
/// `mode` applies to the VI threshold; VAD and VC thresholds are always exact.
pub fn price_for_validity(
    method: &MergingMethod,
    epsilon: f64,
    k: usize,
    assumption: Assumption,
    mode: Mode,
) -> Result<Price> {
    let vad = vad_threshold(&ThresholdQuery::new(
        method.clone(),
        ThresholdKind::Vad,
        epsilon,
        k,
    ))?;
    let numerator = match assumption {
        Assumption::Independence => vi_threshold(
            &ThresholdQuery::new(method.clone(), ThresholdKind::Vi, epsilon, k).with_mode(mode),
        )?,
        Assumption::Comonotonicity => vc_threshold(&ThresholdQuery::new(
            method.clone(),
            ThresholdKind::Vc,
            epsilon,
            k,
        ))?,
    };
    Ok(Price {
        ratio: numerator.value / vad.value,
        numerator,
        vad,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Multiplier {
    Geometric,
    Harmonic,
}

type MultiplierCache = RwLock<HashMap<(Multiplier, usize), (f64, RootSolution)>>;

fn multiplier_cache() -> &'static MultiplierCache {
    static CACHE: OnceLock<MultiplierCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

// The VAD thresholds of the geometric and harmonic means are linear in eps,
// so the slope is solved once per K.
fn cached_multiplier(which: Multiplier, k: usize) -> Result<(f64, RootSolution)> {
    if let Some(hit) = multiplier_cache()
        .read()
        .unwrap_or_else(|e| e.into_inner())
        .get(&(which, k))
    {
        return Ok(*hit);
    }
    let (m, mut sol) = match which {
        Multiplier::Geometric => geometric_multiplier(k)?,
        Multiplier::Harmonic => harmonic_multiplier(k)?,
    };
    if which == Multiplier::Geometric {
        // report c_K itself rather than -log c_K
        sol.root = (-sol.root).exp();
    }
    let mut guard = multiplier_cache().write().unwrap_or_else(|e| e.into_inner());
    Ok(*guard.entry((which, k)).or_insert((m, sol)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(method: MergingMethod, kind: ThresholdKind, eps: f64, k: usize) -> ThresholdQuery {
        ThresholdQuery::new(method, kind, eps, k)
    }

    #[test]
    fn bonferroni_and_simes_vad() {
        let r = vad_threshold(&q(MergingMethod::Bonferroni, ThresholdKind::Vad, 0.05, 10)).unwrap();
        assert!((r.value - 0.005).abs() < 1e-18);
        let r = vad_threshold(&q(MergingMethod::Simes, ThresholdKind::Vad, 0.01, 50)).unwrap();
        assert!((0.01 / r.value - 4.499).abs() < 5e-4);
    }

    #[test]
    fn geometric_vad_price_is_e() {
        let r = vad_threshold(&q(MergingMethod::GEOMETRIC, ThresholdKind::Vad, 0.01, 50)).unwrap();
        assert!((0.01 / r.value - 2.718).abs() < 5e-4);
        assert!(r.diagnostics.residual.unwrap() < 1e-10);
    }

    #[test]
    fn homogeneous_vad_is_linear() {
        for m in [
            MergingMethod::Bonferroni,
            MergingMethod::Simes,
            MergingMethod::HARMONIC,
            MergingMethod::GEOMETRIC,
            MergingMethod::NEGATIVE_QUARTIC,
        ] {
            let slopes: Vec<f64> = [1e-4, 1e-3, 1e-2, 5e-2]
                .iter()
                .map(|&e| vad_threshold(&q(m.clone(), ThresholdKind::Vad, e, 37)).unwrap().value / e)
                .collect();
            for s in &slopes {
                assert!((s / slopes[0] - 1.0).abs() < 1e-12, "{m}");
            }
        }
    }

    #[test]
    fn unsupported_pairs_and_modes() {
        let e = vad_threshold(&q(MergingMethod::ARITHMETIC, ThresholdKind::Vad, 0.01, 5)).unwrap_err();
        assert!(matches!(e, Error::Unsupported { .. }));
        assert!(e.to_string().contains("simes"));
        let e = vad_threshold(&q(MergingMethod::Cauchy, ThresholdKind::Vad, 0.5, 5)).unwrap_err();
        assert!(matches!(e, Error::Domain { .. }));
        let e = vad_threshold(
            &q(MergingMethod::Simes, ThresholdKind::Vad, 0.01, 5).with_mode(Mode::LargeKAsymptotic),
        )
        .unwrap_err();
        assert!(matches!(e, Error::ModeUnavailable { .. }));
        assert!(vad_threshold(&q(MergingMethod::Simes, ThresholdKind::Vad, 1.0, 5)).is_err());
        assert!(vad_threshold(&q(MergingMethod::Simes, ThresholdKind::Vad, 0.1, 0)).is_err());
    }

    #[test]
    fn vc_is_identity() {
        for m in default_methods() {
            for eps in [0.01, 0.5] {
                assert_eq!(vc_threshold(&q(m.clone(), ThresholdKind::Vc, eps, 20)).unwrap().value, eps);
            }
        }
        let w = MergingMethod::order_statistics(vec![0.1, 0.2, 0.5]).unwrap();
        let r = vc_threshold(&q(w, ThresholdKind::Vc, 0.01, 3)).unwrap();
        assert!((r.value - 0.02).abs() < 1e-15);
    }

    #[test]
    fn bonferroni_comonotone_price_is_k() {
        let p = price_for_validity(
            &MergingMethod::Bonferroni,
            0.3,
            200,
            Assumption::Comonotonicity,
            Mode::Exact,
        )
        .unwrap();
        assert!((p.ratio - 200.0).abs() < 1e-9);
    }

    #[test]
    fn cache_is_consistent_across_threads() {
        let handles: Vec<_> = (0..8)
            .map(|_| std::thread::spawn(|| cached_multiplier(Multiplier::Harmonic, 77).unwrap().0))
            .collect();
        let vals: Vec<f64> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(vals.iter().all(|v| v.to_bits() == vals[0].to_bits()));
    }

    #[test]
    fn kind_and_mode_parse() {
        assert_eq!("vad".parse::<ThresholdKind>().unwrap(), ThresholdKind::Vad);
        assert_eq!("VI".parse::<ThresholdKind>().unwrap(), ThresholdKind::Vi);
        assert!("vx".parse::<ThresholdKind>().is_err());
        for m in [
            Mode::Exact,
            Mode::SmallEpsAsymptotic,
            Mode::LargeKAsymptotic,
            Mode::MaximumTail,
        ] {
            assert_eq!(m.to_string().parse::<Mode>().unwrap(), m);
        }
    }
}
