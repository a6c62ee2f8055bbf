//! Combining functions: generalized means, the Cauchy combination and
//! order-statistic (Simes-type) functions.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::special::{cauchy_cdf, cauchy_quantile_unchecked};

/// A validated, non-empty vector of p-values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PValueVector {
    values: Vec<f64>,
}

impl PValueVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(Error::InvalidPValue { index, value });
        }
        Ok(Self { values })
    }

    /// For values already known to lie in `[0, 1]`.
    pub(crate) fn from_unchecked(values: Vec<f64>) -> Self {
        debug_assert!(!values.is_empty());
        Self { values }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Values in ascending order.
    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.values
    }
}

impl TryFrom<Vec<f64>> for PValueVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl AsRef<[f64]> for PValueVector {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

/// A real number or one of the two infinities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtendedReal {
    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::NegInf => f64::NEG_INFINITY,
            ExtendedReal::Finite(r) => r,
            ExtendedReal::PosInf => f64::INFINITY,
        }
    }
}

impl From<f64> for ExtendedReal {
    fn from(r: f64) -> Self {
        if r == f64::NEG_INFINITY {
            ExtendedReal::NegInf
        } else if r == f64::INFINITY {
            ExtendedReal::PosInf
        } else {
            ExtendedReal::Finite(r)
        }
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.to_f64().partial_cmp(&other.to_f64())
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::NegInf => f.write_str("-inf"),
            ExtendedReal::PosInf => f.write_str("inf"),
            ExtendedReal::Finite(r) => write!(f, "{r}"),
        }
    }
}

impl FromStr for ExtendedReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" | "+infinity" => Ok(ExtendedReal::PosInf),
            "-inf" | "-infinity" => Ok(ExtendedReal::NegInf),
            t => t
                .parse::<f64>()
                .ok()
                .filter(|r| !r.is_nan())
                .map(ExtendedReal::from)
                .ok_or_else(|| Error::Config(format!("cannot parse exponent {s:?}"))),
        }
    }
}

/// Nondecreasing, nonnegative order-statistic weights with a positive entry.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderWeights(Vec<f64>);

impl OrderWeights {
    /// Validates `weights` and replaces them by their running maximum.
    ///
    /// `min_i p_(i) / w_i` is unchanged by that replacement, so any
    /// nonnegative weight vector is accepted and stored in nondecreasing form.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Config("order-statistic weights are empty".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::Config(format!(
                "order-statistic weight {w} is not a nonnegative number"
            )));
        }
        if weights.iter().all(|&w| w == 0.0) {
            return Err(Error::Config("order-statistic weights are all zero".into()));
        }
        let mut running = 0.0_f64;
        let weights = weights
            .into_iter()
            .map(|w| {
                running = running.max(w);
                running
            })
            .collect();
        Ok(Self(weights))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn is_simes(&self) -> bool {
        let k = self.0.len() as f64;
        self.0.iter().enumerate().all(|(i, &w)| {
            let s = (i + 1) as f64 / k;
            (w - s).abs() <= 1e-14 * s
        })
    }
}

/// A combining function.
#[derive(Debug, Clone, PartialEq)]
pub enum MergingMethod {
    /// The minimum p-value; with the threshold `eps / K` this is the Bonferroni test.
    Bonferroni,
    GeneralizedMean(ExtendedReal),
    Cauchy,
    OrderStatistics(OrderWeights),
    Simes,
}

impl MergingMethod {
    pub const HARMONIC: MergingMethod = MergingMethod::GeneralizedMean(ExtendedReal::Finite(-1.0));
    pub const GEOMETRIC: MergingMethod = MergingMethod::GeneralizedMean(ExtendedReal::Finite(0.0));
    pub const ARITHMETIC: MergingMethod = MergingMethod::GeneralizedMean(ExtendedReal::Finite(1.0));
    pub const NEGATIVE_QUARTIC: MergingMethod =
        MergingMethod::GeneralizedMean(ExtendedReal::Finite(-4.0));

    pub fn order_statistics(weights: Vec<f64>) -> Result<Self> {
        Ok(MergingMethod::OrderStatistics(OrderWeights::new(weights)?).canonical())
    }

    /// The one representation of this function: the minimum is `Bonferroni`
    /// and weights `i/K` are `Simes`.
    pub fn canonical(&self) -> Self {
        match self {
            MergingMethod::GeneralizedMean(ExtendedReal::NegInf) => MergingMethod::Bonferroni,
            MergingMethod::GeneralizedMean(ExtendedReal::Finite(r)) if *r == 0.0 => {
                // fold -0.0 into 0.0
                MergingMethod::GEOMETRIC
            }
            MergingMethod::OrderStatistics(w) if w.is_simes() => MergingMethod::Simes,
            m => m.clone(),
        }
    }

    /// Exponent of the generalized mean, if this is one (Bonferroni is `-inf`).
    pub fn mean_exponent(&self) -> Option<ExtendedReal> {
        match self.canonical() {
            MergingMethod::Bonferroni => Some(ExtendedReal::NegInf),
            MergingMethod::GeneralizedMean(r) => Some(r),
            _ => None,
        }
    }

    /// Human-readable name used in tables.
    pub fn label(&self) -> String {
        match self.canonical() {
            MergingMethod::Bonferroni => "Bonferroni".into(),
            MergingMethod::Simes => "Simes".into(),
            MergingMethod::Cauchy => "Cauchy".into(),
            m if m == Self::HARMONIC => "Harmonic".into(),
            m if m == Self::GEOMETRIC => "Geometric".into(),
            m if m == Self::ARITHMETIC => "Arithmetic".into(),
            m if m == Self::NEGATIVE_QUARTIC => "Negative-quartic".into(),
            MergingMethod::GeneralizedMean(ExtendedReal::PosInf) => "Maximum".into(),
            m => m.to_string(),
        }
    }
}

impl fmt::Display for MergingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.canonical() {
            MergingMethod::Bonferroni => f.write_str("bonferroni"),
            MergingMethod::Simes => f.write_str("simes"),
            MergingMethod::Cauchy => f.write_str("cauchy"),
            MergingMethod::GeneralizedMean(r) => match r {
                ExtendedReal::PosInf => f.write_str("max"),
                ExtendedReal::Finite(x) if x == -1.0 => f.write_str("harmonic"),
                ExtendedReal::Finite(x) if x == 0.0 => f.write_str("geometric"),
                ExtendedReal::Finite(x) if x == 1.0 => f.write_str("arithmetic"),
                ExtendedReal::Finite(x) if x == -4.0 => f.write_str("negative-quartic"),
                r => write!(f, "mean:{r}"),
            },
            MergingMethod::OrderStatistics(w) => {
                f.write_str("order:")?;
                for (i, x) in w.as_slice().iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for MergingMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let m = match t.as_str() {
            "bonferroni" | "min" => MergingMethod::Bonferroni,
            "simes" => MergingMethod::Simes,
            "cauchy" => MergingMethod::Cauchy,
            "harmonic" => Self::HARMONIC,
            "geometric" => Self::GEOMETRIC,
            "arithmetic" => Self::ARITHMETIC,
            "negative-quartic" => Self::NEGATIVE_QUARTIC,
            "max" => MergingMethod::GeneralizedMean(ExtendedReal::PosInf),
            _ => {
                if let Some(r) = t.strip_prefix("mean:") {
                    MergingMethod::GeneralizedMean(r.parse()?)
                } else if let Some(ws) = t.strip_prefix("order:") {
                    let weights = ws
                        .split([',', ';'])
                        .map(|w| {
                            w.trim().parse::<f64>().map_err(|_| {
                                Error::Config(format!("cannot parse order weight {w:?}"))
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    return Self::order_statistics(weights);
                } else {
                    return Err(Error::Config(format!(
                        "unknown method {s:?}; expected bonferroni, simes, cauchy, harmonic, \
                         geometric, arithmetic, negative-quartic, max, mean:<r> or order:<w,...>"
                    )));
                }
            }
        };
        Ok(m.canonical())
    }
}

impl Serialize for MergingMethod {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Compensated (Neumaier) summation.
pub(crate) fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Evaluates `method` on `p`.
pub fn combine(method: &MergingMethod, p: &PValueVector) -> Result<f64> {
    match method {
        MergingMethod::Bonferroni => Ok(p.min()),
        MergingMethod::GeneralizedMean(r) => combine_mean(*r, p),
        MergingMethod::Cauchy => combine_cauchy(p),
        MergingMethod::Simes => Ok(simes(p)),
        MergingMethod::OrderStatistics(w) => combine_order_stat(w.as_slice(), p),
    }
}

/// Generalized mean `((p_1^r + ... + p_K^r) / K)^(1/r)` with the limits at
/// `r = -inf, 0, +inf` (minimum, geometric mean, maximum).
pub fn combine_mean(r: impl Into<ExtendedReal>, p: &PValueVector) -> Result<f64> {
    let values = p.as_slice();
    let lo = p.min();
    let hi = p.max();
    let r = match r.into() {
        ExtendedReal::NegInf => return Ok(lo),
        ExtendedReal::PosInf => return Ok(hi),
        ExtendedReal::Finite(r) if r.is_nan() => {
            return Err(Error::Config("generalized-mean exponent is NaN".into()))
        }
        ExtendedReal::Finite(r) => r,
    };
    let k = values.len() as f64;
    let mean = if r == 0.0 {
        if lo == 0.0 {
            return Ok(0.0);
        }
        (neumaier_sum(values.iter().map(|v| v.ln())) / k).exp()
    } else if r < 0.0 {
        if let Some(index) = values.iter().position(|&v| v == 0.0) {
            return Err(Error::CombineDomain {
                method: MergingMethod::GeneralizedMean(ExtendedReal::Finite(r)).to_string(),
                index,
                value: 0.0,
            });
        }
        // factor out the minimum: every term is in (0, 1] and one of them is 1
        lo * (neumaier_sum(values.iter().map(|v| pow(v / lo, r))) / k).powf(1.0 / r)
    } else {
        if hi == 0.0 {
            return Ok(0.0);
        }
        hi * (neumaier_sum(values.iter().map(|v| pow(v / hi, r))) / k).powf(1.0 / r)
    };
    Ok(mean.clamp(lo, hi))
}

fn pow(x: f64, r: f64) -> f64 {
    if r == r.trunc() && r.abs() <= 16.0 {
        x.powi(r as i32)
    } else {
        x.powf(r)
    }
}

/// `C(mean of C^-1(p_i))` with `C` the standard Cauchy distribution function.
pub fn combine_cauchy(p: &PValueVector) -> Result<f64> {
    if let Some((index, &value)) = p
        .as_slice()
        .iter()
        .enumerate()
        .find(|(_, &v)| v <= 0.0 || v >= 1.0)
    {
        return Err(Error::CombineDomain {
            method: "cauchy".into(),
            index,
            value,
        });
    }
    let k = p.len() as f64;
    let t = neumaier_sum(p.as_slice().iter().map(|&v| cauchy_quantile_unchecked(v))) / k;
    Ok(cauchy_cdf(t))
}

/// `min_i p_(i) / w_i` over the ascending order statistics, with `x / 0 = inf`.
pub fn combine_order_stat(weights: &[f64], p: &PValueVector) -> Result<f64> {
    if weights.len() != p.len() {
        return Err(Error::Config(format!(
            "{} order-statistic weights for {} p-values",
            weights.len(),
            p.len()
        )));
    }
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::Config("order-statistic weights must be nonnegative".into()));
    }
    if weights.iter().all(|&w| w == 0.0) {
        return Err(Error::Config("order-statistic weights are all zero".into()));
    }
    Ok(p.sorted()
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w > 0.0)
        .map(|(&v, &w)| v / w)
        .fold(f64::INFINITY, f64::min))
}

/// Simes function `min_i K p_(i) / i`.
pub fn simes(p: &PValueVector) -> f64 {
    let k = p.len() as f64;
    p.sorted()
        .iter()
        .enumerate()
        .map(|(i, &v)| k * v / (i + 1) as f64)
        .fold(f64::INFINITY, f64::min)
}

/// Harmonic number `1 + 1/2 + ... + 1/K`.
pub fn ell(k: usize) -> f64 {
    neumaier_sum((1..=k).rev().map(|i| 1.0 / i as f64))
}
