//! Repeatedly merge, then drop the smallest p-value, until the merged
//! p-value is no longer significant.
//!
//! At each step the merged value `F` of the remaining `K - n` p-values is
//! turned into an adjusted p-value `g^-1(F)`, where `g` is the threshold
//! function for the current `K - n`. With the Bonferroni combiner and its
//! VAD threshold this is the Holm step-down procedure.
//!
//! Boundary rules: a remaining p-value of exactly 0 gives `F = 0` and an
//! adjusted value of 0 for the Cauchy combination and negative-exponent
//! means, whose combiners are undefined there. A remaining 1 (and no 0)
//! gives the Cauchy combination `F = 1`.

use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::combiners::{combine, ell, ExtendedReal, MergingMethod, PValueVector};
use crate::error::{Error, Result};
use crate::numfmt::format_sig;
use crate::special::{bisect, gamma_q, RootBracket};
use crate::thresholds::{threshold, Mode, ThresholdKind, ThresholdQuery};

/// Layout of a p-value file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputFormat {
    /// One value per line; blank lines and `#` comments are skipped and a
    /// non-numeric first line is taken as a header.
    Text,
    /// CSV with a header row; values are read from the named column.
    Csv { column: String },
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        detail: e.to_string(),
    }
}

fn parse_value(path: &Path, line: usize, field: &str) -> Result<f64> {
    let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
        path: path.to_path_buf(),
        line,
        detail: format!("cannot parse {:?} as a number", field.trim()),
    })?;
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line,
            detail: format!("p-value {v} outside [0, 1]"),
        });
    }
    Ok(v)
}

/// Reads p-values in file order.
pub fn ingest_pvalues(path: &Path, format: &InputFormat) -> Result<PValueVector> {
    let file = std::fs::File::open(path).map_err(|e| io_error(path, e))?;
    let mut values = Vec::new();
    match format {
        InputFormat::Text => {
            for (i, line) in BufReader::new(file).lines().enumerate() {
                let line = line.map_err(|e| io_error(path, e))?;
                let t = line.trim();
                if t.is_empty() || t.starts_with('#') {
                    continue;
                }
                if values.is_empty() && i == 0 && t.parse::<f64>().is_err() {
                    continue;
                }
                values.push(parse_value(path, i + 1, t)?);
            }
        }
        InputFormat::Csv { column } => {
            let mut rdr = csv::ReaderBuilder::new()
                .trim(csv::Trim::All)
                .from_reader(file);
            let headers = rdr.headers().map_err(|e| io_error(path, e))?.clone();
            let idx = headers.iter().position(|h| h == column).ok_or_else(|| Error::Parse {
                path: path.to_path_buf(),
                line: 1,
                detail: format!("no column named {column:?}"),
            })?;
            for record in rdr.records() {
                let record = record.map_err(|e| io_error(path, e))?;
                let line = record.position().map_or(0, |p| p.line() as usize);
                let field = record.get(idx).ok_or_else(|| Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    detail: format!("missing column {column:?}"),
                })?;
                values.push(parse_value(path, line, field)?);
            }
        }
    }
    if values.is_empty() {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            detail: "no p-values found".into(),
        });
    }
    PValueVector::new(values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Step {
    pub n_removed: usize,
    #[serde(rename = "K_remaining")]
    pub k_remaining: usize,
    pub combined: f64,
    pub adjusted: f64,
    pub significant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequentialReport {
    pub steps: Vec<Step>,
    /// Index of the first non-significant step, or the number of p-values
    /// when every step was significant.
    pub stop_index: usize,
}

impl SequentialReport {
    /// Columns `n_removed,K_remaining,combined,adjusted,significant`.
    pub fn write_csv(&self, out: impl Write, digits: usize) -> Result<()> {
        let path = PathBuf::from("<csv output>");
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n_removed", "K_remaining", "combined", "adjusted", "significant"])
            .map_err(|e| io_error(&path, e))?;
        for s in &self.steps {
            w.write_record([
                s.n_removed.to_string(),
                s.k_remaining.to_string(),
                format_sig(s.combined, digits),
                format_sig(s.adjusted, digits),
                s.significant.to_string(),
            ])
            .map_err(|e| io_error(&path, e))?;
        }
        w.flush().map_err(|e| io_error(&path, e))?;
        Ok(())
    }
}

/// Inverse of the threshold function `eps -> g(eps)` for fixed method, kind,
/// mode and `K`, capped at 1.
#[derive(Debug, Clone)]
pub struct AdjustedPValue {
    method: MergingMethod,
    kind: ThresholdKind,
    mode: Mode,
    k: usize,
}

impl AdjustedPValue {
    pub fn new(method: &MergingMethod, kind: ThresholdKind, mode: Mode, k: usize) -> Result<Self> {
        let method = method.canonical();
        if matches!(mode, Mode::MonteCarlo { .. }) {
            return Err(Error::ModeUnavailable {
                method: method.to_string(),
                kind: "adjusted p-value",
                mode: mode.to_string(),
            });
        }
        Ok(Self { method, kind, mode, k })
    }

    fn g(&self, eps: f64) -> Result<f64> {
        let q = ThresholdQuery::new(self.method.clone(), self.kind, eps, self.k).with_mode(self.mode);
        Ok(threshold(&q)?.value)
    }

    fn is_linear(&self) -> bool {
        match self.kind {
            ThresholdKind::Vc => true,
            ThresholdKind::Vad => self.method != MergingMethod::Cauchy || self.k == 1,
            ThresholdKind::Vi => match &self.method {
                MergingMethod::Simes | MergingMethod::Cauchy => true,
                MergingMethod::GeneralizedMean(ExtendedReal::Finite(r)) => {
                    *r < 0.0 && self.mode == Mode::SmallEpsAsymptotic
                }
                _ => false,
            },
        }
    }

    /// `g^-1(f)`, capped at 1.
    pub fn adjust(&self, f: f64) -> Result<f64> {
        if f <= 0.0 {
            return Ok(0.0);
        }
        if self.k == 1 {
            // a single p-value is its own merged value at every level
            return Ok(f.min(1.0));
        }
        let kf = self.k as f64;
        let vi = self.kind == ThresholdKind::Vi;
        let vad = self.kind == ThresholdKind::Vad;
        let value = if vad && self.method == MergingMethod::Bonferroni {
            // g(e) = e / K; multiply rather than divide by 1/K so the result
            // is the plain step-down product
            f * kf
        } else if vad && self.method == MergingMethod::Simes {
            f * ell(self.k)
        } else if self.is_linear() {
            let slope = self.g(0.25)? / 0.25;
            f / slope
        } else if vi && self.method == MergingMethod::Bonferroni {
            // g(e) = 1 - (1-e)^(1/K)
            if f >= 1.0 {
                1.0
            } else {
                -(kf * (-f).ln_1p()).exp_m1()
            }
        } else if vi && self.method == MergingMethod::GEOMETRIC {
            // P(chi2_{2K} >= -2K log f)
            if f >= 1.0 {
                1.0
            } else {
                gamma_q(kf, -kf * f.ln())
            }
        } else if vi && self.method == MergingMethod::GeneralizedMean(ExtendedReal::PosInf) {
            f.powf(kf)
        } else if let (true, Mode::MaximumTail, Some(ExtendedReal::Finite(r))) =
            (vi, self.mode, self.method.mean_exponent())
        {
            // g(e) = (1 - (1-e)^(1/K)) K^(-1/r)
            let s = f * kf.powf(1.0 / r);
            if s >= 1.0 {
                1.0
            } else {
                -(kf * (-s).ln_1p()).exp_m1()
            }
        } else {
            self.bisect(f)?
        };
        Ok(value.min(1.0))
    }

    // g is increasing; solve g(e) = f on log e.
    fn bisect(&self, f: f64) -> Result<f64> {
        // largest level at which the threshold can be evaluated
        let half = self.method == MergingMethod::Cauchy && self.kind == ThresholdKind::Vad;
        let limit = if half { 0.5 } else { 1.0 };
        let (top, g_top) = [1e-12, 1e-9, 1e-6, 1e-4, 1e-3, 1e-2, 0.1, 0.5]
            .iter()
            .map(|gap| limit * (1.0 - gap))
            .find_map(|e| self.g(e).ok().filter(|v| v.is_finite() && *v > 0.0).map(|v| (e, v)))
            .ok_or_else(|| Error::domain("adjusted p-value", "threshold undefined near the top level"))?;
        if f >= g_top {
            return Ok(1.0);
        }
        let (bottom, g_bottom) = [1e-200, 1e-100, 1e-30, 1e-15, 1e-10]
            .iter()
            .find_map(|&e| self.g(e).ok().filter(|v| *v > 0.0).map(|v| (e, v)))
            .ok_or_else(|| Error::domain("adjusted p-value", "threshold undefined near level 0"))?;
        if f <= g_bottom {
            // thresholds are linear to leading order as eps -> 0
            return Ok(bottom * f / g_bottom);
        }
        let h = |u: f64| match self.g(u.exp()) {
            Ok(v) => v - f,
            Err(_) => f64::NAN,
        };
        let bracket = RootBracket::from_values(bottom.ln(), top.ln(), g_bottom - f, g_top - f)?;
        Ok(bisect(h, bracket, 1e-13)?.exp())
    }
}

/// Runs the removal loop at level `epsilon`.
pub fn run_sequential(
    p: &PValueVector,
    method: &MergingMethod,
    kind: ThresholdKind,
    epsilon: f64,
    mode: Mode,
) -> Result<SequentialReport> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::domain(
            "run_sequential",
            format!("epsilon = {epsilon} must lie in (0, 1)"),
        ));
    }
    let method = method.canonical();
    if let MergingMethod::OrderStatistics(_) = method {
        return Err(Error::Config(
            "order-statistic weights are tied to one K; use simes or bonferroni".into(),
        ));
    }
    let undefined_at_zero = method == MergingMethod::Cauchy
        || matches!(method.mean_exponent(), Some(ExtendedReal::Finite(r)) if r < 0.0);
    let sorted = p.sorted();
    let total = sorted.len();
    let mut steps = Vec::new();
    let mut stop_index = total;
    for n in 0..total {
        let rest = &sorted[n..];
        let k = rest.len();
        let (combined, adjusted) = if undefined_at_zero && rest[0] == 0.0 {
            (0.0, 0.0)
        } else {
            let combined = if method == MergingMethod::Cauchy && rest[k - 1] == 1.0 {
                1.0
            } else {
                combine(&method, &PValueVector::from_unchecked(rest.to_vec()))?
            };
            let adjusted = AdjustedPValue::new(&method, kind, mode, k)?.adjust(combined)?;
            (combined, adjusted)
        };
        let significant = adjusted < epsilon;
        steps.push(Step {
            n_removed: n,
            k_remaining: k,
            combined,
            adjusted,
            significant,
        });
        if !significant {
            stop_index = n;
            break;
        }
    }
    Ok(SequentialReport { steps, stop_index })
}
