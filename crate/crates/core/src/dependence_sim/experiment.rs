use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::model::DependenceModel;
use super::rng::replication_rng;
use crate::combiners::{combine, MergingMethod, PValueVector};
use crate::error::{Error, Result};
use crate::numfmt::format_sig;
use crate::thresholds::{
    default_methods, threshold, Mode, ModePolicy, ThresholdKind, ThresholdQuery,
};

/// Replications per grid point when none are given.
pub const DEFAULT_REPLICATIONS: usize = 15_000;

/// A merging method paired with the threshold it is tested against.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodSpec {
    pub method: MergingMethod,
    pub kind: ThresholdKind,
    pub mode: Mode,
}

impl MethodSpec {
    pub fn new(method: MergingMethod, kind: ThresholdKind) -> Self {
        Self {
            method,
            kind,
            mode: Mode::Exact,
        }
    }
}

/// The six tabulated methods under VAD, VI and VC thresholds. VI thresholds
/// of negative-exponent means follow `policy` at level `epsilon`.
pub fn default_method_specs(epsilon: f64, k: usize, policy: &ModePolicy) -> Vec<MethodSpec> {
    let mut specs = Vec::new();
    for kind in [ThresholdKind::Vad, ThresholdKind::Vi, ThresholdKind::Vc] {
        for m in default_methods() {
            let mode = match kind {
                ThresholdKind::Vi => policy.vi_mode(&m, epsilon, k),
                _ => Mode::Exact,
            };
            specs.push(MethodSpec {
                method: m,
                kind,
                mode,
            });
        }
    }
    specs
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub model: DependenceModel,
    pub methods: Vec<MethodSpec>,
    pub epsilon: f64,
    pub n: usize,
    pub master_seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RpEstimate {
    pub rp: f64,
    pub std_error: f64,
    pub n: usize,
}

impl RpEstimate {
    fn from_count(rejections: usize, n: usize) -> Self {
        let rp = rejections as f64 / n as f64;
        Self {
            rp,
            std_error: (rp * (1.0 - rp) / n as f64).sqrt(),
            n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodRp {
    pub spec: MethodSpec,
    pub threshold: f64,
    pub estimate: RpEstimate,
}

/// Fraction of replications with `F(p) < g(eps)`, for every method on the
/// same sampled vectors.
pub fn estimate_rp(config: &ExperimentConfig) -> Result<Vec<MethodRp>> {
    if config.n == 0 {
        return Err(Error::Config("N must be at least 1".into()));
    }
    if !(config.epsilon > 0.0 && config.epsilon < 1.0) {
        return Err(Error::Config(format!(
            "epsilon = {} must lie in (0, 1)",
            config.epsilon
        )));
    }
    let k = config.model.k();
    let thresholds = config
        .methods
        .iter()
        .map(|s| {
            let q = ThresholdQuery::new(s.method.clone(), s.kind, config.epsilon, k)
                .with_mode(s.mode);
            threshold(&q).map(|r| r.value)
        })
        .collect::<Result<Vec<f64>>>()?;
    let methods: Vec<MergingMethod> = config.methods.iter().map(|s| s.method.canonical()).collect();
    let m = methods.len();

    let counts = (0..config.n)
        .into_par_iter()
        .map_init(
            || Vec::with_capacity(k),
            |buf, i| -> Result<Vec<usize>> {
                let mut rng = replication_rng(config.master_seed, i as u64);
                config.model.sample_into(&mut rng, buf);
                let p = PValueVector::from_unchecked(std::mem::take(buf));
                let mut hits = vec![0usize; m];
                for (j, method) in methods.iter().enumerate() {
                    let f = combine(method, &p).map_err(|e| {
                        Error::Config(format!(
                            "replication {i} (seed {}): {method}: {e}",
                            config.master_seed
                        ))
                    })?;
                    hits[j] = usize::from(f < thresholds[j]);
                }
                *buf = p.into_inner();
                Ok(hits)
            },
        )
        .try_reduce(
            || vec![0usize; m],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;

    Ok(config
        .methods
        .iter()
        .zip(thresholds)
        .zip(counts)
        .map(|((spec, threshold), count)| MethodRp {
            spec: spec.clone(),
            threshold,
            estimate: RpEstimate::from_count(count, config.n),
        })
        .collect())
}

/// Signal configurations of the simulation study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SignalCase {
    /// All means 0.
    NoSignal,
    /// 2% of the means at 4.
    Needle,
    /// 10% of the means at 3.
    Sparse,
    /// All means at 2.
    Dense,
}

impl SignalCase {
    /// Means for `k` tests; signals occupy the leading positions.
    pub fn means(self, k: usize) -> Result<Vec<f64>> {
        let (percent, level) = match self {
            SignalCase::NoSignal => (0, 0.0),
            SignalCase::Needle => (2, 4.0),
            SignalCase::Sparse => (10, 3.0),
            SignalCase::Dense => (100, 2.0),
        };
        if (k * percent) % 100 != 0 {
            return Err(Error::Config(format!(
                "{percent}% of K = {k} is not a whole number of signals"
            )));
        }
        let signals = k * percent / 100;
        let mut mu = vec![0.0; k];
        mu[..signals].iter_mut().for_each(|m| *m = level);
        Ok(mu)
    }
}

impl fmt::Display for SignalCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignalCase::NoSignal => "no-signal",
            SignalCase::Needle => "needle",
            SignalCase::Sparse => "sparse",
            SignalCase::Dense => "dense",
        })
    }
}

impl FromStr for SignalCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "no-signal" | "none" => Ok(SignalCase::NoSignal),
            "needle" => Ok(SignalCase::Needle),
            "sparse" => Ok(SignalCase::Sparse),
            "dense" => Ok(SignalCase::Dense),
            _ => Err(Error::Config(format!(
                "unknown case {s:?}; expected no-signal, needle, sparse or dense"
            ))),
        }
    }
}

/// `0, 0.05, ..., 1`.
pub fn default_rho_grid() -> Vec<f64> {
    (0..=20).map(|i| i as f64 / 20.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub case: SignalCase,
    pub k: usize,
    pub epsilon: f64,
    pub rho_grid: Vec<f64>,
    pub methods: Vec<MethodSpec>,
    pub n: usize,
    pub seed: u64,
}

/// One point of a rejection-probability curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub case: SignalCase,
    #[serde(rename = "K")]
    pub k: usize,
    pub epsilon: f64,
    pub rho: f64,
    pub method: String,
    pub threshold_kind: ThresholdKind,
    pub rp: f64,
    pub std_error: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub seed: u64,
}

/// Rejection probabilities over `rho_grid`. Every grid point reuses the same
/// seed, so neighbouring points share their underlying normals.
pub fn sweep_rho(config: &SweepConfig) -> Result<Vec<CurvePoint>> {
    let mu = config.case.means(config.k)?;
    let mut points = Vec::new();
    for &rho in &config.rho_grid {
        let exp = ExperimentConfig {
            model: DependenceModel::one_factor(rho, mu.clone())?,
            methods: config.methods.clone(),
            epsilon: config.epsilon,
            n: config.n,
            master_seed: config.seed,
        };
        for r in estimate_rp(&exp)? {
            points.push(CurvePoint {
                case: config.case,
                k: config.k,
                epsilon: config.epsilon,
                rho,
                method: r.spec.method.to_string(),
                threshold_kind: r.spec.kind,
                rp: r.estimate.rp,
                std_error: r.estimate.std_error,
                n: r.estimate.n,
                seed: config.seed,
            });
        }
    }
    Ok(points)
}

/// Columns `case,K,epsilon,rho,method,threshold_kind,rp,std_error,N,seed`.
pub fn write_curve_csv(points: &[CurvePoint], out: impl Write, digits: usize) -> Result<()> {
    let err = |e: csv::Error| Error::Io {
        path: PathBuf::from("<csv output>"),
        detail: e.to_string(),
    };
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "case",
        "K",
        "epsilon",
        "rho",
        "method",
        "threshold_kind",
        "rp",
        "std_error",
        "N",
        "seed",
    ])
    .map_err(err)?;
    for p in points {
        w.write_record([
            p.case.to_string(),
            p.k.to_string(),
            format_sig(p.epsilon, digits),
            format_sig(p.rho, digits),
            p.method.clone(),
            p.threshold_kind.to_string(),
            format_sig(p.rp, digits),
            format_sig(p.std_error, digits),
            p.n.to_string(),
            p.seed.to_string(),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| Error::Io {
        path: PathBuf::from("<csv output>"),
        detail: e.to_string(),
    })?;
    Ok(())
}
