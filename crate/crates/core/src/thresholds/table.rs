//! Tables of prices for validity.

use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use super::{positive_exponent_bound, price_for_validity, Assumption, Mode, ThresholdKind};
use crate::combiners::{ExtendedReal, MergingMethod};
use crate::error::{Error, Result};
use crate::numfmt::format_sig;

pub const DEFAULT_KS: [usize; 4] = [50, 100, 200, 400];

/// Row order of the standard prices table.
pub fn default_methods() -> Vec<MergingMethod> {
    vec![
        MergingMethod::Bonferroni,
        MergingMethod::NEGATIVE_QUARTIC,
        MergingMethod::Simes,
        MergingMethod::Cauchy,
        MergingMethod::HARMONIC,
        MergingMethod::GEOMETRIC,
    ]
}

/// Chooses the VI mode per cell. Everything with an exact form uses it;
/// negative exponents use `small` when `eps <= small_eps_cutoff` and
/// `moderate` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModePolicy {
    pub moderate: Mode,
    pub small: Mode,
    pub small_eps_cutoff: f64,
}

impl Default for ModePolicy {
    fn default() -> Self {
        Self {
            moderate: Mode::MaximumTail,
            small: Mode::SmallEpsAsymptotic,
            small_eps_cutoff: 1e-4,
        }
    }
}

impl ModePolicy {
    /// Same mode for every negative-exponent cell.
    pub fn uniform(mode: Mode) -> Self {
        Self {
            moderate: mode,
            small: mode,
            small_eps_cutoff: 0.0,
        }
    }

    pub fn vi_mode(&self, method: &MergingMethod, eps: f64, k: usize) -> Mode {
        match method.mean_exponent() {
            Some(ExtendedReal::Finite(r)) if r < 0.0 => {
                if eps <= self.small_eps_cutoff {
                    self.small
                } else {
                    self.moderate
                }
            }
            Some(ExtendedReal::Finite(r)) if r > 0.0 => match positive_exponent_bound(r, k) {
                Ok(bound) if eps <= bound => Mode::Exact,
                _ => Mode::LargeKAsymptotic,
            },
            _ => Mode::Exact,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableCell {
    pub method: String,
    pub label: String,
    #[serde(rename = "K")]
    pub k: usize,
    pub epsilon: f64,
    /// VI for `b/a`, VC for `c/a`.
    pub kind: ThresholdKind,
    pub value: Option<f64>,
    pub mode: String,
    pub diagnostics: String,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PriceTable {
    pub epsilon: f64,
    pub ks: Vec<usize>,
    pub labels: Vec<String>,
    pub cells: Vec<TableCell>,
}

fn csv_error(e: impl std::fmt::Display) -> Error {
    Error::Io {
        path: PathBuf::from("<csv output>"),
        detail: e.to_string(),
    }
}

fn cell(method: &MergingMethod, eps: f64, k: usize, kind: ThresholdKind, policy: &ModePolicy) -> TableCell {
    let assumption = match kind {
        ThresholdKind::Vc => Assumption::Comonotonicity,
        _ => Assumption::Independence,
    };
    let mode = policy.vi_mode(method, eps, k);
    let price = price_for_validity(method, eps, k, assumption, mode);
    let (value, mode, diagnostics, error) = match price {
        Ok(p) => (
            Some(p.ratio),
            p.numerator.mode_used.to_string(),
            p.numerator.diagnostics.render(6),
            None,
        ),
        Err(e) => (None, mode.to_string(), String::new(), Some(e.to_string())),
    };
    TableCell {
        method: method.to_string(),
        label: method.label(),
        k,
        epsilon: eps,
        kind,
        value,
        mode,
        diagnostics,
        error,
    }
}

/// Prices `b/a` (VI) and `c/a` (VC) for every method and `K`.
///
/// A cell that cannot be computed carries its error; the rest of the table is
/// still filled.
pub fn generate_table(
    epsilon: f64,
    ks: &[usize],
    methods: &[MergingMethod],
    policy: &ModePolicy,
) -> Result<PriceTable> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::domain(
            "generate_table",
            format!("epsilon = {epsilon} must lie in (0, 1)"),
        ));
    }
    if ks.is_empty() || methods.is_empty() {
        return Err(Error::Config("table needs at least one K and one method".into()));
    }
    let jobs: Vec<(&MergingMethod, usize, ThresholdKind)> = methods
        .iter()
        .flat_map(|m| {
            ks.iter()
                .flat_map(move |&k| [(m, k, ThresholdKind::Vi), (m, k, ThresholdKind::Vc)])
        })
        .collect();
    let cells = jobs
        .par_iter()
        .map(|&(m, k, kind)| cell(m, epsilon, k, kind, policy))
        .collect();
    Ok(PriceTable {
        epsilon,
        ks: ks.to_vec(),
        labels: methods.iter().map(|m| m.label()).collect(),
        cells,
    })
}

impl PriceTable {
    pub fn get(&self, label: &str, k: usize, kind: ThresholdKind) -> Option<&TableCell> {
        self.cells
            .iter()
            .find(|c| c.label == label && c.k == k && c.kind == kind)
    }

    /// One row per cell: `method,K,epsilon,kind,value,mode,diagnostics`.
    pub fn write_csv(&self, out: impl Write, digits: usize) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["method", "K", "epsilon", "kind", "value", "mode", "diagnostics"])
            .map_err(csv_error)?;
        for c in &self.cells {
            let value = c.value.map(|v| format_sig(v, digits)).unwrap_or_default();
            let diagnostics = match &c.error {
                Some(e) => format!("error: {e}"),
                None => c.diagnostics.clone(),
            };
            w.write_record([
                c.method.clone(),
                c.k.to_string(),
                format_sig(c.epsilon, digits),
                c.kind.to_string(),
                value,
                c.mode.clone(),
                diagnostics,
            ])
            .map_err(csv_error)?;
        }
        w.flush().map_err(csv_error)?;
        Ok(())
    }

    /// The printed layout: one row per method, `b/a` and `c/a` for each `K`.
    pub fn write_wide_csv(&self, out: impl Write, decimals: usize) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["method".to_string()];
        for k in &self.ks {
            header.push(format!("b/a K={k}"));
            header.push(format!("c/a K={k}"));
        }
        w.write_record(&header).map_err(csv_error)?;
        for label in &self.labels {
            let mut row = vec![label.clone()];
            for &k in &self.ks {
                for kind in [ThresholdKind::Vi, ThresholdKind::Vc] {
                    let v = self
                        .get(label, k, kind)
                        .and_then(|c| c.value)
                        .map(|v| format!("{v:.decimals$}"))
                        .unwrap_or_else(|| "NA".into());
                    row.push(v);
                }
            }
            w.write_record(&row).map_err(csv_error)?;
        }
        w.flush().map_err(csv_error)?;
        Ok(())
    }
}

/// `price / log K` under independence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogKRow {
    pub method: String,
    pub label: String,
    pub epsilon: f64,
    #[serde(rename = "K")]
    pub k: usize,
    pub value: Option<f64>,
    pub mode: String,
    pub error: Option<String>,
}

pub fn generate_log_k_table(
    epsilons: &[f64],
    ks: &[usize],
    methods: &[MergingMethod],
    policy: &ModePolicy,
) -> Vec<LogKRow> {
    let jobs: Vec<(&MergingMethod, f64, usize)> = methods
        .iter()
        .flat_map(|m| {
            epsilons
                .iter()
                .flat_map(move |&e| ks.iter().map(move |&k| (m, e, k)))
        })
        .collect();
    jobs.par_iter()
        .map(|&(m, eps, k)| {
            let mode = policy.vi_mode(m, eps, k);
            let price = price_for_validity(m, eps, k, Assumption::Independence, mode);
            let (value, mode, error) = match price {
                Ok(p) => (
                    Some(p.ratio / (k as f64).ln()),
                    p.numerator.mode_used.to_string(),
                    None,
                ),
                Err(e) => (None, mode.to_string(), Some(e.to_string())),
            };
            LogKRow {
                method: m.to_string(),
                label: m.label(),
                epsilon: eps,
                k,
                value,
                mode,
                error,
            }
        })
        .collect()
}

/// `method,epsilon,K,value,mode` with the error text in `value` for failed rows.
pub fn write_log_k_csv(rows: &[LogKRow], out: impl Write, digits: usize) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["method", "epsilon", "K", "value", "mode"])
        .map_err(csv_error)?;
    for r in rows {
        let value = match (&r.value, &r.error) {
            (Some(v), _) => format_sig(*v, digits),
            (None, Some(e)) => format!("error: {e}"),
            (None, None) => String::new(),
        };
        w.write_record([
            r.method.clone(),
            format_sig(r.epsilon, digits),
            r.k.to_string(),
            value,
            r.mode.clone(),
        ])
        .map_err(csv_error)?;
    }
    w.flush().map_err(csv_error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_shape_and_known_cells() {
        let t = generate_table(0.01, &DEFAULT_KS, &default_methods(), &ModePolicy::default()).unwrap();
        assert_eq!(t.cells.len(), 6 * 4 * 2);
        let v = |label: &str, k, kind| t.get(label, k, kind).unwrap().value.unwrap();
        assert!((v("Simes", 50, ThresholdKind::Vi) - 4.499).abs() < 5e-4);
        assert!((v("Bonferroni", 200, ThresholdKind::Vc) - 200.0).abs() < 1e-9);
        assert!((v("Negative-quartic", 100, ThresholdKind::Vc) - 42.164).abs() < 5e-4);
        assert!((v("Harmonic", 50, ThresholdKind::Vi) - 6.658).abs() < 5e-4);
    }

    #[test]
    fn failing_cells_do_not_abort() {
        let t = generate_table(0.01, &[2, 50], &[MergingMethod::GEOMETRIC], &ModePolicy::default()).unwrap();
        assert!(t.get("Geometric", 2, ThresholdKind::Vi).unwrap().error.is_some());
        assert!(t.get("Geometric", 50, ThresholdKind::Vi).unwrap().value.is_some());
        let mut buf = Vec::new();
        t.write_csv(&mut buf, 6).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("method,K,epsilon,kind,value,mode,diagnostics\n"));
        assert!(text.contains("error:"));
    }

    #[test]
    fn policy_switches_at_small_eps() {
        let p = ModePolicy::default();
        assert_eq!(p.vi_mode(&MergingMethod::HARMONIC, 1e-4, 50), Mode::SmallEpsAsymptotic);
        assert_eq!(p.vi_mode(&MergingMethod::HARMONIC, 0.01, 50), Mode::MaximumTail);
        assert_eq!(p.vi_mode(&MergingMethod::Simes, 0.01, 50), Mode::Exact);
        assert_eq!(p.vi_mode(&MergingMethod::ARITHMETIC, 0.01, 50), Mode::LargeKAsymptotic);
    }
}
