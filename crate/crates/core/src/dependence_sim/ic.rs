use rayon::prelude::*;
use serde::Serialize;

use super::rng::{replication_rng, uniform_open};
use crate::combiners::{combine, MergingMethod, PValueVector};
use crate::error::{Error, Result};

/// Two-sample comparison of `F` under independence and under comonotonicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IcCheck {
    pub ks_statistic: f64,
    pub critical_value: f64,
    pub level: f64,
    /// The KS test does not reject equality of the two distributions.
    pub balanced: bool,
}

/// Sup-distance between the empirical distribution functions of `a` and `b`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0_f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic two-sample critical value `sqrt(-log(level/2)/2) sqrt((n+m)/(n m))`.
pub fn ks_critical_value(level: f64, n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    (-(level / 2.0).ln() / 2.0).sqrt() * ((n + m) / (n * m)).sqrt()
}

/// Samples `F(V_1, ..., V_K)` with independent uniforms and `F(U, ..., U)`
/// `n` times each and compares the two samples at `level`.
pub fn ic_balance_check(
    method: &MergingMethod,
    k: usize,
    n: usize,
    seed: u64,
    level: f64,
) -> Result<IcCheck> {
    if k == 0 || n == 0 {
        return Err(Error::Config("ic-check needs K >= 1 and N >= 1".into()));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Config(format!("level = {level} must lie in (0, 1)")));
    }
    let method = method.canonical();
    let draw = |comonotone: bool| -> Result<Vec<f64>> {
        (0..n)
            .into_par_iter()
            .map(|i| {
                // the two samples use disjoint streams
                let stream = if comonotone { n + i } else { i };
                let mut rng = replication_rng(seed, stream as u64);
                let values = if comonotone {
                    vec![uniform_open(&mut rng); k]
                } else {
                    (0..k).map(|_| uniform_open(&mut rng)).collect()
                };
                combine(&method, &PValueVector::from_unchecked(values))
            })
            .collect()
    };
    let independent = draw(false)?;
    let comonotone = draw(true)?;
    let ks_statistic = ks_two_sample(&independent, &comonotone);
    let critical_value = ks_critical_value(level, n, n);
    Ok(IcCheck {
        ks_statistic,
        critical_value,
        level,
        balanced: ks_statistic <= critical_value,
    })
}
