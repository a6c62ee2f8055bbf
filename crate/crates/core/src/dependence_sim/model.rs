use rand_chacha::rand_core::RngCore;
use serde::Serialize;

use super::rng::{replication_rng, standard_normal, uniform_open};
use crate::combiners::PValueVector;
use crate::error::{Error, Result};
use crate::special::normal_cdf;

/// Generator of dependent p-value vectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum DependenceModel {
    /// `p_i = Phi(rho Z + sqrt(1 - rho^2) Z_i - mu_i)` with `Z, Z_1, ..., Z_K`
    /// independent standard normals. `rho = 0` gives independence and
    /// `rho = 1` comonotonicity (when all `mu_i` agree).
    OneFactorGaussian { rho: f64, mu: Vec<f64> },
    /// With probability `lambda` independent uniforms, otherwise `K` copies
    /// of one uniform.
    IcMixture { lambda: f64, k: usize },
}

impl DependenceModel {
    pub fn one_factor(rho: f64, mu: Vec<f64>) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::Config(format!("rho = {rho} must lie in [0, 1]")));
        }
        if mu.is_empty() {
            return Err(Error::Config("signal means are empty".into()));
        }
        if let Some(m) = mu.iter().find(|m| !(m.is_finite() && **m >= 0.0)) {
            return Err(Error::Config(format!("signal mean {m} must be finite and nonnegative")));
        }
        Ok(DependenceModel::OneFactorGaussian { rho, mu })
    }

    pub fn ic_mixture(lambda: f64, k: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Config(format!("lambda = {lambda} must lie in [0, 1]")));
        }
        if k == 0 {
            return Err(Error::Config("K must be at least 1".into()));
        }
        Ok(DependenceModel::IcMixture { lambda, k })
    }

    pub fn k(&self) -> usize {
        match self {
            DependenceModel::OneFactorGaussian { mu, .. } => mu.len(),
            DependenceModel::IcMixture { k, .. } => *k,
        }
    }

    /// Overwrites `buf` with one draw.
    pub fn sample_into(&self, rng: &mut impl RngCore, buf: &mut Vec<f64>) {
        buf.clear();
        match self {
            DependenceModel::OneFactorGaussian { rho, mu } => {
                let common = rho * standard_normal(rng);
                let idio = (1.0 - rho * rho).sqrt();
                buf.extend(
                    mu.iter()
                        .map(|m| normal_cdf(common + idio * standard_normal(rng) - m)),
                );
            }
            DependenceModel::IcMixture { lambda, k } => {
                if uniform_open(rng) < *lambda {
                    buf.extend((0..*k).map(|_| uniform_open(rng)));
                } else {
                    let u = uniform_open(rng);
                    buf.resize(*k, u);
                }
            }
        }
    }
}

/// Draw number `replication` of the stream seeded by `seed`.
pub fn sample_pvalues(model: &DependenceModel, seed: u64, replication: u64) -> PValueVector {
    let mut rng = replication_rng(seed, replication);
    let mut buf = Vec::with_capacity(model.k());
    model.sample_into(&mut rng, &mut buf);
    PValueVector::from_unchecked(buf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::normal_quantile;

    #[test]
    fn validation() {
        assert!(DependenceModel::one_factor(1.5, vec![0.0]).is_err());
        assert!(DependenceModel::one_factor(0.5, vec![]).is_err());
        assert!(DependenceModel::one_factor(0.5, vec![-1.0]).is_err());
        assert!(DependenceModel::ic_mixture(-0.1, 3).is_err());
        assert!(DependenceModel::ic_mixture(0.5, 0).is_err());
    }

    #[test]
    fn comonotone_when_rho_is_one() {
        let m = DependenceModel::one_factor(1.0, vec![0.0; 5]).unwrap();
        for i in 0..100 {
            let p = sample_pvalues(&m, 9, i);
            assert!(p.as_slice().iter().all(|&v| v == p.as_slice()[0]));
        }
    }

    #[test]
    fn independent_marginal_is_uniform() {
        // one-sample KS at level 0.01 on 10^5 draws of coordinate 1
        let m = DependenceModel::one_factor(0.0, vec![0.0; 3]).unwrap();
        let n = 100_000;
        let mut xs: Vec<f64> = (0..n).map(|i| sample_pvalues(&m, 11, i).as_slice()[0]).collect();
        xs.sort_by(f64::total_cmp);
        let d = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| ((i + 1) as f64 / n as f64 - x).max(x - i as f64 / n as f64))
            .fold(0.0, f64::max);
        let crit = (-(0.005_f64).ln() / 2.0).sqrt() / (n as f64).sqrt();
        assert!(d < crit, "D = {d}, critical {crit}");
    }

    #[test]
    fn latent_correlation_is_rho_squared() {
        let m = DependenceModel::one_factor(0.5, vec![0.0; 2]).unwrap();
        let n = 200_000;
        let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let p = sample_pvalues(&m, 5, i);
            let x = normal_quantile(p.as_slice()[0]).unwrap();
            let y = normal_quantile(p.as_slice()[1]).unwrap();
            sxy += x * y;
            sxx += x * x;
            syy += y * y;
        }
        let corr = sxy / (sxx * syy).sqrt();
        // standard error about (1 - 0.25^2) / sqrt(n) = 0.0021
        assert!((corr - 0.25).abs() < 0.0065, "{corr}");
    }

    #[test]
    fn mixture_extremes() {
        let co = DependenceModel::ic_mixture(0.0, 4).unwrap();
        let p = sample_pvalues(&co, 1, 0);
        assert!(p.as_slice().iter().all(|&v| v == p.as_slice()[0]));
        let ind = DependenceModel::ic_mixture(1.0, 4).unwrap();
        let p = sample_pvalues(&ind, 1, 0);
        assert!(p.as_slice()[0] != p.as_slice()[1]);
    }
}
