//! Percentile bootstrap over instances.

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rng::{child_rng, derive_seed};
use crate::{Error, Result, ScoreMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub resamples: usize,
    pub level: f64,
    pub seed: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            resamples: 1000,
            level: 0.95,
            seed: 0,
        }
    }
}

impl BootstrapConfig {
    pub fn validate(&self) -> Result<()> {
        if self.resamples < 100 {
            return Err(Error::InvalidParameter(format!(
                "bootstrap needs at least 100 resamples, got {}",
                self.resamples
            )));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "confidence level must lie in (0, 1), got {}",
                self.level
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BootstrapInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub resamples: usize,
    pub seed: u64,
    /// Resamples drawn again because the statistic was undefined on them.
    pub redraws: usize,
    /// Statistic on the original sample.
    pub estimate: Option<f64>,
}

/// Resampled statistic values, one per resample, in resample order.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapSample {
    pub values: Vec<f64>,
    pub redraws: usize,
}

/// Draws `cfg.resamples` index vectors of length `n` with replacement and
/// evaluates `statistic` on each. `None` from the statistic redraws that
/// resample; more than `10 * resamples` redraws in total is an error.
///
/// Resample `r` uses its own generator derived from `(seed, r)`, so the
/// output does not depend on the rayon thread count.
pub fn bootstrap_distribution<F>(n: usize, statistic: F, cfg: &BootstrapConfig) -> Result<BootstrapSample>
where
    F: Fn(&[usize]) -> Option<f64> + Sync,
{
    cfg.validate()?;
    if n == 0 {
        return Err(Error::InsufficientData("cannot bootstrap an empty sample".into()));
    }
    let limit = 10 * cfg.resamples;
    let draws: Vec<(Option<f64>, usize)> = (0..cfg.resamples)
        .into_par_iter()
        .map(|r| {
            let stream = derive_seed(cfg.seed, r as u64);
            let mut idx = vec![0usize; n];
            for attempt in 0..=limit {
                let mut rng = child_rng(stream, attempt as u64);
                for slot in idx.iter_mut() {
                    *slot = rng.random_range(0..n);
                }
                if let Some(v) = statistic(&idx).filter(|v| v.is_finite()) {
                    return (Some(v), attempt);
                }
            }
            (None, limit + 1)
        })
        .collect();
    let redraws: usize = draws.iter().map(|(_, a)| a).sum();
    if redraws > limit || draws.iter().any(|(v, _)| v.is_none()) {
        return Err(Error::BootstrapExhausted { redraws });
    }
    Ok(BootstrapSample {
        values: draws.into_iter().filter_map(|(v, _)| v).collect(),
        redraws,
    })
}

/// Linear-interpolation quantile of sorted values.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}

/// Percentile interval of a statistic over resampled instance indices.
pub fn bootstrap_ci<F>(n: usize, statistic: F, cfg: &BootstrapConfig) -> Result<BootstrapInterval>
where
    F: Fn(&[usize]) -> Option<f64> + Sync,
{
    let all: Vec<usize> = (0..n).collect();
    let estimate = if n > 0 { statistic(&all) } else { None };
    let sample = bootstrap_distribution(n, statistic, cfg)?;
    let mut sorted = sample.values;
    sorted.sort_by(f64::total_cmp);
    let alpha = 1.0 - cfg.level;
    Ok(BootstrapInterval {
        lower: quantile_sorted(&sorted, alpha / 2.0),
        upper: quantile_sorted(&sorted, 1.0 - alpha / 2.0),
        level: cfg.level,
        resamples: cfg.resamples,
        seed: cfg.seed,
        redraws: sample.redraws,
        estimate,
    })
}

/// Bootstrap interval of a statistic of a plain sample.
pub fn bootstrap_values<F>(values: &[f64], statistic: F, cfg: &BootstrapConfig) -> Result<BootstrapInterval>
where
    F: Fn(&[f64]) -> Option<f64> + Sync,
{
    bootstrap_ci(
        values.len(),
        |idx| {
            let v: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
            statistic(&v)
        },
        cfg,
    )
}

/// Bootstrap interval of a statistic of a score matrix; every resample keeps
/// whole instances (all systems' scores on a drawn instance travel together).
pub fn bootstrap_matrix<F>(m: &ScoreMatrix, statistic: F, cfg: &BootstrapConfig) -> Result<BootstrapInterval>
where
    F: Fn(&ScoreMatrix) -> Option<f64> + Sync,
{
    bootstrap_ci(
        m.n_instances(),
        |idx| m.resample_instances(idx).ok().and_then(|r| statistic(&r)),
        cfg,
    )
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}
