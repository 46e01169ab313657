//! The pairwise decision: first system better, second better, or inconclusive.

use serde::{Deserialize, Serialize};

use super::Mechanism;
use crate::score::distinct_pair;
use crate::stats::bootstrap::{bootstrap_distribution, quantile_sorted};
use crate::stats::{median, paired_t_test, sign_test, Alternative, BootstrapConfig};
use crate::{win_counts, Error, Result, ScoreMatrix, TiePolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    First,
    Second,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairDecision {
    pub pair: (String, String),
    pub mechanism: Mechanism,
    /// Positive when the first system looks better.
    pub statistic: f64,
    pub p_value: f64,
    pub alpha: f64,
    pub decision: Decision,
    /// Test used and any special handling.
    pub note: String,
    /// Percentile interval of the statistic, for the bootstrap test.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DecideConfig {
    pub tie_policy: TiePolicy,
    /// Resampling settings for the median test; the level is taken from alpha.
    pub bootstrap: BootstrapConfig,
}

struct Outcome {
    statistic: f64,
    p_value: f64,
    note: String,
    interval: Option<(f64, f64)>,
}

/// Decides between `a` and `b` at level `alpha`.
///
/// * mean: paired t-test, statistic = mean difference;
/// * bt: exact sign test, statistic = `f_{a>b} − 0.5` where `f_{a>b}` is the
///   share of `a`'s wins among the decided comparisons;
/// * median: paired bootstrap of `M_a − M_b`, two-sided percentile p-value.
pub fn decide(
    m: &ScoreMatrix,
    a: &str,
    b: &str,
    mechanism: Mechanism,
    alpha: f64,
    cfg: &DecideConfig,
) -> Result<PairDecision> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let (ia, ib) = distinct_pair(m, a, b)?;
    let (xa, xb) = (m.row(ia), m.row(ib));
    let diffs: Vec<f64> = xa.iter().zip(xb).map(|(x, y)| x - y).collect();
    let out = match mechanism {
        Mechanism::Mean => {
            let t = paired_t_test(&diffs, Alternative::TwoSided)?;
            Outcome {
                statistic: diffs.iter().sum::<f64>() / diffs.len() as f64,
                p_value: t.p_value,
                note: format!("paired t-test ({})", t.method_note),
                interval: None,
            }
        }
        Mechanism::Bt => {
            let s = sign_test(&diffs, Alternative::TwoSided)?;
            let w = win_counts(&m.select_systems(&[ia, ib])?, cfg.tie_policy);
            let decided = w.omega(0, 1) + w.omega(1, 0);
            let statistic = if decided > 0.0 {
                w.omega(0, 1) / decided - 0.5
            } else {
                0.0
            };
            Outcome {
                statistic,
                p_value: s.p_value,
                note: format!("sign test ({}, {} non-tied)", s.method_note, s.n_effective),
                interval: None,
            }
        }
        Mechanism::Median => median_bootstrap(xa, xb, alpha, &cfg.bootstrap)?,
        Mechanism::Elo | Mechanism::TrueSkill => {
            return Err(Error::InvalidParameter(format!(
                "no significance test is defined for {mechanism}; use mean, median or bt"
            )))
        }
    };
    let decision = if out.p_value >= alpha || out.statistic == 0.0 {
        Decision::Inconclusive
    } else if out.statistic > 0.0 {
        Decision::First
    } else {
        Decision::Second
    };
    Ok(PairDecision {
        pair: (a.to_string(), b.to_string()),
        mechanism,
        statistic: out.statistic,
        p_value: out.p_value,
        alpha,
        decision,
        note: out.note,
        interval: out.interval,
    })
}

/// The p-value is twice the share of resampled differences on the far side
/// of zero from the observed one, so `p < alpha` exactly when the
/// `1 − alpha` percentile interval excludes zero (up to interpolation).
fn median_bootstrap(xa: &[f64], xb: &[f64], alpha: f64, cfg: &BootstrapConfig) -> Result<Outcome> {
    let statistic = median(xa) - median(xb);
    let bcfg = BootstrapConfig {
        level: 1.0 - alpha,
        ..*cfg
    };
    let sample = bootstrap_distribution(
        xa.len(),
        |idx| {
            let ra: Vec<f64> = idx.iter().map(|&i| xa[i]).collect();
            let rb: Vec<f64> = idx.iter().map(|&i| xb[i]).collect();
            Some(median(&ra) - median(&rb))
        },
        &bcfg,
    )?;
    let mut sorted = sample.values;
    sorted.sort_by(f64::total_cmp);
    let r = sorted.len() as f64;
    let interval = Some((
        quantile_sorted(&sorted, alpha / 2.0),
        quantile_sorted(&sorted, 1.0 - alpha / 2.0),
    ));
    if statistic == 0.0 {
        return Ok(Outcome {
            statistic,
            p_value: 1.0,
            note: "paired bootstrap of median difference (observed difference is zero)".into(),
            interval,
        });
    }
    let far = if statistic > 0.0 {
        sorted.iter().filter(|&&v| v <= 0.0).count()
    } else {
        sorted.iter().filter(|&&v| v >= 0.0).count()
    };
    Ok(Outcome {
        statistic,
        p_value: (2.0 * far as f64 / r).min(1.0),
        note: format!(
            "paired bootstrap of median difference ({} resamples, seed {})",
            bcfg.resamples, bcfg.seed
        ),
        interval,
    })
}
