//! Bradley–Terry strengths.
//!
//! For two systems the maximum-likelihood strengths are the win frequencies.
//! For more, the minorization–maximization iteration
//!
//! ```text
//! λ̂_i      = W_i / Σ_{j≠i} (ω_ij + ω_ji) / (λ_i + λ_j)
//! λ_i(t+1) = λ̂_i / Σ_k λ̂_k
//! ```
//!
//! starts from uniform strengths and stops once `‖λ(t+1) − λ(t)‖² < ε`. Every
//! step is a simultaneous update from `λ(t)`, which makes it a true MM step:
//! the log-likelihood never decreases.

use serde::{Deserialize, Serialize};

use super::{AggregateResult, Diagnostics, Mechanism};
use crate::score::distinct_pair;
use crate::{win_counts, Error, Result, ScoreMatrix, TiePolicy, WinCountMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BtConfig {
    /// Stop when the squared step norm drops below this.
    pub epsilon: f64,
    pub max_iterations: usize,
}

impl Default for BtConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-9,
            max_iterations: 10_000,
        }
    }
}

impl BtConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// Closed-form strengths for one pair: `ω_ab / n` and `ω_ba / n`.
pub fn bt_two(m: &ScoreMatrix, a: &str, b: &str, policy: TiePolicy) -> Result<AggregateResult> {
    let (ia, ib) = distinct_pair(m, a, b)?;
    let w = win_counts(&m.select_systems(&[ia, ib])?, policy);
    let n = m.n_instances() as f64;
    Ok(AggregateResult::new(
        Mechanism::Bt,
        w.systems(),
        vec![w.omega(0, 1) / n, w.omega(1, 0) / n],
        Diagnostics::BtPair {
            tie_policy: policy,
            tied_instances: w.ties(0, 1),
        },
    ))
}

/// `Σ_i Σ_{j≠i} ω_ij (ln λ_i − ln(λ_i + λ_j))`.
pub fn bt_loglik(w: &WinCountMatrix, lambda: &[f64]) -> Result<f64> {
    if lambda.len() != w.k() {
        return Err(Error::InvalidParameter(format!(
            "{} strengths for {} systems",
            lambda.len(),
            w.k()
        )));
    }
    if let Some(bad) = lambda.iter().find(|&&l| !(l > 0.0) || !l.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "strengths must be positive and finite, got {bad}"
        )));
    }
    Ok(loglik_unchecked(w, lambda))
}

fn loglik_unchecked(w: &WinCountMatrix, lambda: &[f64]) -> f64 {
    let k = w.k();
    let mut total = 0.0;
    for i in 0..k {
        for j in 0..k {
            let wij = w.omega(i, j);
            if i != j && wij > 0.0 {
                total += wij * (lambda[i].ln() - (lambda[i] + lambda[j]).ln());
            }
        }
    }
    total
}

/// `reach[i][j]`: `j` is reachable from `i` along "beat at least once" edges.
fn win_reachability(w: &WinCountMatrix) -> Vec<Vec<bool>> {
    let k = w.k();
    let mut reach: Vec<Vec<bool>> = (0..k)
        .map(|i| (0..k).map(|j| i == j || w.omega(i, j) > 0.0).collect())
        .collect();
    for via in 0..k {
        for i in 0..k {
            if reach[i][via] {
                for j in 0..k {
                    if reach[via][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    reach
}

/// Verifies that the MLE exists: every system must reach every other along
/// win edges (strong connectivity of the win graph).
pub fn check_connected(w: &WinCountMatrix) -> Result<()> {
    let k = w.k();
    let degenerate = |i: usize, reason: String| Error::DegenerateComparisons {
        system: w.systems()[i].clone(),
        reason,
    };
    for i in 0..k {
        if w.wins(i) == 0.0 {
            return Err(degenerate(i, "has no wins".into()));
        }
        if (0..k).map(|j| w.omega(j, i)).sum::<f64>() == 0.0 {
            return Err(degenerate(i, "has no losses".into()));
        }
    }
    let reach = win_reachability(w);
    for i in 0..k {
        for j in 0..k {
            if !reach[i][j] {
                return Err(degenerate(
                    j,
                    format!(
                        "is never beaten, directly or indirectly, by `{}`",
                        w.systems()[i]
                    ),
                ));
            }
        }
    }
    Ok(())
}

struct MmFit {
    lambda: Vec<f64>,
    iterations: usize,
    trace: Vec<f64>,
}

fn mm_iterate(w: &WinCountMatrix, cfg: &BtConfig, traced: bool) -> Result<MmFit> {
    cfg.validate()?;
    check_connected(w)?;
    let k = w.k();
    let wins: Vec<f64> = (0..k).map(|i| w.wins(i)).collect();
    let mut lambda = vec![1.0 / k as f64; k];
    let mut next = vec![0.0; k];
    let mut trace = Vec::new();
    if traced {
        trace.push(loglik_unchecked(w, &lambda));
    }
    let mut step = f64::INFINITY;
    for iteration in 1..=cfg.max_iterations {
        for i in 0..k {
            let mut denom = 0.0;
            for j in 0..k {
                let games = w.omega(i, j) + w.omega(j, i);
                if j != i && games > 0.0 {
                    denom += games / (lambda[i] + lambda[j]);
                }
            }
            next[i] = wins[i] / denom;
        }
        let total: f64 = next.iter().sum();
        step = 0.0;
        for i in 0..k {
            next[i] /= total;
            step += (next[i] - lambda[i]).powi(2);
        }
        std::mem::swap(&mut lambda, &mut next);
        if traced {
            trace.push(loglik_unchecked(w, &lambda));
        }
        if step < cfg.epsilon {
            return Ok(MmFit {
                lambda,
                iterations: iteration,
                trace,
            });
        }
    }
    Err(Error::NotConverged {
        iterations: cfg.max_iterations,
        residual: step,
    })
}

fn fit_result(w: &WinCountMatrix, fit: &MmFit) -> AggregateResult {
    AggregateResult::new(
        Mechanism::Bt,
        w.systems(),
        fit.lambda.clone(),
        Diagnostics::Bt {
            tie_policy: w.policy(),
            iterations: fit.iterations,
            log_likelihood: loglik_unchecked(w, &fit.lambda),
            tied_comparisons: w.total_ties(),
        },
    )
}

/// Maximum-likelihood Bradley–Terry strengths by MM, normalized to sum 1.
pub fn bt_fit(w: &WinCountMatrix, cfg: &BtConfig) -> Result<AggregateResult> {
    let fit = mm_iterate(w, cfg, false)?;
    Ok(fit_result(w, &fit))
}

/// As [`bt_fit`], also returning the log-likelihood before the first and
/// after every iteration.
pub fn bt_fit_traced(w: &WinCountMatrix, cfg: &BtConfig) -> Result<(AggregateResult, Vec<f64>)> {
    let fit = mm_iterate(w, cfg, true)?;
    Ok((fit_result(w, &fit), fit.trace))
}

/// Ordering keys (higher is better) that stay defined when the MLE does not
/// exist.
///
/// Systems are grouped into strongly connected components of the win graph.
/// Components are ordered so that no system is ever beaten by one below it;
/// within a component the keys follow that component's own MLE. This is the
/// order the strengths tend to when the likelihood's maximum sits on the
/// boundary. The keys are only meaningful as an order.
pub fn bt_order_keys(w: &WinCountMatrix, cfg: &BtConfig) -> Result<Vec<f64>> {
    let k = w.k();
    let reach = win_reachability(w);
    let mut component = vec![usize::MAX; k];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for i in 0..k {
        if component[i] == usize::MAX {
            let group: Vec<usize> = (i..k).filter(|&j| reach[i][j] && reach[j][i]).collect();
            for &j in &group {
                component[j] = members.len();
            }
            members.push(group);
        }
    }
    // A component is above another when it reaches it along win edges.
    let c = members.len();
    let reaches = |a: usize, b: usize| reach[members[a][0]][members[b][0]];
    let mut level = vec![0usize; c];
    for a in 0..c {
        level[a] = (0..c).filter(|&b| b != a && reaches(a, b) && !reaches(b, a)).count();
    }
    let mut keys = vec![0.0; k];
    for (a, group) in members.iter().enumerate() {
        let within = if group.len() == 1 {
            vec![1.0]
        } else {
            mm_iterate(&w.subset(group), cfg, false)?.lambda
        };
        for (&i, l) in group.iter().zip(within) {
            keys[i] = 2.0 * level[a] as f64 + l;
        }
    }
    Ok(keys)
}
