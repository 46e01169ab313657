//! Two-player TrueSkill: Gaussian skill beliefs updated by the analytic
//! truncated-Gaussian moment match after every pairwise outcome.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{AggregateResult, Diagnostics, Mechanism};
use crate::stats::{normal_cdf, normal_quantile};
use crate::stats::dist::normal_pdf;
use crate::{Error, Result, ScoreMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrueSkillConfig {
    pub mu0: f64,
    pub sigma0: f64,
    /// Performance noise.
    pub beta: f64,
    /// Dynamics noise, added to each variance before an update.
    pub tau: f64,
    pub draw_probability: f64,
}

impl Default for TrueSkillConfig {
    fn default() -> Self {
        let mu0 = 25.0;
        Self {
            mu0,
            sigma0: mu0 / 3.0,
            beta: mu0 / 6.0,
            tau: mu0 / 300.0,
            draw_probability: 0.1,
        }
    }
}

impl TrueSkillConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !self.mu0.is_finite() {
            return bad(format!("mu0 must be finite, got {}", self.mu0));
        }
        if !(self.sigma0 > 0.0 && self.sigma0.is_finite()) {
            return bad(format!("sigma0 must be positive, got {}", self.sigma0));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return bad(format!("beta must be positive, got {}", self.beta));
        }
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            return bad(format!("tau must be non-negative, got {}", self.tau));
        }
        if !(0.0..1.0).contains(&self.draw_probability) {
            return bad(format!(
                "draw probability must lie in [0, 1), got {}",
                self.draw_probability
            ));
        }
        Ok(())
    }

    /// Performance-difference margin below which a game counts as a draw.
    pub fn draw_margin(&self) -> f64 {
        let z = normal_quantile((self.draw_probability + 1.0) / 2.0).unwrap_or(0.0);
        z * std::f64::consts::SQRT_2 * self.beta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Skill {
    pub mu: f64,
    pub sigma: f64,
}

impl Skill {
    /// `μ − 3σ`.
    pub fn conservative(&self) -> f64 {
        self.mu - 3.0 * self.sigma
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    FirstWins,
    SecondWins,
    Draw,
}

/// Mean and variance corrections for a win by margin `t` against draw margin `e`.
fn win_vw(t: f64, e: f64) -> (f64, f64) {
    let x = t - e;
    let denom = normal_cdf(x);
    if denom < f64::MIN_POSITIVE {
        return (-x, 1.0);
    }
    let v = normal_pdf(x) / denom;
    (v, v * (v + x))
}

fn draw_vw(t: f64, e: f64) -> (f64, f64) {
    let denom = normal_cdf(e - t) - normal_cdf(-e - t);
    if denom < f64::MIN_POSITIVE {
        let v = if t < 0.0 { -t - e } else { -t + e };
        return (v, 1.0);
    }
    let v = (normal_pdf(-e - t) - normal_pdf(e - t)) / denom;
    let w = v * v + ((e - t) * normal_pdf(e - t) + (e + t) * normal_pdf(e + t)) / denom;
    (v, w)
}

/// One game between `a` and `b`.
pub fn trueskill_update(a: Skill, b: Skill, result: Outcome, cfg: &TrueSkillConfig) -> (Skill, Skill) {
    let var_a = a.sigma * a.sigma + cfg.tau * cfg.tau;
    let var_b = b.sigma * b.sigma + cfg.tau * cfg.tau;
    let c2 = 2.0 * cfg.beta * cfg.beta + var_a + var_b;
    let c = c2.sqrt();
    let e = cfg.draw_margin() / c;
    let (winner, loser, var_w, var_l, draw) = match result {
        Outcome::FirstWins => (a, b, var_a, var_b, false),
        Outcome::SecondWins => (b, a, var_b, var_a, false),
        Outcome::Draw => (a, b, var_a, var_b, true),
    };
    let t = (winner.mu - loser.mu) / c;
    let (v, w) = if draw { draw_vw(t, e) } else { win_vw(t, e) };
    let new_w = Skill {
        mu: winner.mu + var_w / c * v,
        sigma: (var_w * (1.0 - var_w / c2 * w)).sqrt(),
    };
    let new_l = Skill {
        mu: loser.mu - var_l / c * v,
        sigma: (var_l * (1.0 - var_l / c2 * w)).sqrt(),
    };
    match result {
        Outcome::SecondWins => (new_l, new_w),
        _ => (new_w, new_l),
    }
}

/// Rates systems by playing every pair on every instance, instances in input
/// order and pairs in system-name order.
pub fn trueskill_fit(m: &ScoreMatrix, cfg: &TrueSkillConfig) -> Result<AggregateResult> {
    cfg.validate()?;
    let k = m.n_systems();
    let mut by_name: Vec<usize> = (0..k).collect();
    by_name.sort_by(|&i, &j| m.systems()[i].cmp(&m.systems()[j]));
    let mut skills = vec![
        Skill {
            mu: cfg.mu0,
            sigma: cfg.sigma0,
        };
        k
    ];
    for l in 0..m.n_instances() {
        for (x, &i) in by_name.iter().enumerate() {
            for &j in &by_name[x + 1..] {
                let result = match m.score(i, l).partial_cmp(&m.score(j, l)) {
                    Some(Ordering::Greater) => Outcome::FirstWins,
                    Some(Ordering::Less) => Outcome::SecondWins,
                    _ => Outcome::Draw,
                };
                let (si, sj) = trueskill_update(skills[i], skills[j], result, cfg);
                skills[i] = si;
                skills[j] = sj;
            }
        }
    }
    let names = m.systems();
    Ok(AggregateResult::new(
        Mechanism::TrueSkill,
        names,
        skills.iter().map(Skill::conservative).collect(),
        Diagnostics::TrueSkill {
            mu: names.iter().cloned().zip(skills.iter().map(|s| s.mu)).collect(),
            sigma: names.iter().cloned().zip(skills.iter().map(|s| s.sigma)).collect(),
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fresh(cfg: &TrueSkillConfig) -> Skill {
        Skill {
            mu: cfg.mu0,
            sigma: cfg.sigma0,
        }
    }

    #[test]
    fn one_win_matches_reference() {
        let cfg = TrueSkillConfig::default();
        assert!((cfg.draw_margin() - 0.7404665874521482).abs() < 1e-12);
        let (a, b) = trueskill_update(fresh(&cfg), fresh(&cfg), Outcome::FirstWins, &cfg);
        assert!((a.mu - 29.395831692991514).abs() < 1e-9);
        assert!((b.mu - 20.604168307008486).abs() < 1e-9);
        assert!((a.sigma - 7.171475807009221).abs() < 1e-9);
        assert!((b.sigma - a.sigma).abs() < 1e-12);
        let (b2, a2) = trueskill_update(fresh(&cfg), fresh(&cfg), Outcome::SecondWins, &cfg);
        assert_eq!((a2, b2), (a, b));
    }

    #[test]
    fn draw_between_fresh_systems() {
        let cfg = TrueSkillConfig::default();
        let (a, b) = trueskill_update(fresh(&cfg), fresh(&cfg), Outcome::Draw, &cfg);
        assert!((a.mu - 25.0).abs() < 1e-12 && (b.mu - 25.0).abs() < 1e-12);
        assert!((a.sigma - 6.457515683245051).abs() < 1e-9);
    }

    #[test]
    fn extreme_mismatch_stays_finite() {
        let cfg = TrueSkillConfig::default();
        let strong = Skill { mu: 400.0, sigma: 1.0 };
        let weak = Skill { mu: -400.0, sigma: 1.0 };
        for r in [Outcome::FirstWins, Outcome::SecondWins, Outcome::Draw] {
            let (a, b) = trueskill_update(strong, weak, r, &cfg);
            assert!(a.mu.is_finite() && b.mu.is_finite() && a.sigma > 0.0 && b.sigma > 0.0);
        }
    }

    #[test]
    fn fit_reports_conservative_values() {
        let m = ScoreMatrix::new(
            vec!["A".into(), "B".into()],
            None,
            vec![vec![2.0], vec![1.0]],
        )
        .unwrap();
        let r = trueskill_fit(&m, &TrueSkillConfig::default()).unwrap();
        assert!((r.values["A"] - (29.395831692991514 - 3.0 * 7.171475807009221)).abs() < 1e-9);
        assert_eq!(r.ranking[0], vec!["A".to_string()]);
        let bad = TrueSkillConfig { draw_probability: 1.0, ..Default::default() };
        assert!(trueskill_fit(&m, &bad).is_err());
    }
}
