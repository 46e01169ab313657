//! Elo ratings with instances as rating periods.
//!
//! Within an instance every pair's expected score comes from the ratings held
//! before that instance, and the updates are summed, so the pair enumeration
//! order has no effect. The order of instances does matter, and is recorded.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{AggregateResult, Diagnostics, Mechanism};
use crate::rng::rng_from_seed;
use crate::{Error, Result, ScoreMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", content = "seed", rename_all = "snake_case")]
pub enum InstanceOrder {
    #[default]
    Given,
    Shuffled(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EloConfig {
    pub k_factor: f64,
    pub initial_rating: f64,
    pub base: f64,
    pub scale: f64,
    pub instance_order: InstanceOrder,
}

impl Default for EloConfig {
    fn default() -> Self {
        Self {
            k_factor: 20.0,
            initial_rating: 1000.0,
            base: 10.0,
            scale: 400.0,
            instance_order: InstanceOrder::Given,
        }
    }
}

impl EloConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| Err(Error::InvalidParameter(format!("{what}, got {v}")));
        if !(self.k_factor > 0.0) || !self.k_factor.is_finite() {
            return bad("Elo K factor must be positive", self.k_factor);
        }
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return bad("Elo scale must be positive", self.scale);
        }
        if !(self.base > 1.0) || !self.base.is_finite() {
            return bad("Elo base must exceed 1", self.base);
        }
        if !self.initial_rating.is_finite() {
            return bad("initial rating must be finite", self.initial_rating);
        }
        Ok(())
    }

    /// `Q_i / (Q_i + Q_j)` with `Q = base^(R / scale)`, written in a form
    /// that cannot overflow.
    fn expected(&self, ri: f64, rj: f64) -> f64 {
        1.0 / (1.0 + self.base.powf((rj - ri) / self.scale))
    }
}

pub(crate) fn instance_order(m: &ScoreMatrix, order: InstanceOrder) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..m.n_instances()).collect();
    if let InstanceOrder::Shuffled(seed) = order {
        idx.shuffle(&mut rng_from_seed(seed));
    }
    idx
}

pub(crate) fn outcome(a: f64, b: f64) -> f64 {
    if a > b {
        1.0
    } else if a < b {
        0.0
    } else {
        0.5
    }
}

pub fn elo_fit(m: &ScoreMatrix, cfg: &EloConfig) -> Result<AggregateResult> {
    cfg.validate()?;
    let k = m.n_systems();
    let order = instance_order(m, cfg.instance_order);
    let mut ratings = vec![cfg.initial_rating; k];
    let mut delta = vec![0.0; k];
    for &l in &order {
        delta.fill(0.0);
        for i in 0..k {
            for j in i + 1..k {
                let d = outcome(m.score(i, l), m.score(j, l));
                let e = cfg.expected(ratings[i], ratings[j]);
                delta[i] += cfg.k_factor * (d - e);
                delta[j] += cfg.k_factor * ((1.0 - d) - (1.0 - e));
            }
        }
        for (r, d) in ratings.iter_mut().zip(&delta) {
            *r += d;
        }
    }
    Ok(AggregateResult::new(
        Mechanism::Elo,
        m.systems(),
        ratings,
        Diagnostics::Elo {
            instance_order: order.iter().map(|&l| m.instances()[l].clone()).collect(),
        },
    ))
}
