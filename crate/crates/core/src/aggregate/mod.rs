//! Aggregation mechanisms and the pairwise decision procedure.

mod bt;
mod decide;
mod elo;
mod trueskill;

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

pub use bt::{bt_fit, bt_fit_traced, bt_loglik, bt_order_keys, bt_two, check_connected, BtConfig};
pub use decide::{decide, Decision, DecideConfig, PairDecision};
pub use elo::{elo_fit, EloConfig, InstanceOrder};
pub use trueskill::{trueskill_fit, trueskill_update, Outcome, Skill, TrueSkillConfig};

use crate::stats::median;
use crate::{win_counts, Error, Result, ScoreMatrix, TiePolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mechanism {
    Mean,
    Median,
    Bt,
    Elo,
    #[serde(rename = "trueskill")]
    TrueSkill,
}

impl Mechanism {
    pub const ALL: [Mechanism; 5] = [
        Self::Mean,
        Self::Median,
        Self::Bt,
        Self::Elo,
        Self::TrueSkill,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Mean => "mean",
            Self::Median => "median",
            Self::Bt => "bt",
            Self::Elo => "elo",
            Self::TrueSkill => "trueskill",
        }
    }
}

impl fmt::Display for Mechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mechanism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidParameter(format!("unknown mechanism `{s}`")))
    }
}

/// Mechanism-specific details of an aggregation run.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostics {
    None,
    /// Two-system closed form.
    BtPair {
        tie_policy: TiePolicy,
        tied_instances: usize,
    },
    Bt {
        tie_policy: TiePolicy,
        iterations: usize,
        log_likelihood: f64,
        tied_comparisons: usize,
    },
    Elo {
        instance_order: Vec<String>,
    },
    TrueSkill {
        mu: IndexMap<String, f64>,
        sigma: IndexMap<String, f64>,
    },
}

/// Per-system values under one mechanism and the induced ranking.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateResult {
    pub mechanism: Mechanism,
    pub values: IndexMap<String, f64>,
    /// Best first; systems with exactly equal values share a group.
    pub ranking: Vec<Vec<String>>,
    pub diagnostics: Diagnostics,
}

impl AggregateResult {
    pub(crate) fn new(
        mechanism: Mechanism,
        systems: &[String],
        values: Vec<f64>,
        diagnostics: Diagnostics,
    ) -> Self {
        let values: IndexMap<String, f64> = systems.iter().cloned().zip(values).collect();
        let ranking = rank_values(&values);
        Self {
            mechanism,
            values,
            ranking,
            diagnostics,
        }
    }

    /// Values in system order.
    pub fn value_vec(&self) -> Vec<f64> {
        self.values.values().copied().collect()
    }
}

/// Descending order of values; exactly equal values form a tie group, sorted
/// alphabetically inside the group.
pub fn rank_systems(r: &AggregateResult) -> Vec<Vec<String>> {
    rank_values(&r.values)
}

pub(crate) fn rank_values(values: &IndexMap<String, f64>) -> Vec<Vec<String>> {
    let mut entries: Vec<(&String, f64)> = values.iter().map(|(k, &v)| (k, v)).collect();
    entries.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let mut groups: Vec<Vec<String>> = Vec::new();
    let mut last: Option<f64> = None;
    for (name, v) in entries {
        match last {
            Some(prev) if prev == v => groups.last_mut().unwrap().push(name.clone()),
            _ => groups.push(vec![name.clone()]),
        }
        last = Some(v);
    }
    groups
}

pub fn mean_scores(m: &ScoreMatrix) -> AggregateResult {
    let n = m.n_instances() as f64;
    let values = m.rows().map(|r| r.iter().sum::<f64>() / n).collect();
    AggregateResult::new(Mechanism::Mean, m.systems(), values, Diagnostics::None)
}

pub fn median_scores(m: &ScoreMatrix) -> AggregateResult {
    let values = m.rows().map(median).collect();
    AggregateResult::new(Mechanism::Median, m.systems(), values, Diagnostics::None)
}

/// Settings for every mechanism, so callers can run any of them uniformly.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AggregateConfig {
    pub tie_policy: TiePolicy,
    pub bt: BtConfig,
    pub elo: EloConfig,
    pub trueskill: TrueSkillConfig,
}

/// Runs one mechanism. Bradley–Terry uses the closed form for two systems and
/// the MM fit otherwise.
pub fn aggregate(m: &ScoreMatrix, mechanism: Mechanism, cfg: &AggregateConfig) -> Result<AggregateResult> {
    match mechanism {
        Mechanism::Mean => Ok(mean_scores(m)),
        Mechanism::Median => Ok(median_scores(m)),
        Mechanism::Bt if m.n_systems() == 2 => {
            bt_two(m, &m.systems()[0], &m.systems()[1], cfg.tie_policy)
        }
        Mechanism::Bt => bt_fit(&win_counts(m, cfg.tie_policy), &cfg.bt),
        Mechanism::Elo => elo_fit(m, &cfg.elo),
        Mechanism::TrueSkill => trueskill_fit(m, &cfg.trueskill),
    }
}
