use std::cmp::Ordering;

use indexmap::IndexMap;
use serde::Serialize;

use crate::aggregate::{aggregate, bt_order_keys, AggregateConfig};
use crate::{win_counts, Error, Mechanism, Result, ScoreMatrix};

/// How differently two mechanisms order the same systems.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisagreementReport {
    pub mechanisms: (Mechanism, Mechanism),
    /// Share of unordered pairs ordered oppositely; a tie against a strict
    /// order counts one half.
    pub pair_disagreement: f64,
    pub sota_differs: bool,
    pub top3_differs: bool,
    pub sota: (Vec<String>, Vec<String>),
    pub top3: (Vec<String>, Vec<String>),
    /// A tie group straddled the top-1 or top-3 boundary under either
    /// mechanism, so the sets were cut alphabetically inside that group.
    pub top_ambiguous: bool,
}

/// Values whose order is the mechanism's ranking of the systems.
///
/// For Bradley–Terry with more than two systems and a win graph where the
/// MLE does not exist, the component order of
/// [`bt_order_keys`](crate::aggregate::bt_order_keys) is used.
pub fn ranking_values(m: &ScoreMatrix, mechanism: Mechanism, cfg: &AggregateConfig) -> Result<Vec<f64>> {
    match aggregate(m, mechanism, cfg) {
        Ok(r) => Ok(r.value_vec()),
        Err(Error::DegenerateComparisons { .. }) if mechanism == Mechanism::Bt => {
            bt_order_keys(&win_counts(m, cfg.tie_policy), &cfg.bt)
        }
        Err(e) => Err(e),
    }
}

pub fn disagreement(m: &ScoreMatrix, a: Mechanism, b: Mechanism, cfg: &AggregateConfig) -> Result<DisagreementReport> {
    let va = ranking_values(m, a, cfg)?;
    let vb = ranking_values(m, b, cfg)?;
    let names = m.systems();
    Ok(disagreement_from_values(
        (a, &names.iter().cloned().zip(va).collect()),
        (b, &names.iter().cloned().zip(vb).collect()),
    ))
}

/// Top `k` systems by value; ties cut alphabetically. The flag reports
/// whether the cut fell inside a tie group.
fn top_k(values: &IndexMap<String, f64>, k: usize) -> (Vec<String>, bool) {
    let groups = crate::aggregate::rank_values(values);
    let mut out = Vec::new();
    let mut ambiguous = false;
    for g in groups {
        if out.len() >= k {
            break;
        }
        let room = k - out.len();
        ambiguous |= g.len() > room;
        out.extend(g.into_iter().take(room));
    }
    out.sort();
    (out, ambiguous)
}

/// Compares two value maps over the same systems (matched by name).
pub fn disagreement_from_values(
    a: (Mechanism, &IndexMap<String, f64>),
    b: (Mechanism, &IndexMap<String, f64>),
) -> DisagreementReport {
    let names: Vec<&String> = a.1.keys().collect();
    let mut score = 0.0;
    let mut pairs = 0usize;
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            let oa = a.1[names[i]].total_cmp(&a.1[names[j]]);
            let ob = b.1[names[i]].total_cmp(&b.1[names[j]]);
            score += match (oa, ob) {
                (x, y) if x == y => 0.0,
                (Ordering::Equal, _) | (_, Ordering::Equal) => 0.5,
                _ => 1.0,
            };
            pairs += 1;
        }
    }
    let (sota_a, amb1) = top_k(a.1, 1);
    let (sota_b, amb2) = top_k(b.1, 1);
    let (top_a, amb3) = top_k(a.1, 3);
    let (top_b, amb4) = top_k(b.1, 3);
    DisagreementReport {
        mechanisms: (a.0, b.0),
        pair_disagreement: if pairs == 0 { 0.0 } else { score / pairs as f64 },
        sota_differs: sota_a != sota_b,
        top3_differs: top_a != top_b,
        sota: (sota_a, sota_b),
        top3: (top_a, top_b),
        top_ambiguous: amb1 || amb2 || amb3 || amb4,
    }
}
