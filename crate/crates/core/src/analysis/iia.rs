use serde::Serialize;

use crate::aggregate::{bt_fit, bt_two};
use crate::{win_counts, BtConfig, Result, ScoreMatrix, TiePolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairOrder {
    FirstAhead,
    SecondAhead,
    Tie,
}

/// One pair whose Bradley–Terry order changed when the third system joined.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairChange {
    pub pair: (String, String),
    pub alone: PairOrder,
    pub in_triple: PairOrder,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IiaViolation {
    pub triple: [String; 3],
    pub changes: Vec<PairChange>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedTriple {
    pub triple: [String; 3],
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct IiaScan {
    pub violations: Vec<IiaViolation>,
    pub skipped: Vec<SkippedTriple>,
}

fn order(a: f64, b: f64, tol: f64) -> PairOrder {
    if (a - b).abs() <= tol {
        PairOrder::Tie
    } else if a > b {
        PairOrder::FirstAhead
    } else {
        PairOrder::SecondAhead
    }
}

/// Checks every triple for pairs whose strict Bradley–Terry order, fitted on
/// the pair alone, flips or collapses to a tie once the third system is
/// fitted alongside. Triple strengths closer than `√epsilon` count as tied;
/// triples where the MLE does not exist are skipped and listed.
pub fn iia_scan(m: &ScoreMatrix, cfg: &BtConfig, policy: TiePolicy) -> Result<IiaScan> {
    cfg.validate()?;
    let k = m.n_systems();
    let names = m.systems();
    let tol = cfg.epsilon.sqrt();
    let mut scan = IiaScan::default();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                let idx = [a, b, c];
                let triple = idx.map(|i| names[i].clone());
                let sub = m.select_systems(&idx)?;
                let fit = match bt_fit(&win_counts(&sub, policy), cfg) {
                    Ok(r) => r.value_vec(),
                    Err(e) => {
                        scan.skipped.push(SkippedTriple {
                            triple,
                            reason: e.to_string(),
                        });
                        continue;
                    }
                };
                let mut changes = Vec::new();
                for (x, y) in [(0, 1), (0, 2), (1, 2)] {
                    let (nx, ny) = (&triple[x], &triple[y]);
                    let two = bt_two(&sub, nx, ny, policy)?;
                    let alone = order(two.values[nx.as_str()], two.values[ny.as_str()], 0.0);
                    let in_triple = order(fit[x], fit[y], tol);
                    if alone != PairOrder::Tie && in_triple != alone {
                        changes.push(PairChange {
                            pair: (nx.clone(), ny.clone()),
                            alone,
                            in_triple,
                        });
                    }
                }
                if !changes.is_empty() {
                    scan.violations.push(IiaViolation { triple, changes });
                }
            }
        }
    }
    Ok(scan)
}
