use rayon::prelude::*;
use serde::Serialize;

use crate::stats::TestKind;
use crate::{Error, Result, ScoreMatrix};

/// How often the tests agree on significance.
///
/// Off the diagonal, `freq[i][j]` is the share of pairs significant under
/// test `i` that are also significant under test `j`; it is `None` when no
/// pair is significant under test `i`. The diagonal holds each test's
/// overall significance rate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapMatrix {
    pub tests: Vec<TestKind>,
    pub alpha: f64,
    pub total_pairs: usize,
    pub significant: Vec<usize>,
    /// `joint[i][j]`: pairs significant under both tests.
    pub joint: Vec<Vec<usize>>,
    pub freq: Vec<Vec<Option<f64>>>,
}

impl OverlapMatrix {
    pub fn base_rate(&self, i: usize) -> f64 {
        self.significant[i] as f64 / self.total_pairs as f64
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("test");
        for t in &self.tests {
            out.push(',');
            out.push_str(t.name());
        }
        out.push('\n');
        for (i, t) in self.tests.iter().enumerate() {
            out.push_str(t.name());
            for v in &self.freq[i] {
                out.push(',');
                if let Some(v) = v {
                    out.push_str(&v.to_string());
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Runs every test on every unordered system pair of every matrix.
pub fn significance_overlap(setups: &[ScoreMatrix], tests: &[TestKind], alpha: f64) -> Result<OverlapMatrix> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if tests.is_empty() {
        return Err(Error::InvalidParameter("no tests requested".into()));
    }
    if setups.is_empty() {
        return Err(Error::InsufficientData("no setups to compare".into()));
    }
    let pairs: Vec<(usize, usize, usize)> = setups
        .iter()
        .enumerate()
        .flat_map(|(s, m)| {
            let k = m.n_systems();
            (0..k).flat_map(move |i| (i + 1..k).map(move |j| (s, i, j)))
        })
        .collect();
    let flags: Vec<Vec<bool>> = pairs
        .par_iter()
        .map(|&(s, i, j)| {
            let m = &setups[s];
            tests
                .iter()
                .map(|t| t.run(m.row(i), m.row(j)).map(|r| r.p_value < alpha))
                .collect::<Result<Vec<bool>>>()
        })
        .collect::<Result<_>>()?;
    let n = tests.len();
    let mut significant = vec![0usize; n];
    let mut joint = vec![vec![0usize; n]; n];
    for f in &flags {
        for i in 0..n {
            if f[i] {
                significant[i] += 1;
                for j in 0..n {
                    if f[j] {
                        joint[i][j] += 1;
                    }
                }
            }
        }
    }
    let total = pairs.len();
    let freq = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Some(significant[i] as f64 / total as f64)
                    } else if significant[i] == 0 {
                        None
                    } else {
                        Some(joint[i][j] as f64 / significant[i] as f64)
                    }
                })
                .collect()
        })
        .collect();
    Ok(OverlapMatrix {
        tests: tests.to_vec(),
        alpha,
        total_pairs: total,
        significant,
        joint,
        freq,
    })
}
