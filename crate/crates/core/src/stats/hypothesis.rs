//! Paired t, sign, Wilcoxon signed-rank and Mood's median tests.

use serde::{Deserialize, Serialize};

use super::dist::{binom_cdf, binom_tail, chi2_sf, normal_cdf, normal_sf, t_cdf, t_sf};
use crate::{Error, Result};

/// Largest number of non-zero differences for which the Wilcoxon null
/// distribution is computed exactly.
pub const WILCOXON_EXACT_MAX: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alternative {
    #[default]
    TwoSided,
    /// Differences tend to be positive.
    Greater,
    /// Differences tend to be negative.
    Less,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestResult {
    pub test_name: String,
    pub statistic: f64,
    pub p_value: f64,
    pub n_effective: usize,
    pub method_note: String,
    /// Set when the data made the test degenerate (zero variance, all ties).
    pub degenerate: bool,
}

impl TestResult {
    fn new(name: &str, statistic: f64, p_value: f64, n_effective: usize, note: &str) -> Self {
        Self {
            test_name: name.to_string(),
            statistic,
            p_value: p_value.clamp(0.0, 1.0),
            n_effective,
            method_note: note.to_string(),
            degenerate: false,
        }
    }

    fn degenerate(mut self) -> Self {
        self.degenerate = true;
        self
    }
}

/// Which of the four tests to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    PairedT,
    Sign,
    Wilcoxon,
    Mood,
}

impl TestKind {
    pub const ALL: [TestKind; 4] = [Self::PairedT, Self::Sign, Self::Wilcoxon, Self::Mood];

    pub fn name(self) -> &'static str {
        match self {
            Self::PairedT => "paired_t",
            Self::Sign => "sign",
            Self::Wilcoxon => "wilcoxon",
            Self::Mood => "mood",
        }
    }

    /// Runs the test on two paired samples. Paired tests use `xs - ys`.
    pub fn run(self, xs: &[f64], ys: &[f64]) -> Result<TestResult> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidParameter(format!(
                "paired samples differ in length: {} vs {}",
                xs.len(),
                ys.len()
            )));
        }
        let diffs = || xs.iter().zip(ys).map(|(x, y)| x - y).collect::<Vec<_>>();
        match self {
            Self::PairedT => paired_t_test(&diffs(), Alternative::TwoSided),
            Self::Sign => sign_test(&diffs(), Alternative::TwoSided),
            Self::Wilcoxon => wilcoxon_signed_rank(&diffs(), Alternative::TwoSided),
            Self::Mood => moods_median_test(xs, ys, false),
        }
    }
}

impl std::str::FromStr for TestKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paired_t" | "t" => Ok(Self::PairedT),
            "sign" => Ok(Self::Sign),
            "wilcoxon" => Ok(Self::Wilcoxon),
            "mood" => Ok(Self::Mood),
            _ => Err(Error::InvalidParameter(format!("unknown test `{s}`"))),
        }
    }
}

fn tail_p(lower: f64, upper: f64, alternative: Alternative) -> f64 {
    match alternative {
        Alternative::TwoSided => (2.0 * lower.min(upper)).min(1.0),
        Alternative::Greater => upper,
        Alternative::Less => lower,
    }
}

/// Paired t-test on differences, `t = mean / (sd / sqrt(n))` with `n - 1` df.
///
/// Zero-variance differences give a degenerate result: `p = 1` when the mean
/// is zero, otherwise the sign is certain and `p = 0` (in the direction of the
/// alternative).
pub fn paired_t_test(diffs: &[f64], alternative: Alternative) -> Result<TestResult> {
    const NAME: &str = "paired_t";
    let n = diffs.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "paired t-test needs at least 2 differences, got {n}"
        )));
    }
    let mean = diffs.iter().sum::<f64>() / n as f64;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let sd = var.sqrt();
    if sd == 0.0 {
        let p = match (mean.partial_cmp(&0.0), alternative) {
            (Some(std::cmp::Ordering::Equal), _) => 1.0,
            (_, Alternative::TwoSided) => 0.0,
            (Some(std::cmp::Ordering::Greater), Alternative::Greater) => 0.0,
            (Some(std::cmp::Ordering::Less), Alternative::Less) => 0.0,
            _ => 1.0,
        };
        let t = if mean == 0.0 {
            0.0
        } else {
            mean.signum() * f64::INFINITY
        };
        return Ok(TestResult::new(NAME, t, p, n, "zero variance: decision is certain").degenerate());
    }
    let t = mean / (sd / (n as f64).sqrt());
    let df = (n - 1) as f64;
    let p = tail_p(t_cdf(t, df)?, t_sf(t, df)?, alternative);
    Ok(TestResult::new(NAME, t, p, n, "t distribution"))
}

/// Exact sign test. Zero differences are dropped; the statistic is the count
/// of positive differences.
pub fn sign_test(diffs: &[f64], alternative: Alternative) -> Result<TestResult> {
    const NAME: &str = "sign";
    if diffs.is_empty() {
        return Err(Error::InsufficientData("sign test needs at least 1 difference".into()));
    }
    let positives = diffs.iter().filter(|&&d| d > 0.0).count() as u64;
    let n_eff = diffs.iter().filter(|&&d| d != 0.0).count() as u64;
    if n_eff == 0 {
        return Ok(TestResult::new(NAME, 0.0, 1.0, 0, "all differences are zero").degenerate());
    }
    let p = tail_p(
        binom_cdf(positives, n_eff, 0.5)?,
        binom_tail(positives, n_eff, 0.5)?,
        alternative,
    );
    Ok(TestResult::new(
        NAME,
        positives as f64,
        p,
        n_eff as usize,
        "exact binomial",
    ))
}

/// Average ranks (1-based) of `values`, ties sharing the mean rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Counts of sign assignments by doubled positive-rank sum.
///
/// Entry `s` is the number of the `2^n` sign vectors whose positive ranks sum
/// to `s / 2`.
fn signed_rank_null_counts(doubled_ranks: &[u64]) -> Vec<f64> {
    let total: u64 = doubled_ranks.iter().sum();
    let mut counts = vec![0.0f64; total as usize + 1];
    counts[0] = 1.0;
    let mut reach = 0usize;
    for &r in doubled_ranks {
        let r = r as usize;
        for s in (0..=reach).rev() {
            if counts[s] != 0.0 {
                counts[s + r] += counts[s];
            }
        }
        reach += r;
    }
    counts
}

/// Wilcoxon signed-rank test. Zeros dropped, average ranks for tied `|d|`,
/// statistic `W = min(W+, W-)`. Exact null distribution up to
/// [`WILCOXON_EXACT_MAX`] non-zero differences, otherwise a normal
/// approximation with tie and continuity correction.
pub fn wilcoxon_signed_rank(diffs: &[f64], alternative: Alternative) -> Result<TestResult> {
    const NAME: &str = "wilcoxon";
    if diffs.is_empty() {
        return Err(Error::InsufficientData("Wilcoxon test needs at least 1 difference".into()));
    }
    let nonzero: Vec<f64> = diffs.iter().copied().filter(|&d| d != 0.0).collect();
    let n = nonzero.len();
    if n == 0 {
        return Ok(TestResult::new(NAME, 0.0, 1.0, 0, "all differences are zero").degenerate());
    }
    let abs: Vec<f64> = nonzero.iter().map(|d| d.abs()).collect();
    let ranks = average_ranks(&abs);
    let w_plus: f64 = ranks.iter().zip(&nonzero).filter(|(_, &d)| d > 0.0).map(|(r, _)| r).sum();
    let total = (n * (n + 1)) as f64 / 2.0;
    let w_minus = total - w_plus;
    let w = w_plus.min(w_minus);

    if n <= WILCOXON_EXACT_MAX {
        let doubled: Vec<u64> = ranks.iter().map(|r| (2.0 * r).round() as u64).collect();
        let counts = signed_rank_null_counts(&doubled);
        let scale = 2f64.powi(n as i32);
        let observed = (2.0 * w_plus).round() as usize;
        let lower: f64 = counts[..=observed].iter().sum::<f64>() / scale;
        let upper: f64 = counts[observed..].iter().sum::<f64>() / scale;
        let p = tail_p(lower, upper, alternative);
        return Ok(TestResult::new(NAME, w, p, n, "exact enumeration"));
    }

    let mean = total / 2.0;
    let mut tie_term = 0.0;
    let mut sorted = abs.clone();
    sorted.sort_by(f64::total_cmp);
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        i = j;
    }
    let var = (n * (n + 1) * (2 * n + 1)) as f64 / 24.0 - tie_term / 48.0;
    if var <= 0.0 {
        return Ok(TestResult::new(NAME, w, 1.0, n, "zero variance").degenerate());
    }
    let sd = var.sqrt();
    let p = match alternative {
        Alternative::TwoSided => {
            let z = (((w_plus - mean).abs() - 0.5).max(0.0)) / sd;
            (2.0 * normal_sf(z)).min(1.0)
        }
        Alternative::Greater => normal_sf((w_plus - mean - 0.5) / sd),
        Alternative::Less => normal_cdf((w_plus - mean + 0.5) / sd),
    };
    Ok(TestResult::new(
        NAME,
        w,
        p,
        n,
        "normal approximation with tie and continuity correction",
    ))
}

/// Mood's median test: 2×2 table of counts above / not above the pooled
/// median, chi-square with 1 df. `yates` applies the continuity correction.
pub fn moods_median_test(xs: &[f64], ys: &[f64], yates: bool) -> Result<TestResult> {
    const NAME: &str = "mood";
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::InsufficientData("Mood's median test needs two non-empty samples".into()));
    }
    let mut pooled: Vec<f64> = xs.iter().chain(ys).copied().collect();
    pooled.sort_by(f64::total_cmp);
    let grand = median_sorted(&pooled);
    let above = |s: &[f64]| s.iter().filter(|&&v| v > grand).count() as f64;
    let (a, c) = (above(xs), above(ys));
    let (b, d) = (xs.len() as f64 - a, ys.len() as f64 - c);
    let n = a + b + c + d;
    let rows = [a + b, c + d];
    let cols = [a + c, b + d];
    let note = if yates { "chi-square, Yates corrected" } else { "chi-square" };
    if cols.contains(&0.0) {
        return Ok(TestResult::new(NAME, 0.0, 1.0, n as usize, "no values above the pooled median")
            .degenerate());
    }
    let mut cross = (a * d - b * c).abs();
    if yates {
        cross = (cross - n / 2.0).max(0.0);
    }
    let chi2 = n * cross * cross / (rows[0] * rows[1] * cols[0] * cols[1]);
    Ok(TestResult::new(NAME, chi2, chi2_sf(chi2, 1.0)?, n as usize, note))
}

pub(crate) fn median_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Sample median (mean of the two central values for even length).
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    median_sorted(&v)
}
