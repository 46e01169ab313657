//! Paired aggregation of per-instance evaluation scores.
//!
//! Systems are compared on a shared test set through a [`ScoreMatrix`]
//! (systems × instances). The crate provides:
//!
//! * aggregation mechanisms ([`aggregate`]): mean, median, Bradley–Terry
//!   (closed form for two systems, minorization–maximization for more),
//!   Elo and TrueSkill, plus the pairwise decision procedure [`decide`];
//! * paired and unpaired significance tests with bootstrap intervals
//!   ([`stats`]);
//! * synthetic evaluation setups with latent strengths, type offsets and
//!   permutation outliers ([`synth`]);
//! * rank correlation, cross-mechanism disagreement, significance overlap,
//!   pair-plot data and independence-of-irrelevant-alternatives scanning
//!   ([`analysis`]).
//!
//! ```
//! use pairrank_core::{ScoreMatrix, aggregate::{bt_two, mean_scores}, TiePolicy};
//!
//! let m = ScoreMatrix::new(
//!     vec!["S".into(), "B".into()],
//!     None,
//!     vec![vec![1.0, 5.0, 10.0, 12.0, 17.0], vec![2.0, 6.0, 7.0, 13.0, 18.0]],
//! )?;
//! let mean = mean_scores(&m);
//! assert_eq!(mean.ranking[0], vec!["B".to_string()]);
//! let bt = bt_two(&m, "S", "B", TiePolicy::HalfWin)?;
//! assert_eq!(bt.values["S"], 0.2);
//! # Ok::<(), pairrank_core::Error>(())
//! ```

// `!(x > 0.0)` is the NaN-rejecting form used in parameter checks, and
// index loops read more clearly than iterator chains in the matrix code.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod aggregate;
pub mod analysis;
mod error;
pub mod rng;
pub mod score;
pub mod stats;
pub mod synth;

pub use aggregate::{
    decide, rank_systems, AggregateResult, BtConfig, Decision, DecideConfig, EloConfig,
    Mechanism, PairDecision, TrueSkillConfig,
};
pub use error::{Error, Result};
pub use score::{
    paired_differences, parse_scores, win_counts, InputFormat, PairedDifferences, ScoreMatrix,
    TiePolicy, WinCountMatrix,
};

/// Version of the JSON/CSV artifact layouts produced by this crate.
pub const SCHEMA_VERSION: u32 = 1;
