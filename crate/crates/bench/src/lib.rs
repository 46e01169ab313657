//! Inputs shared by the benchmarks in `benches/`.

use pairrank_core::synth::{generate_setup, SyntheticConfig};
use pairrank_core::{win_counts, ScoreMatrix, TiePolicy, WinCountMatrix};

/// A seeded synthetic score matrix with `k` systems and `n` instances.
pub fn scores(k: usize, n: usize, seed: u64) -> ScoreMatrix {
    let cfg = SyntheticConfig {
        n_systems: k,
        n_instances: n,
        n_types: 3,
        seed,
        ..Default::default()
    };
    generate_setup(&cfg).expect("valid config").matrix
}

/// Win counts of [`scores`]; large `n` keeps the win graph strongly connected.
pub fn wins(k: usize, n: usize, seed: u64) -> WinCountMatrix {
    win_counts(&scores(k, n, seed), TiePolicy::HalfWin)
}

/// Paired differences of the first two systems of [`scores`].
pub fn differences(n: usize, seed: u64) -> Vec<f64> {
    let m = scores(2, n, seed);
    m.row(0).iter().zip(m.row(1)).map(|(a, b)| a - b).collect()
}
