//! Synthetic evaluation setups with known latent strengths.
//!
//! Each system `j` has a latent strength `λ_j ~ U[0, 1]`. Instances are
//! split into types; on an instance of type `t` system `j` scores
//! `N(λ_j + ε_t, σ²)`, the offset `ε_t` being shared by all systems. A
//! fraction of instances then become outliers: their scores are drawn as
//! usual and shuffled among the systems.
//!
//! In [`SynthMode::PerType`] every (type, system) pair gets its own
//! `λ_{t,j} ~ U[0, 1]` instead, and the latent strength of a system is the
//! mean over types.

use indexmap::IndexMap;
use rand::seq::{index, SliceRandom};
use rand::Rng as _;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rng::{child_rng, derive_seed};
use crate::{Error, Result, ScoreMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SynthMode {
    /// One strength per system, per-type offsets shared by all systems.
    #[default]
    SharedOffset,
    /// Independent strengths per (type, system).
    PerType,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub n_types: usize,
    pub outlier_fraction: f64,
    pub n_systems: usize,
    pub n_instances: usize,
    /// Noise variance.
    pub sigma2: f64,
    /// Offsets of types other than the first are drawn from `U[0, offset_scale]`.
    pub offset_scale: f64,
    pub mode: SynthMode,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            n_types: 1,
            outlier_fraction: 0.0,
            n_systems: 5,
            n_instances: 100,
            sigma2: 1.0,
            offset_scale: 1.0,
            mode: SynthMode::SharedOffset,
            seed: 0,
        }
    }
}

impl SyntheticConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.n_types == 0 {
            return bad("n_types must be at least 1".into());
        }
        if !(0.0..1.0).contains(&self.outlier_fraction) {
            return bad(format!(
                "outlier fraction must lie in [0, 1), got {}",
                self.outlier_fraction
            ));
        }
        if self.n_systems < 2 {
            return bad(format!("need at least 2 systems, got {}", self.n_systems));
        }
        if self.n_instances == 0 {
            return bad("need at least 1 instance".into());
        }
        if !(self.sigma2 > 0.0 && self.sigma2.is_finite()) {
            return bad(format!("sigma2 must be positive, got {}", self.sigma2));
        }
        if !(self.offset_scale >= 0.0 && self.offset_scale.is_finite()) {
            return bad(format!(
                "offset_scale must be non-negative, got {}",
                self.offset_scale
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SyntheticSetup {
    pub config: SyntheticConfig,
    /// Position of this setup among the replicates of its grid cell.
    pub replicate: usize,
    #[serde(skip)]
    pub matrix: ScoreMatrix,
    pub latent: IndexMap<String, f64>,
    pub type_offsets: Vec<f64>,
    pub type_of_instance: Vec<usize>,
    /// Ids of the permuted instances, in instance order.
    pub outlier_instances: Vec<String>,
}

/// Names `s0 .. s{k-1}`, zero-padded so they sort in index order.
pub fn system_names(k: usize) -> Vec<String> {
    let width = (k.max(2) - 1).to_string().len();
    (0..k).map(|j| format!("s{j:0width$}")).collect()
}

pub fn generate_setup(cfg: &SyntheticConfig) -> Result<SyntheticSetup> {
    cfg.validate()?;
    let (k, n, types) = (cfg.n_systems, cfg.n_instances, cfg.n_types);
    let mut strength_rng = child_rng(cfg.seed, 0);
    let mut type_rng = child_rng(cfg.seed, 1);
    let mut noise_rng = child_rng(cfg.seed, 2);

    // means[t][j]: expected score of system j on type t.
    let (latent, offsets, means): (Vec<f64>, Vec<f64>, Vec<Vec<f64>>) = match cfg.mode {
        SynthMode::SharedOffset => {
            let lambda: Vec<f64> = (0..k).map(|_| strength_rng.random::<f64>()).collect();
            let offsets: Vec<f64> = (0..types)
                .map(|t| {
                    if t == 0 {
                        0.0
                    } else {
                        cfg.offset_scale * type_rng.random::<f64>()
                    }
                })
                .collect();
            let means = offsets
                .iter()
                .map(|e| lambda.iter().map(|l| l + e).collect())
                .collect();
            (lambda, offsets, means)
        }
        SynthMode::PerType => {
            let means: Vec<Vec<f64>> = (0..types)
                .map(|_| (0..k).map(|_| strength_rng.random::<f64>()).collect())
                .collect();
            let latent = (0..k)
                .map(|j| means.iter().map(|row| row[j]).sum::<f64>() / types as f64)
                .collect();
            (latent, vec![0.0; types], means)
        }
    };
    let type_of_instance: Vec<usize> = (0..n).map(|_| type_rng.random_range(0..types)).collect();
    let noise = Normal::new(0.0, cfg.sigma2.sqrt()).expect("validated variance");
    let mut rows = vec![vec![0.0; n]; k];
    for (l, &t) in type_of_instance.iter().enumerate() {
        for (j, row) in rows.iter_mut().enumerate() {
            row[l] = means[t][j] + noise.sample(&mut noise_rng);
        }
    }
    let names = system_names(k);
    let clean = ScoreMatrix::new(names.clone(), None, rows)?;
    let (matrix, outliers) = inject_outliers(&clean, cfg.outlier_fraction, derive_seed(cfg.seed, 3))?;
    Ok(SyntheticSetup {
        config: *cfg,
        replicate: 0,
        outlier_instances: outliers.iter().map(|&l| matrix.instances()[l].clone()).collect(),
        matrix,
        latent: names.into_iter().zip(latent).collect(),
        type_offsets: offsets,
        type_of_instance,
    })
}

/// Number of outlier instances for a fraction `f` of `m` instances.
pub fn outlier_count(f: f64, m: usize) -> usize {
    (f * m as f64).round() as usize
}

/// Picks `round(f·M)` instances uniformly without replacement and shuffles
/// the systems' scores on each with a uniform permutation (the identity
/// included). Returns the new matrix and the chosen instance indices in
/// increasing order.
pub fn inject_outliers(m: &ScoreMatrix, f: f64, seed: u64) -> Result<(ScoreMatrix, Vec<usize>)> {
    if !(0.0..1.0).contains(&f) {
        return Err(Error::InvalidParameter(format!(
            "outlier fraction must lie in [0, 1), got {f}"
        )));
    }
    let n = m.n_instances();
    let count = outlier_count(f, n);
    if count == 0 {
        return Ok((m.clone(), Vec::new()));
    }
    let mut rng = child_rng(seed, 0);
    let mut chosen = index::sample(&mut rng, n, count).into_vec();
    chosen.sort_unstable();
    let mut rows: Vec<Vec<f64>> = m.rows().map(<[f64]>::to_vec).collect();
    let mut column = vec![0.0; m.n_systems()];
    for &l in &chosen {
        for (s, row) in rows.iter().enumerate() {
            column[s] = row[l];
        }
        column.shuffle(&mut rng);
        for (s, row) in rows.iter_mut().enumerate() {
            row[l] = column[s];
        }
    }
    let out = ScoreMatrix::new(m.systems().to_vec(), Some(m.instances().to_vec()), rows)?;
    Ok((out, chosen))
}

/// Parameter lists whose cartesian product defines a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub n_types: Vec<usize>,
    pub outlier_fractions: Vec<f64>,
    pub n_systems: Vec<usize>,
    pub n_instances: Vec<usize>,
    pub sigma2: f64,
    pub offset_scale: f64,
    pub mode: SynthMode,
}

impl SweepGrid {
    /// 4 type counts × 3 outlier fractions × 6 system counts × 4 test-set sizes.
    pub fn full_study() -> Self {
        Self {
            n_types: vec![1, 3, 5, 10],
            outlier_fractions: vec![0.0, 0.01, 0.025],
            n_systems: vec![2, 3, 5, 10, 25, 50],
            n_instances: vec![10, 30, 100, 200],
            sigma2: 1.0,
            offset_scale: 1.0,
            mode: SynthMode::SharedOffset,
        }
    }

    pub fn n_cells(&self) -> usize {
        self.n_types.len() * self.outlier_fractions.len() * self.n_systems.len() * self.n_instances.len()
    }
}

/// Configs of every setup in a sweep: cells in grid order (types, outlier
/// fraction, systems, instances; last varying fastest), replicates
/// innermost. Setup `i` gets seed `derive_seed(master_seed, i)`.
pub fn sweep_configs(grid: &SweepGrid, replicates: usize, master_seed: u64) -> Result<Vec<(SyntheticConfig, usize)>> {
    if grid.n_cells() == 0 {
        return Err(Error::InvalidParameter("every grid parameter needs at least one value".into()));
    }
    if replicates == 0 {
        return Err(Error::InvalidParameter("replicates must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(grid.n_cells() * replicates);
    for &n_types in &grid.n_types {
        for &outlier_fraction in &grid.outlier_fractions {
            for &n_systems in &grid.n_systems {
                for &n_instances in &grid.n_instances {
                    for r in 0..replicates {
                        let cfg = SyntheticConfig {
                            n_types,
                            outlier_fraction,
                            n_systems,
                            n_instances,
                            sigma2: grid.sigma2,
                            offset_scale: grid.offset_scale,
                            mode: grid.mode,
                            seed: derive_seed(master_seed, out.len() as u64),
                        };
                        cfg.validate()?;
                        out.push((cfg, r));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Generates every setup of a sweep, in parallel.
pub fn sweep(grid: &SweepGrid, replicates: usize, master_seed: u64) -> Result<Vec<SyntheticSetup>> {
    sweep_configs(grid, replicates, master_seed)?
        .par_iter()
        .map(|(cfg, r)| {
            generate_setup(cfg).map(|mut s| {
                s.replicate = *r;
                s
            })
        })
        .collect()
}

/// Optional noisy sampling for [`fixed_marginal_pairings`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairingSampling {
    pub instances_per_type: usize,
    pub sigma2: f64,
    pub seed: u64,
}

/// Score matrices with identical per-system marginals but different pairings.
///
/// `type_means[s][t]` is the expected score of system `s` on type `t`. For
/// each permutation, the first system's type means are reassigned
/// (`column c` gets `type_means[0][perm[c]]`) while the other systems stay
/// put. Without sampling, each type is one instance scored at its mean. With
/// sampling, each type holds several noisy instances; the noise follows the
/// type mean it belongs to, so the per-system multisets of scores are the
/// same for every permutation.
pub fn fixed_marginal_pairings(
    systems: &[String],
    type_means: &[Vec<f64>],
    permutations: &[Vec<usize>],
    sampling: Option<PairingSampling>,
) -> Result<Vec<ScoreMatrix>> {
    if type_means.len() < 2 || systems.len() != type_means.len() {
        return Err(Error::InvalidParameter(format!(
            "need one row of type means per system and at least 2 systems, got {} names and {} rows",
            systems.len(),
            type_means.len()
        )));
    }
    let types = type_means[0].len();
    if types < 2 || type_means.iter().any(|r| r.len() != types) {
        return Err(Error::InvalidParameter(
            "every system needs the same number (at least 2) of type means".into(),
        ));
    }
    let (per_type, noise): (usize, Vec<Vec<Vec<f64>>>) = match sampling {
        None => (1, vec![vec![vec![0.0]; types]; systems.len()]),
        Some(s) => {
            if s.instances_per_type == 0 || !(s.sigma2 > 0.0) {
                return Err(Error::InvalidParameter(
                    "sampling needs at least one instance per type and positive variance".into(),
                ));
            }
            let dist = Normal::new(0.0, s.sigma2.sqrt()).expect("checked variance");
            let mut rng = child_rng(s.seed, 0);
            let noise = (0..systems.len())
                .map(|_| {
                    (0..types)
                        .map(|_| (0..s.instances_per_type).map(|_| dist.sample(&mut rng)).collect())
                        .collect()
                })
                .collect();
            (s.instances_per_type, noise)
        }
    };
    permutations
        .iter()
        .map(|perm| {
            let mut seen = vec![false; types];
            if perm.len() != types || perm.iter().any(|&p| p >= types || std::mem::replace(&mut seen[p], true)) {
                return Err(Error::InvalidParameter(format!(
                    "{perm:?} is not a permutation of {types} types"
                )));
            }
            let rows = (0..systems.len())
                .map(|s| {
                    let mut row = Vec::with_capacity(types * per_type);
                    for c in 0..types {
                        let t = if s == 0 { perm[c] } else { c };
                        for r in 0..per_type {
                            row.push(type_means[s][t] + noise[s][t][r]);
                        }
                    }
                    row
                })
                .collect();
            ScoreMatrix::new(systems.to_vec(), None, rows)
        })
        .collect()
}
