use rayon::prelude::*;
use serde::Serialize;

use super::disagreement::ranking_values;
use super::kendall::kendall_tau;
use crate::aggregate::AggregateConfig;
use crate::rng::derive_seed;
use crate::stats::bootstrap::mean;
use crate::stats::{bootstrap_values, BootstrapConfig};
use crate::synth::SyntheticSetup;
use crate::{Error, Mechanism, Result};

/// Grid cell of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellKey {
    pub n_types: usize,
    pub outlier_fraction: f64,
    pub n_systems: usize,
    pub n_instances: usize,
}

impl CellKey {
    pub fn of(setup: &SyntheticSetup) -> Self {
        let c = &setup.config;
        Self {
            n_types: c.n_types,
            outlier_fraction: c.outlier_fraction,
            n_systems: c.n_systems,
            n_instances: c.n_instances,
        }
    }
}

/// Kendall's τ between latent strengths and each mechanism's values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SetupTaus {
    pub taus: Vec<f64>,
    /// τ was undefined (a fully tied aggregate) and recorded as 0.
    pub undefined: Vec<bool>,
}

pub fn setup_taus(setup: &SyntheticSetup, mechanisms: &[Mechanism], cfg: &AggregateConfig) -> Result<SetupTaus> {
    let latent: Vec<f64> = setup.latent.values().copied().collect();
    let mut taus = Vec::with_capacity(mechanisms.len());
    let mut undefined = Vec::with_capacity(mechanisms.len());
    for &mech in mechanisms {
        let values = ranking_values(&setup.matrix, mech, cfg)?;
        match kendall_tau(&latent, &values) {
            Ok(t) => {
                taus.push(t);
                undefined.push(false);
            }
            Err(Error::Undefined(_)) => {
                taus.push(0.0);
                undefined.push(true);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(SetupTaus { taus, undefined })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub cell: CellKey,
    pub mechanism: Mechanism,
    pub setups: usize,
    pub mean_tau: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    pub undefined_tau: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub mechanisms: Vec<Mechanism>,
    pub bootstrap: BootstrapConfig,
    pub cells: Vec<CellSummary>,
}

impl SimulationReport {
    pub fn get(&self, cell: &CellKey, mechanism: Mechanism) -> Option<&CellSummary> {
        self.cells.iter().find(|c| c.cell == *cell && c.mechanism == mechanism)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "n_types,outlier_fraction,n_systems,n_instances,mechanism,setups,mean_tau,ci_lower,ci_upper,undefined_tau\n",
        );
        for c in &self.cells {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                c.cell.n_types,
                c.cell.outlier_fraction,
                c.cell.n_systems,
                c.cell.n_instances,
                c.mechanism,
                c.setups,
                c.mean_tau,
                c.ci_lower,
                c.ci_upper,
                c.undefined_tau
            ));
        }
        out
    }
}

/// Mean τ per grid cell and mechanism with a percentile bootstrap interval
/// over the cell's setups. Cells appear in order of first occurrence.
pub fn simulation_report(
    setups: &[SyntheticSetup],
    mechanisms: &[Mechanism],
    cfg: &AggregateConfig,
    boot: &BootstrapConfig,
) -> Result<SimulationReport> {
    boot.validate()?;
    if mechanisms.is_empty() {
        return Err(Error::InvalidParameter("no mechanisms requested".into()));
    }
    let taus: Vec<SetupTaus> = setups
        .par_iter()
        .map(|s| setup_taus(s, mechanisms, cfg))
        .collect::<Result<_>>()?;
    let mut cells: Vec<(CellKey, Vec<usize>)> = Vec::new();
    for (i, s) in setups.iter().enumerate() {
        let key = CellKey::of(s);
        match cells.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push(i),
            None => cells.push((key, vec![i])),
        }
    }
    let mut out = Vec::with_capacity(cells.len() * mechanisms.len());
    for (c, (key, members)) in cells.iter().enumerate() {
        for (mi, &mech) in mechanisms.iter().enumerate() {
            let values: Vec<f64> = members.iter().map(|&i| taus[i].taus[mi]).collect();
            let cfg = BootstrapConfig {
                seed: derive_seed(boot.seed, (c * mechanisms.len() + mi) as u64),
                ..*boot
            };
            let ci = bootstrap_values(&values, |v| Some(mean(v)), &cfg)?;
            out.push(CellSummary {
                cell: *key,
                mechanism: mech,
                setups: values.len(),
                mean_tau: mean(&values),
                ci_lower: ci.lower,
                ci_upper: ci.upper,
                undefined_tau: members.iter().filter(|&&i| taus[i].undefined[mi]).count(),
            });
        }
    }
    Ok(SimulationReport {
        mechanisms: mechanisms.to_vec(),
        bootstrap: *boot,
        cells: out,
    })
}
