use anyhow::Result;
use pairrank_core::analysis::{significance_overlap, simulation_report, OverlapMatrix, SimulationReport};
use pairrank_core::rng::derive_seed;
use pairrank_core::stats::{BootstrapConfig, TestKind};
use pairrank_core::synth::{sweep, SweepGrid, SyntheticSetup};
use pairrank_core::{Mechanism, ScoreMatrix};
use serde::Serialize;

use super::{check_format, mechanisms, num};
use crate::args::{Format, SimulateArgs};
use crate::output::{create_dir, csv_artifact, json_artifact, print, shown, table, write_file, RunConfig};

/// Setups use streams `derive_seed(seed, i)` for small `i`; the report's
/// bootstrap draws from a stream far past them.
const REPORT_STREAM: u64 = 1 << 62;

#[derive(Serialize)]
struct SetupEntry<'a> {
    index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    file: Option<String>,
    #[serde(flatten)]
    setup: &'a SyntheticSetup,
}

#[derive(Serialize)]
struct Manifest<'a> {
    count: usize,
    grid: &'a SweepGrid,
    replicates: usize,
    setups: Vec<SetupEntry<'a>>,
}

pub fn run(args: &SimulateArgs) -> Result<()> {
    let format = if args.json { Format::Json } else { args.format };
    check_format(format, &[Format::Table, Format::Json, Format::Csv], "simulate")?;
    let mechs = mechanisms(&args.mechanism, &Mechanism::ALL)?;
    let grid = if args.paper_grid {
        SweepGrid {
            sigma2: args.sigma2,
            offset_scale: args.offset_scale,
            mode: args.mode.into(),
            ..SweepGrid::full_study()
        }
    } else {
        SweepGrid {
            n_types: args.types.clone(),
            outlier_fractions: args.outliers.clone(),
            n_systems: args.systems.clone(),
            n_instances: args.instances.clone(),
            sigma2: args.sigma2,
            offset_scale: args.offset_scale,
            mode: args.mode.into(),
        }
    };
    let replicates = args.replicates.unwrap_or(if args.paper_grid { 10 } else { 30 });
    let cfg = args.mechanisms.config(args.seed);
    let bootstrap = BootstrapConfig {
        resamples: args.resamples,
        level: 0.95,
        seed: derive_seed(args.seed, REPORT_STREAM),
    };
    bootstrap.validate()?;
    let run_config = RunConfig {
        subcommand: "simulate",
        inputs: Vec::new(),
        mechanisms: mechs.clone(),
        alpha: args.overlap.then_some(args.alpha),
        tie_policy: cfg.tie_policy,
        seed: args.seed,
        out_dir: Some(shown(&args.out)),
        format,
        options: serde_json::json!({
            "paper_grid": args.paper_grid,
            "grid": grid,
            "replicates": replicates,
            "aggregate": cfg,
            "bootstrap": bootstrap,
            "overlap": args.overlap,
            "write_setups": !args.no_setups,
        }),
    };

    let setups = sweep(&grid, replicates, args.seed)?;
    create_dir(&args.out)?;
    let mut entries = Vec::with_capacity(setups.len());
    if !args.no_setups {
        let dir = args.out.join("setups");
        create_dir(&dir)?;
        for (i, s) in setups.iter().enumerate() {
            let name = format!("setup_{i:05}.csv");
            write_file(&dir.join(&name), &csv_artifact(&run_config, &s.matrix.to_csv())?)?;
            entries.push(SetupEntry {
                index: i,
                file: Some(format!("setups/{name}")),
                setup: s,
            });
        }
    } else {
        entries.extend(setups.iter().enumerate().map(|(index, setup)| SetupEntry {
            index,
            file: None,
            setup,
        }));
    }
    let manifest = Manifest {
        count: setups.len(),
        grid: &grid,
        replicates,
        setups: entries,
    };
    write_file(&args.out.join("manifest.json"), &json_artifact(&run_config, &manifest)?)?;

    let report = simulation_report(&setups, &mechs, &cfg, &bootstrap)?;
    let report_csv = csv_artifact(&run_config, &report.to_csv())?;
    write_file(&args.out.join("report.csv"), &report_csv)?;
    write_file(&args.out.join("report.json"), &json_artifact(&run_config, &report)?)?;

    let overlap = if args.overlap {
        let matrices: Vec<ScoreMatrix> = setups.iter().map(|s| s.matrix.clone()).collect();
        let o = significance_overlap(&matrices, &TestKind::ALL, args.alpha)?;
        write_file(&args.out.join("overlap.csv"), &csv_artifact(&run_config, &o.to_csv())?)?;
        write_file(&args.out.join("overlap.json"), &json_artifact(&run_config, &o)?)?;
        Some(o)
    } else {
        None
    };

    match format {
        Format::Json => print(&json_artifact(&run_config, &report)?),
        Format::Csv => print(&report_csv),
        _ => print(&summary(setups.len(), &report, overlap.as_ref())),
    }
}

fn summary(count: usize, report: &SimulationReport, overlap: Option<&OverlapMatrix>) -> String {
    let rows: Vec<Vec<String>> = report
        .cells
        .iter()
        .map(|c| {
            vec![
                c.cell.n_types.to_string(),
                c.cell.outlier_fraction.to_string(),
                c.cell.n_systems.to_string(),
                c.cell.n_instances.to_string(),
                c.mechanism.to_string(),
                num(c.mean_tau),
                format!("[{}, {}]", num(c.ci_lower), num(c.ci_upper)),
            ]
        })
        .collect();
    let mut s = format!("{count} setups\n");
    s.push_str(&table(
        &["types", "outliers", "systems", "instances", "mechanism", "mean_tau", "95% ci"],
        &rows,
    ));
    if let Some(o) = overlap {
        s.push_str(&format!(
            "\nsignificance overlap at alpha {} over {} pairs (row: significant under, column: also under)\n",
            o.alpha, o.total_pairs
        ));
        let rows: Vec<Vec<String>> = o
            .tests
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let mut row = vec![t.name().to_string()];
                row.extend(o.freq[i].iter().map(|v| v.map_or("-".into(), num)));
                row
            })
            .collect();
        let mut header = vec!["test"];
        header.extend(o.tests.iter().map(|t| t.name()));
        s.push_str(&table(&header, &rows));
    }
    s
}
