use anyhow::Result;
use pairrank_core::aggregate::aggregate;
use pairrank_core::analysis::{disagreement_from_values, DisagreementReport};
use pairrank_core::{win_counts, AggregateResult, Mechanism};
use serde::Serialize;

use super::{check_format, load, mechanisms, num};
use crate::args::{AggregateArgs, Format};
use crate::output::{csv_artifact, csv_field, emit, json_artifact, shown, table, RunConfig};

#[derive(Serialize)]
struct AggregateOutput {
    systems: Vec<String>,
    n_instances: usize,
    /// Tied pairwise comparisons across all system pairs.
    tied_comparisons: usize,
    results: Vec<AggregateResult>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    disagreement: Vec<DisagreementReport>,
}

pub fn run(args: &AggregateArgs) -> Result<()> {
    let format = args.output.format();
    check_format(format, &[Format::Table, Format::Json, Format::Csv], "aggregate")?;
    let mechs = mechanisms(&args.mechanism, &Mechanism::ALL)?;
    let cfg = args.mechanisms.config(args.seed);
    let run_config = RunConfig {
        subcommand: "aggregate",
        inputs: vec![shown(&args.input.input)],
        mechanisms: mechs.clone(),
        alpha: None,
        tie_policy: cfg.tie_policy,
        seed: args.seed,
        out_dir: args.output.out.as_deref().map(shown),
        format,
        options: serde_json::json!({ "aggregate": cfg }),
    };

    let m = load(&args.input)?;
    let results = mechs
        .iter()
        .map(|&mech| aggregate(&m, mech, &cfg))
        .collect::<pairrank_core::Result<Vec<_>>>()?;
    let mut disagreement = Vec::new();
    for i in 0..results.len() {
        for j in i + 1..results.len() {
            disagreement.push(disagreement_from_values(
                (results[i].mechanism, &results[i].values),
                (results[j].mechanism, &results[j].values),
            ));
        }
    }
    let tied = win_counts(&m, cfg.tie_policy).total_ties();
    if tied > 0 {
        eprintln!(
            "note: {tied} tied pairwise comparisons, counted with tie policy {}",
            serde_json::to_value(cfg.tie_policy)?.as_str().unwrap_or_default()
        );
    }
    let out = AggregateOutput {
        systems: m.systems().to_vec(),
        n_instances: m.n_instances(),
        tied_comparisons: tied,
        results,
        disagreement,
    };

    let text = match format {
        Format::Json => json_artifact(&run_config, &out)?,
        Format::Csv => csv_artifact(&run_config, &to_csv(&out))?,
        _ => to_table(&out),
    };
    emit(args.output.out.as_ref(), "aggregate", format, &text)
}

fn ranked(r: &AggregateResult) -> Vec<(usize, &String, f64)> {
    let mut rows = Vec::new();
    let mut rank = 1;
    for group in &r.ranking {
        for name in group {
            rows.push((rank, name, r.values[name]));
        }
        rank += group.len();
    }
    rows
}

fn to_csv(out: &AggregateOutput) -> String {
    let mut s = String::from("mechanism,rank,system,value\n");
    for r in &out.results {
        for (rank, name, v) in ranked(r) {
            s.push_str(&format!("{},{rank},{},{v}\n", r.mechanism, csv_field(name)));
        }
    }
    s
}

fn to_table(out: &AggregateOutput) -> String {
    let mut s = format!(
        "{} systems, {} instances, {} tied comparisons\n",
        out.systems.len(),
        out.n_instances,
        out.tied_comparisons
    );
    for r in &out.results {
        s.push_str(&format!("\n[{}]\n", r.mechanism));
        let rows: Vec<Vec<String>> = ranked(r)
            .into_iter()
            .map(|(rank, name, v)| vec![rank.to_string(), name.clone(), num(v)])
            .collect();
        s.push_str(&table(&["rank", "system", "value"], &rows));
    }
    if !out.disagreement.is_empty() {
        s.push_str("\n[disagreement]\n");
        let rows: Vec<Vec<String>> = out
            .disagreement
            .iter()
            .map(|d| {
                vec![
                    format!("{}/{}", d.mechanisms.0, d.mechanisms.1),
                    num(d.pair_disagreement),
                    d.sota_differs.to_string(),
                    d.top3_differs.to_string(),
                ]
            })
            .collect();
        s.push_str(&table(&["mechanisms", "pairs", "sota_differs", "top3_differs"], &rows));
    }
    s
}
