use anyhow::Result;
use pairrank_core::analysis::{iia_scan, IiaScan, PairOrder};
use pairrank_core::{BtConfig, Mechanism, TiePolicy};

use super::{check_format, load};
use crate::args::{Format, ScanArgs};
use crate::output::{csv_artifact, csv_field, emit, json_artifact, shown, table, RunConfig};

pub fn run(args: &ScanArgs) -> Result<()> {
    let format = args.output.format();
    check_format(format, &[Format::Table, Format::Json, Format::Csv], "scan")?;
    let tie_policy: TiePolicy = args.tie_policy.into();
    let bt = BtConfig {
        epsilon: args.bt_epsilon,
        max_iterations: args.bt_max_iterations,
    };
    let run_config = RunConfig {
        subcommand: "scan",
        inputs: vec![shown(&args.input.input)],
        mechanisms: vec![Mechanism::Bt],
        alpha: None,
        tie_policy,
        seed: 0,
        out_dir: args.output.out.as_deref().map(shown),
        format,
        options: serde_json::json!({ "bt": bt }),
    };

    let m = load(&args.input)?;
    let scan = iia_scan(&m, &bt, tie_policy)?;
    let text = match format {
        Format::Json => json_artifact(&run_config, &scan)?,
        Format::Csv => csv_artifact(&run_config, &to_csv(&scan))?,
        _ => to_table(&scan),
    };
    emit(args.output.out.as_ref(), "scan", format, &text)
}

fn order(o: PairOrder) -> &'static str {
    match o {
        PairOrder::FirstAhead => "first_ahead",
        PairOrder::SecondAhead => "second_ahead",
        PairOrder::Tie => "tie",
    }
}

fn to_csv(scan: &IiaScan) -> String {
    let mut s = String::from("a,b,c,first,second,alone,in_triple\n");
    for v in &scan.violations {
        let t: Vec<String> = v.triple.iter().map(|n| csv_field(n)).collect();
        for c in &v.changes {
            s.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                t[0],
                t[1],
                t[2],
                csv_field(&c.pair.0),
                csv_field(&c.pair.1),
                order(c.alone),
                order(c.in_triple)
            ));
        }
    }
    s
}

fn to_table(scan: &IiaScan) -> String {
    let mut s = format!(
        "{} triples with order changes, {} skipped\n",
        scan.violations.len(),
        scan.skipped.len()
    );
    if !scan.violations.is_empty() {
        let rows: Vec<Vec<String>> = scan
            .violations
            .iter()
            .flat_map(|v| {
                v.changes.iter().map(move |c| {
                    vec![
                        v.triple.join(","),
                        format!("{} vs {}", c.pair.0, c.pair.1),
                        order(c.alone).into(),
                        order(c.in_triple).into(),
                    ]
                })
            })
            .collect();
        s.push_str(&table(&["triple", "pair", "alone", "in_triple"], &rows));
    }
    for sk in &scan.skipped {
        s.push_str(&format!("skipped {}: {}\n", sk.triple.join(","), sk.reason));
    }
    s
}
