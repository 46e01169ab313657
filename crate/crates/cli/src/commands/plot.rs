use anyhow::Result;
use indexmap::IndexMap;
use pairrank_core::analysis::{geometric_criterion, pair_plot_data, PairPlotData};
use pairrank_core::{Mechanism, TiePolicy};
use serde::Serialize;

use super::{check_format, load, num, pairs};
use crate::args::{Format, PlotArgs};
use crate::output::{create_dir, json_artifact, print, shown, svg_artifact, table, usage, write_file, RunConfig};

#[derive(Serialize)]
struct PairPlot {
    #[serde(flatten)]
    data: PairPlotData,
    geometric_criterion: IndexMap<Mechanism, Option<String>>,
}

fn file_stem(a: &str, b: &str) -> String {
    let clean = |s: &str| -> String {
        s.chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
            .collect()
    };
    format!("plot_{}__{}", clean(a), clean(b))
}

pub fn run(args: &PlotArgs) -> Result<()> {
    let format = args.output.format();
    check_format(format, &[Format::Table, Format::Json, Format::Svg], "plot")?;
    let run_config = RunConfig {
        subcommand: "plot",
        inputs: vec![shown(&args.input.input)],
        mechanisms: vec![Mechanism::Mean, Mechanism::Median, Mechanism::Bt],
        alpha: None,
        tie_policy: TiePolicy::default(),
        seed: 0,
        out_dir: args.output.out.as_deref().map(shown),
        format,
        options: serde_json::json!({ "pairs": args.pair, "bins": args.bins }),
    };

    let m = load(&args.input)?;
    let plots = pairs(&m, &args.pair)?
        .iter()
        .map(|(a, b)| {
            let data = pair_plot_data(&m, a, b, args.bins)?;
            let geometric_criterion = geometric_criterion(&data);
            Ok(PairPlot {
                data,
                geometric_criterion,
            })
        })
        .collect::<pairrank_core::Result<Vec<_>>>()?;

    if let Some(dir) = &args.output.out {
        // One JSON and one SVG per pair, whatever the format.
        create_dir(dir)?;
        for p in &plots {
            let stem = file_stem(&p.data.systems.0, &p.data.systems.1);
            write_file(&dir.join(format!("{stem}.json")), &json_artifact(&run_config, p)?)?;
            write_file(&dir.join(format!("{stem}.svg")), &svg_artifact(&run_config, &p.data.to_svg())?)?;
        }
        return Ok(());
    }
    match format {
        Format::Json => print(&json_artifact(&run_config, &plots)?),
        Format::Svg => match plots.as_slice() {
            [p] => print(&svg_artifact(&run_config, &p.data.to_svg())?),
            _ => usage("SVG on stdout needs exactly one --pair; use --out for several"),
        },
        _ => print(&to_table(&plots)),
    }
}

fn to_table(plots: &[PairPlot]) -> String {
    let winner = |p: &PairPlot, mech| {
        p.geometric_criterion[&mech].clone().unwrap_or_else(|| "tie".into())
    };
    let rows: Vec<Vec<String>> = plots
        .iter()
        .map(|p| {
            vec![
                p.data.systems.0.clone(),
                p.data.systems.1.clone(),
                num(p.data.mass_above_diagonal),
                num(p.data.mass_below_diagonal),
                num(p.data.mass_on_diagonal),
                winner(p, Mechanism::Mean),
                winner(p, Mechanism::Median),
                winner(p, Mechanism::Bt),
            ]
        })
        .collect();
    table(
        &["x", "y", "above", "below", "on", "mean", "median", "bt"],
        &rows,
    )
}
