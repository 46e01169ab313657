use anyhow::Result;
use pairrank_core::rng::derive_seed;
use pairrank_core::stats::{BootstrapConfig, TestKind, TestResult};
use pairrank_core::{decide, DecideConfig, Mechanism, PairDecision, TiePolicy};
use rayon::prelude::*;
use serde::Serialize;

use super::{check_format, load, mechanisms, num, pairs};
use crate::args::{CompareArgs, Format};
use crate::output::{csv_artifact, csv_field, emit, json_artifact, shown, table, usage, RunConfig};

const DECIDABLE: [Mechanism; 3] = [Mechanism::Mean, Mechanism::Median, Mechanism::Bt];

#[derive(Serialize)]
struct PairReport {
    pair: (String, String),
    decisions: Vec<PairDecision>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    tests: Vec<TestResult>,
}

fn test_kinds(names: &[String]) -> Result<Vec<TestKind>> {
    if names.iter().any(|n| n == "all") {
        if names.len() > 1 {
            return usage("`all` cannot be combined with other tests");
        }
        return Ok(TestKind::ALL.to_vec());
    }
    let mut out = Vec::new();
    for n in names {
        let t: TestKind = n.parse()?;
        if !out.contains(&t) {
            out.push(t);
        }
    }
    Ok(out)
}

pub fn run(args: &CompareArgs) -> Result<()> {
    let format = args.output.format();
    check_format(format, &[Format::Table, Format::Json, Format::Csv], "compare")?;
    let mechs = mechanisms(&args.mechanism, &DECIDABLE)?;
    let tests = test_kinds(&args.tests)?;
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        return usage(format!("--alpha must lie in (0, 1), got {}", args.alpha));
    }
    let tie_policy: TiePolicy = args.tie_policy.into();
    let bootstrap = BootstrapConfig {
        resamples: args.resamples,
        level: 1.0 - args.alpha,
        seed: args.seed,
    };
    bootstrap.validate()?;
    let run_config = RunConfig {
        subcommand: "compare",
        inputs: vec![shown(&args.input.input)],
        mechanisms: mechs.clone(),
        alpha: Some(args.alpha),
        tie_policy,
        seed: args.seed,
        out_dir: args.output.out.as_deref().map(shown),
        format,
        options: serde_json::json!({
            "pairs": args.pair,
            "tests": tests,
            "bootstrap_resamples": args.resamples,
        }),
    };

    let m = load(&args.input)?;
    let pair_list = pairs(&m, &args.pair)?;
    let reports = pair_list
        .par_iter()
        .enumerate()
        .map(|(i, (a, b))| {
            // Each pair resamples from its own stream.
            let cfg = DecideConfig {
                tie_policy,
                bootstrap: BootstrapConfig {
                    seed: derive_seed(args.seed, i as u64),
                    ..bootstrap
                },
            };
            let decisions = mechs
                .iter()
                .map(|&mech| decide(&m, a, b, mech, args.alpha, &cfg))
                .collect::<pairrank_core::Result<Vec<_>>>()?;
            let (xa, xb) = (m.row(m.system_index(a)?), m.row(m.system_index(b)?));
            let tests = tests
                .iter()
                .map(|t| t.run(xa, xb))
                .collect::<pairrank_core::Result<Vec<_>>>()?;
            Ok(PairReport {
                pair: (a.clone(), b.clone()),
                decisions,
                tests,
            })
        })
        .collect::<pairrank_core::Result<Vec<_>>>()?;

    let text = match format {
        Format::Json => json_artifact(&run_config, &reports)?,
        Format::Csv => csv_artifact(&run_config, &to_csv(&reports))?,
        _ => to_table(&reports, args.alpha),
    };
    emit(args.output.out.as_ref(), "compare", format, &text)
}

fn decision_name(d: &PairDecision) -> String {
    match d.decision {
        pairrank_core::Decision::First => d.pair.0.clone(),
        pairrank_core::Decision::Second => d.pair.1.clone(),
        pairrank_core::Decision::Inconclusive => "inconclusive".into(),
    }
}

fn to_csv(reports: &[PairReport]) -> String {
    let mut s = String::from("first,second,kind,name,statistic,p_value,decision\n");
    for r in reports {
        let (a, b) = (csv_field(&r.pair.0), csv_field(&r.pair.1));
        for d in &r.decisions {
            s.push_str(&format!(
                "{a},{b},mechanism,{},{},{},{}\n",
                d.mechanism,
                d.statistic,
                d.p_value,
                csv_field(&decision_name(d))
            ));
        }
        for t in &r.tests {
            s.push_str(&format!("{a},{b},test,{},{},{},\n", t.test_name, t.statistic, t.p_value));
        }
    }
    s
}

fn to_table(reports: &[PairReport], alpha: f64) -> String {
    let mut rows = Vec::new();
    for r in reports {
        for d in &r.decisions {
            rows.push(vec![
                r.pair.0.clone(),
                r.pair.1.clone(),
                d.mechanism.to_string(),
                num(d.statistic),
                num(d.p_value),
                decision_name(d),
            ]);
        }
        for t in &r.tests {
            rows.push(vec![
                r.pair.0.clone(),
                r.pair.1.clone(),
                t.test_name.clone(),
                num(t.statistic),
                num(t.p_value),
                if t.p_value < alpha { "significant" } else { "-" }.into(),
            ]);
        }
    }
    format!(
        "alpha = {alpha}\n{}",
        table(&["first", "second", "method", "statistic", "p_value", "decision"], &rows)
    )
}
