mod aggregate;
mod compare;
mod plot;
mod scan;
mod simulate;

pub use aggregate::run as aggregate;
pub use compare::run as compare;
pub use plot::run as plot;
pub use scan::run as scan;
pub use simulate::run as simulate;

use anyhow::{Context, Result};
use pairrank_core::{parse_scores, Mechanism, ScoreMatrix};

use crate::args::{Format, InputArgs};
use crate::output::usage;

pub fn load(input: &InputArgs) -> Result<ScoreMatrix> {
    let path = &input.input;
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_scores(&text, input.format()).with_context(|| format!("parsing {}", path.display()))
}

/// Resolves `all` or a list of names, keeping the first occurrence of each.
pub fn mechanisms(names: &[String], all: &[Mechanism]) -> Result<Vec<Mechanism>> {
    if names.iter().any(|n| n.eq_ignore_ascii_case("all")) {
        if names.len() > 1 {
            return usage("`all` cannot be combined with other mechanisms");
        }
        return Ok(all.to_vec());
    }
    let mut out = Vec::new();
    for n in names {
        let m: Mechanism = n.parse()?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    if out.is_empty() {
        return usage("no mechanism given");
    }
    Ok(out)
}

/// `A,B` pairs from the command line, or every unordered pair in input order.
pub fn pairs(m: &ScoreMatrix, given: &[String]) -> Result<Vec<(String, String)>> {
    if given.is_empty() {
        let names = m.systems();
        let mut out = Vec::new();
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                out.push((names[i].clone(), names[j].clone()));
            }
        }
        return Ok(out);
    }
    given
        .iter()
        .map(|p| match p.split_once(',') {
            Some((a, b)) if !a.is_empty() && !b.is_empty() => {
                m.system_index(a)?;
                m.system_index(b)?;
                Ok((a.to_string(), b.to_string()))
            }
            _ => usage(format!("--pair expects `A,B`, got `{p}`")),
        })
        .collect()
}

pub fn check_format(format: Format, allowed: &[Format], cmd: &str) -> Result<()> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        let names: Vec<&str> = allowed.iter().map(|f| f.name()).collect();
        usage(format!(
            "`{cmd}` cannot write {} output; choose one of {}",
            format.name(),
            names.join(", ")
        ))
    }
}

pub fn num(v: f64) -> String {
    format!("{v:.6}")
}
