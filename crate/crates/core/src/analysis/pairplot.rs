use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::Serialize;

use crate::score::distinct_pair;
use crate::stats::median;
use crate::{Error, Mechanism, Result, ScoreMatrix};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    /// `counts.len() + 1` bin edges; the last bin is closed on the right.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

/// Scatter of paired scores: `x` is the first system, `y` the second.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairPlotData {
    pub systems: (String, String),
    pub instances: Vec<String>,
    pub points: Vec<(f64, f64)>,
    pub mean: (f64, f64),
    pub median: (f64, f64),
    /// Share of instances with `y > x` (second system better).
    pub mass_above_diagonal: f64,
    pub mass_below_diagonal: f64,
    pub mass_on_diagonal: f64,
    /// Histogram of `x − y`.
    pub histogram_of_differences: Histogram,
}

fn histogram(values: &[f64], bins: usize) -> Histogram {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = if lo == hi { (lo - 0.5, hi + 0.5) } else { (lo, hi) };
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins)
        .map(|b| if b == bins { hi } else { lo + b as f64 * width })
        .collect();
    let mut counts = vec![0; bins];
    for &v in values {
        let b = (((v - lo) / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    Histogram { edges, counts }
}

pub fn pair_plot_data(m: &ScoreMatrix, a: &str, b: &str, bins: usize) -> Result<PairPlotData> {
    if bins == 0 {
        return Err(Error::InvalidParameter("histogram needs at least one bin".into()));
    }
    let (ia, ib) = distinct_pair(m, a, b)?;
    let (xs, ys) = (m.row(ia), m.row(ib));
    let n = xs.len() as f64;
    let above = xs.iter().zip(ys).filter(|(x, y)| y > x).count() as f64;
    let below = xs.iter().zip(ys).filter(|(x, y)| y < x).count() as f64;
    let diffs: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| x - y).collect();
    Ok(PairPlotData {
        systems: (a.to_string(), b.to_string()),
        instances: m.instances().to_vec(),
        points: xs.iter().copied().zip(ys.iter().copied()).collect(),
        mean: (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n),
        median: (median(xs), median(ys)),
        mass_above_diagonal: above / n,
        mass_below_diagonal: below / n,
        mass_on_diagonal: (n - above - below) / n,
        histogram_of_differences: histogram(&diffs, bins),
    })
}

/// Winners read off the scatter: where the mean lines and the median lines
/// cross relative to the diagonal, and which side of it holds more mass.
/// `None` is a tie.
pub fn geometric_criterion(p: &PairPlotData) -> IndexMap<Mechanism, Option<String>> {
    let pick = |first: f64, second: f64| {
        if first > second {
            Some(p.systems.0.clone())
        } else if second > first {
            Some(p.systems.1.clone())
        } else {
            None
        }
    };
    IndexMap::from([
        (Mechanism::Mean, pick(p.mean.0, p.mean.1)),
        (Mechanism::Median, pick(p.median.0, p.median.1)),
        (Mechanism::Bt, pick(p.mass_below_diagonal, p.mass_above_diagonal)),
    ])
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

impl PairPlotData {
    /// Standalone SVG: scatter, marginal rugs, the diagonal, dashed mean and
    /// dotted median guide lines, and the half-plane with more mass shaded.
    pub fn to_svg(&self) -> String {
        const SIZE: f64 = 420.0;
        const PAD: f64 = 50.0;
        let all = self.points.iter().flat_map(|&(x, y)| [x, y]);
        let lo = all.clone().fold(f64::INFINITY, f64::min);
        let hi = all.fold(f64::NEG_INFINITY, f64::max);
        let span = if hi > lo { hi - lo } else { 1.0 };
        let (lo, hi) = (lo - 0.05 * span, hi + 0.05 * span);
        let sx = |v: f64| PAD + (v - lo) / (hi - lo) * SIZE;
        let sy = |v: f64| PAD + SIZE - (v - lo) / (hi - lo) * SIZE;
        let (x0, x1, y0, y1) = (sx(lo), sx(hi), sy(lo), sy(hi));
        let total = SIZE + 2.0 * PAD;
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="{total}" viewBox="0 0 {total} {total}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect x="{x0:.2}" y="{y1:.2}" width="{SIZE}" height="{SIZE}" fill="white" stroke="black"/>"#);
        if self.mass_above_diagonal != self.mass_below_diagonal {
            let (cx, cy) = if self.mass_above_diagonal > self.mass_below_diagonal {
                (x0, y1)
            } else {
                (x1, y0)
            };
            let _ = writeln!(
                s,
                r##"<polygon points="{x0:.2},{y0:.2} {x1:.2},{y1:.2} {cx:.2},{cy:.2}" fill="#dde8f5"/>"##
            );
        }
        let _ = writeln!(s, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="gray"/>"#);
        for (v, style, colour) in [
            (self.mean, "6,4", "#1f77b4"),
            (self.median, "2,3", "#d62728"),
        ] {
            let _ = writeln!(
                s,
                r#"<line x1="{a:.2}" y1="{y0:.2}" x2="{a:.2}" y2="{y1:.2}" stroke="{colour}" stroke-dasharray="{style}"/>"#,
                a = sx(v.0)
            );
            let _ = writeln!(
                s,
                r#"<line x1="{x0:.2}" y1="{b:.2}" x2="{x1:.2}" y2="{b:.2}" stroke="{colour}" stroke-dasharray="{style}"/>"#,
                b = sy(v.1)
            );
        }
        for &(x, y) in &self.points {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="black" fill-opacity="0.6"/>"#,
                sx(x),
                sy(y)
            );
            let _ = writeln!(
                s,
                r#"<line x1="{a:.2}" y1="{y0:.2}" x2="{a:.2}" y2="{:.2}" stroke="black"/>"#,
                y0 + 8.0,
                a = sx(x)
            );
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{b:.2}" x2="{x0:.2}" y2="{b:.2}" stroke="black"/>"#,
                x0 - 8.0,
                b = sy(y)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            PAD + SIZE / 2.0,
            total - 12.0,
            xml_escape(&self.systems.0)
        );
        let _ = writeln!(
            s,
            r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">{}</text>"#,
            PAD + SIZE / 2.0,
            PAD + SIZE / 2.0,
            xml_escape(&self.systems.1)
        );
        s.push_str("</svg>\n");
        s
    }
}
