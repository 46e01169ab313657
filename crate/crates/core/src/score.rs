//! Score matrices, paired differences and pairwise win counts.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Systems × instances grid of evaluation scores.
///
/// Rows are systems, columns are test instances. All scores are finite, names
/// and ids are unique, and there are at least two systems and one instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreMatrix {
    systems: Vec<String>,
    instances: Vec<String>,
    /// Row-major by system.
    scores: Vec<f64>,
}

impl ScoreMatrix {
    /// Builds and validates a matrix. `instances` defaults to `i0..i{n-1}`.
    pub fn new(
        systems: Vec<String>,
        instances: Option<Vec<String>>,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if systems.len() < 2 {
            return Err(Error::TooFewSystems(systems.len()));
        }
        if rows.len() != systems.len() {
            return Err(Error::Malformed(format!(
                "{} systems but {} score rows",
                systems.len(),
                rows.len()
            )));
        }
        let n = rows[0].len();
        for (s, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::RaggedRow {
                    row: s,
                    expected: n,
                    found: row.len(),
                });
            }
        }
        if n == 0 {
            return Err(Error::NoInstances);
        }
        let instances = instances.unwrap_or_else(|| default_instance_ids(n));
        if instances.len() != n {
            return Err(Error::Malformed(format!(
                "{} instance ids but {} scores per system",
                instances.len(),
                n
            )));
        }
        check_unique_systems(&systems)?;
        let mut seen = HashSet::with_capacity(n);
        for (row, id) in instances.iter().enumerate() {
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateInstance {
                    id: id.clone(),
                    row,
                });
            }
        }
        for (s, row) in rows.iter().enumerate() {
            if let Some(l) = row.iter().position(|x| !x.is_finite()) {
                return Err(Error::NonFinite {
                    system: systems[s].clone(),
                    instance: instances[l].clone(),
                });
            }
        }
        Ok(Self {
            systems,
            instances,
            scores: rows.into_iter().flatten().collect(),
        })
    }

    pub fn systems(&self) -> &[String] {
        &self.systems
    }

    pub fn instances(&self) -> &[String] {
        &self.instances
    }

    pub fn n_systems(&self) -> usize {
        self.systems.len()
    }

    pub fn n_instances(&self) -> usize {
        self.instances.len()
    }

    /// Scores of one system across instances.
    pub fn row(&self, system: usize) -> &[f64] {
        let n = self.n_instances();
        &self.scores[system * n..(system + 1) * n]
    }

    pub fn score(&self, system: usize, instance: usize) -> f64 {
        self.scores[system * self.n_instances() + instance]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.scores.chunks(self.n_instances())
    }

    pub fn system_index(&self, name: &str) -> Result<usize> {
        self.systems
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownSystem(name.to_string()))
    }

    /// Matrix restricted to the given systems, in the given order.
    pub fn select_systems(&self, idx: &[usize]) -> Result<Self> {
        Self::new(
            idx.iter().map(|&i| self.systems[i].clone()).collect(),
            Some(self.instances.clone()),
            idx.iter().map(|&i| self.row(i).to_vec()).collect(),
        )
    }

    /// Matrix whose instance `l` is instance `idx[l]` of `self`.
    ///
    /// Ids are regenerated because resampling may repeat instances.
    pub fn resample_instances(&self, idx: &[usize]) -> Result<Self> {
        Self::new(
            self.systems.clone(),
            None,
            (0..self.n_systems())
                .map(|s| idx.iter().map(|&l| self.score(s, l)).collect())
                .collect(),
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("instance");
        for s in &self.systems {
            out.push(',');
            out.push_str(&csv_field(s));
        }
        out.push('\n');
        for (l, id) in self.instances.iter().enumerate() {
            out.push_str(&csv_field(id));
            for s in 0..self.n_systems() {
                out.push(',');
                out.push_str(&format!("{:?}", self.score(s, l)));
            }
            out.push('\n');
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn default_instance_ids(n: usize) -> Vec<String> {
    (0..n).map(|l| format!("i{l}")).collect()
}

fn check_unique_systems(systems: &[String]) -> Result<()> {
    let mut seen = HashSet::with_capacity(systems.len());
    for s in systems {
        if !seen.insert(s.as_str()) {
            return Err(Error::DuplicateSystem(s.clone()));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Csv,
    Json,
}

#[derive(Deserialize)]
struct JsonScores {
    systems: Vec<String>,
    #[serde(default)]
    instances: Option<Vec<String>>,
    scores: Vec<Vec<serde_json::Value>>,
}

/// Parses a score matrix from CSV or JSON text.
///
/// CSV: header row required; an optional leading `instance` column holds
/// instance ids, every other column is one system. Lines starting with `#`
/// are comments. JSON:
/// `{"systems": [...], "instances": [...], "scores": [[...], ...]}` with one
/// score row per system.
pub fn parse_scores(text: &str, format: InputFormat) -> Result<ScoreMatrix> {
    match format {
        InputFormat::Csv => parse_csv(text),
        InputFormat::Json => parse_json(text),
    }
}

fn parse_csv(text: &str) -> Result<ScoreMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Malformed(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let has_ids = header.first().is_some_and(|h| h == "instance");
    let systems: Vec<String> = header[usize::from(has_ids)..].to_vec();
    if systems.len() < 2 {
        return Err(Error::TooFewSystems(systems.len()));
    }
    check_unique_systems(&systems)?;

    let mut ids = Vec::new();
    let mut rows = vec![Vec::new(); systems.len()];
    for (r, record) in reader.records().enumerate() {
        // Data rows are numbered from 1, after the header.
        let row = r + 1;
        let record = record.map_err(|e| Error::Malformed(e.to_string()))?;
        if record.len() != header.len() {
            return Err(Error::RaggedRow {
                row,
                expected: header.len(),
                found: record.len(),
            });
        }
        let mut cells = record.iter();
        if has_ids {
            ids.push(cells.next().unwrap_or_default().to_string());
        }
        for (s, cell) in cells.enumerate() {
            let value: f64 = cell.parse().map_err(|_| Error::NonNumeric {
                value: cell.to_string(),
                row,
                column: systems[s].clone(),
            })?;
            rows[s].push(value);
        }
    }
    if rows[0].is_empty() {
        return Err(Error::NoInstances);
    }
    ScoreMatrix::new(systems, has_ids.then_some(ids), rows)
}

fn parse_json(text: &str) -> Result<ScoreMatrix> {
    let raw: JsonScores =
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    if raw.systems.len() < 2 {
        return Err(Error::TooFewSystems(raw.systems.len()));
    }
    check_unique_systems(&raw.systems)?;
    let mut rows = Vec::with_capacity(raw.scores.len());
    for (s, row) in raw.scores.iter().enumerate() {
        let column = raw
            .systems
            .get(s)
            .cloned()
            .unwrap_or_else(|| format!("#{s}"));
        let parsed = row
            .iter()
            .enumerate()
            .map(|(l, v)| match v {
                serde_json::Value::Number(x) => x.as_f64().ok_or(()),
                serde_json::Value::String(x) => x.trim().parse::<f64>().map_err(|_| ()),
                _ => Err(()),
            }
            .map_err(|_| Error::NonNumeric {
                value: v.to_string(),
                row: l,
                column: column.clone(),
            }))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(parsed);
    }
    ScoreMatrix::new(raw.systems, raw.instances, rows)
}

/// Per-instance differences `score(a, l) - score(b, l)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedDifferences {
    pub pair: (String, String),
    pub diffs: Vec<f64>,
}

pub fn paired_differences(m: &ScoreMatrix, a: &str, b: &str) -> Result<PairedDifferences> {
    let (ia, ib) = distinct_pair(m, a, b)?;
    Ok(PairedDifferences {
        pair: (a.to_string(), b.to_string()),
        diffs: m
            .row(ia)
            .iter()
            .zip(m.row(ib))
            .map(|(x, y)| x - y)
            .collect(),
    })
}

pub(crate) fn distinct_pair(m: &ScoreMatrix, a: &str, b: &str) -> Result<(usize, usize)> {
    let ia = m.system_index(a)?;
    let ib = m.system_index(b)?;
    if ia == ib {
        return Err(Error::SameSystem(a.to_string()));
    }
    Ok((ia, ib))
}

/// How exact score ties enter the win counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    /// A tie adds 0.5 to both directions.
    #[default]
    HalfWin,
    /// Ties are left out of the win counts (kept in `ties`).
    Drop,
}

/// Pairwise win counts between systems.
///
/// `omega(i, j)` counts instances where system `i` scores strictly higher
/// than `j`, plus half of the tied instances under [`TiePolicy::HalfWin`].
/// `ties(i, j)` always holds the raw tie count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WinCountMatrix {
    systems: Vec<String>,
    omega: Vec<f64>,
    ties: Vec<usize>,
    n: usize,
    policy: TiePolicy,
}

impl WinCountMatrix {
    /// Builds a win matrix directly from counts (no ties recorded).
    ///
    /// `n` is taken as the largest pairwise comparison total.
    pub fn from_omega(systems: Vec<String>, omega: Vec<Vec<f64>>) -> Result<Self> {
        let k = systems.len();
        if k < 2 {
            return Err(Error::TooFewSystems(k));
        }
        check_unique_systems(&systems)?;
        if omega.len() != k || omega.iter().any(|r| r.len() != k) {
            return Err(Error::Malformed(format!("win matrix must be {k}x{k}")));
        }
        let mut flat = Vec::with_capacity(k * k);
        let mut n = 0.0f64;
        for (i, row) in omega.iter().enumerate() {
            for (j, &w) in row.iter().enumerate() {
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "win count ({i}, {j}) must be finite and non-negative, got {w}"
                    )));
                }
                if i == j && w != 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "diagonal win count ({i}, {i}) must be zero"
                    )));
                }
                if i != j {
                    n = n.max(w + omega[j][i]);
                }
                flat.push(w);
            }
        }
        Ok(Self {
            systems,
            omega: flat,
            ties: vec![0; k * k],
            n: n.round() as usize,
            policy: TiePolicy::Drop,
        })
    }

    pub fn systems(&self) -> &[String] {
        &self.systems
    }

    pub fn k(&self) -> usize {
        self.systems.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn policy(&self) -> TiePolicy {
        self.policy
    }

    pub fn omega(&self, i: usize, j: usize) -> f64 {
        self.omega[i * self.k() + j]
    }

    pub fn ties(&self, i: usize, j: usize) -> usize {
        self.ties[i * self.k() + j]
    }

    /// Total wins of system `i`.
    pub fn wins(&self, i: usize) -> f64 {
        (0..self.k()).map(|j| self.omega(i, j)).sum()
    }

    /// Number of tied (system pair, instance) comparisons.
    pub fn total_ties(&self) -> usize {
        let k = self.k();
        (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .map(|(i, j)| self.ties(i, j))
            .sum()
    }

    /// Restriction to a subset of systems.
    pub fn subset(&self, idx: &[usize]) -> Self {
        let k = self.k();
        let mut omega = Vec::with_capacity(idx.len() * idx.len());
        let mut ties = Vec::with_capacity(idx.len() * idx.len());
        for &i in idx {
            for &j in idx {
                omega.push(self.omega[i * k + j]);
                ties.push(self.ties[i * k + j]);
            }
        }
        Self {
            systems: idx.iter().map(|&i| self.systems[i].clone()).collect(),
            omega,
            ties,
            n: self.n,
            policy: self.policy,
        }
    }

    pub fn omega_rows(&self) -> Vec<Vec<f64>> {
        self.omega.chunks(self.k()).map(<[f64]>::to_vec).collect()
    }
}

pub fn win_counts(m: &ScoreMatrix, policy: TiePolicy) -> WinCountMatrix {
    let k = m.n_systems();
    let mut omega = vec![0.0; k * k];
    let mut ties = vec![0usize; k * k];
    for i in 0..k {
        for j in i + 1..k {
            let (mut wi, mut wj, mut t) = (0usize, 0usize, 0usize);
            for (x, y) in m.row(i).iter().zip(m.row(j)) {
                if x > y {
                    wi += 1;
                } else if y > x {
                    wj += 1;
                } else {
                    t += 1;
                }
            }
            let half = match policy {
                TiePolicy::HalfWin => 0.5 * t as f64,
                TiePolicy::Drop => 0.0,
            };
            omega[i * k + j] = wi as f64 + half;
            omega[j * k + i] = wj as f64 + half;
            ties[i * k + j] = t;
            ties[j * k + i] = t;
        }
    }
    WinCountMatrix {
        systems: m.systems().to_vec(),
        omega,
        ties,
        n: m.n_instances(),
        policy,
    }
}
