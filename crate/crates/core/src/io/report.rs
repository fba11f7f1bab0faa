//! Run and batch reports, as JSON or text.

use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gmap::DartId;
use crate::homology::{Chain, ChainComplex};

/// Integers are written as JSON numbers when they fit in `i64`.
fn big<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(x) => s.serialize_i64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

fn big_table<S: Serializer>(v: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Row<'a>(#[serde(serialize_with = "big_row")] &'a [BigInt]);
    s.collect_seq(v.iter().map(|r| Row(r)))
}

fn big_row<S: Serializer>(v: &&[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Big<'a>(#[serde(serialize_with = "big")] &'a BigInt);
    s.collect_seq(v.iter().map(Big))
}

/// One term of a chain: a cell named by its canonical dart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Term {
    pub dart: DartId,
    #[serde(serialize_with = "big")]
    pub coefficient: BigInt,
}

/// Names the cells of a chain by their canonical darts in `cc`.
pub fn chain_terms(cc: &ChainComplex, p: usize, z: &Chain) -> Vec<Term> {
    z.iter()
        .map(|(&k, v)| Term {
            dart: cc.basis(p)[k],
            coefficient: v.clone(),
        })
        .collect()
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RunReport {
    pub input: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub mode: String,
    pub dimension: usize,
    pub darts_before: usize,
    pub cells_before: Vec<usize>,
    pub darts: usize,
    pub cells: Vec<usize>,
    pub operations: usize,
    pub betti: Vec<usize>,
    #[serde(serialize_with = "big_table")]
    pub torsion: Vec<Vec<BigInt>>,
    pub time_simplification_ms: f64,
    pub time_homology_ms: f64,
    /// Free generators per dimension, on the simplified map.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<Vec<Term>>>>,
    /// The same generators projected onto the input map.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projected_generators: Option<Vec<Vec<Vec<Term>>>>,
}

fn list<T: std::fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn write_generators(out: &mut String, title: &str, gens: &[Vec<Vec<Term>>]) {
    for (p, gs) in gens.iter().enumerate() {
        for (k, z) in gs.iter().enumerate() {
            let terms: Vec<String> = z.iter().map(|t| format!("{}*d{}", t.coefficient, t.dart)).collect();
            writeln!(out, "{title} {p}.{k}: {}", terms.join(" + ")).unwrap();
        }
    }
}

/// Text rendering of a report.
pub trait Render {
    fn text(&self) -> String;
}

impl Render for RunReport {
    fn text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "input: {}", self.input).unwrap();
        if let Some(seed) = self.seed {
            writeln!(out, "seed: {seed}").unwrap();
        }
        writeln!(out, "mode: {}", self.mode).unwrap();
        writeln!(out, "darts: {} -> {}", self.darts_before, self.darts).unwrap();
        writeln!(out, "cells: {} -> {}", list(&self.cells_before), list(&self.cells)).unwrap();
        writeln!(out, "operations: {}", self.operations).unwrap();
        writeln!(out, "betti: {}", list(&self.betti)).unwrap();
        let torsion: Vec<String> = self.torsion.iter().map(|t| list(t)).collect();
        writeln!(out, "torsion: [{}]", torsion.join(", ")).unwrap();
        writeln!(
            out,
            "time: simplification {:.3} ms, homology {:.3} ms",
            self.time_simplification_ms, self.time_homology_ms
        )
        .unwrap();
        if let Some(g) = &self.generators {
            write_generators(&mut out, "generator", g);
        }
        if let Some(g) = &self.projected_generators {
            write_generators(&mut out, "projected", g);
        }
        out
    }
}

/// Minimum, maximum, mean and population standard deviation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Stats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub std: f64,
}

impl Stats {
    pub fn of(values: &[f64]) -> Option<Stats> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        Some(Stats {
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean,
            std: var.sqrt(),
        })
    }
}

/// Per-run numeric rows with column statistics.
#[derive(Clone, Debug, Serialize)]
pub struct BatchReport {
    pub seed: u64,
    pub grid: u32,
    pub count: usize,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Runs whose simplified homology matched the unsimplified one.
    pub agreeing: usize,
    pub summary: Vec<(String, Stats)>,
}

impl BatchReport {
    pub fn new(seed: u64, grid: u32, count: usize, columns: Vec<String>, rows: Vec<Vec<f64>>, agreeing: usize) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyBatch);
        }
        let summary = (0..columns.len())
            .map(|c| {
                let col: Vec<f64> = rows.iter().map(|r| r[c]).collect();
                (columns[c].clone(), Stats::of(&col).expect("rows are non-empty"))
            })
            .collect();
        Ok(BatchReport {
            seed,
            grid,
            count,
            columns,
            rows,
            agreeing,
            summary,
        })
    }

    /// Column statistics by name.
    pub fn stats(&self, column: &str) -> Option<Stats> {
        self.summary.iter().find(|(c, _)| c == column).map(|&(_, s)| s)
    }
}

fn cell(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{v:.0}")
    } else {
        format!("{v:.3}")
    }
}

impl Render for BatchReport {
    fn text(&self) -> String {
        let mut grid: Vec<Vec<String>> = vec![std::iter::once("run".to_string()).chain(self.columns.iter().cloned()).collect()];
        for (k, r) in self.rows.iter().enumerate() {
            grid.push(std::iter::once(k.to_string()).chain(r.iter().map(|&v| cell(v))).collect());
        }
        type Column = (&'static str, fn(&Stats) -> f64);
        let stats: [Column; 4] = [
            ("min", |s| s.min),
            ("max", |s| s.max),
            ("mean", |s| s.mean),
            ("std", |s| s.std),
        ];
        for (name, get) in stats {
            grid.push(
                std::iter::once(name.to_string())
                    .chain(self.summary.iter().map(|(_, s)| cell(get(s))))
                    .collect(),
            );
        }
        let widths: Vec<usize> = (0..grid[0].len())
            .map(|c| grid.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = format!("seed {} grid {} count {}\n", self.seed, self.grid, self.count);
        for row in &grid {
            let cells: Vec<String> = row.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
            writeln!(out, "{}", cells.join("  ").trim_end()).unwrap();
        }
        writeln!(out, "homology preserved in {}/{} runs", self.agreeing, self.rows.len()).unwrap();
        out
    }
}

/// Renders `r` as pretty JSON or text.
pub fn render<R: Serialize + Render>(r: &R, json: bool) -> Result<String> {
    if json {
        let mut s = serde_json::to_string_pretty(r)?;
        s.push('\n');
        Ok(s)
    } else {
        Ok(r.text())
    }
}

/// Writes `r` to `path`, or to stdout when `path` is `None`.
pub fn write_report<R: Serialize + Render>(r: &R, path: Option<&Path>, json: bool) -> Result<()> {
    let s = render(r, json)?;
    match path {
        Some(p) => std::fs::write(p, s)?,
        None => print!("{s}"),
    }
    Ok(())
}
