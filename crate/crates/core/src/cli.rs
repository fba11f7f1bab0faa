//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for a domain failure (invalid map,
//! non-orientable cell, subclass violation), 2 for unreadable input or
//! bad arguments.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gmap::GMap;
use crate::homology::{betti_and_torsion, homology, project_generators, ChainComplex, HomologySummary};
use crate::io::report::{chain_terms, BatchReport, Render, RunReport};
use crate::io::voxels::{random_set, voxels_to_gmap};
use crate::io::{load, write_gmap_table, Format};
use crate::orientation::{assign_signs, check_subclass, SubclassReport};
use crate::simplify::{simplify_signed, SimplifyOptions};

#[derive(Debug, Parser)]
#[command(name = "gmaph", version, about = "Homology of generalized maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the map axioms and the subclass conditions.
    Validate(InputArgs),
    /// Print dart and cell counts.
    Stats(InputArgs),
    /// Simplify a map and write the result and its operation log.
    Simplify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        phases: PhaseArgs,
    },
    /// Compute Betti numbers, torsion and generators.
    Homology {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        phases: PhaseArgs,
        /// Compute homology on the input map directly.
        #[arg(long)]
        no_simplify: bool,
        /// Report generators projected onto the input map.
        #[arg(long)]
        project_generators: bool,
    },
    /// Run both simplification modes on random voxel sets.
    Batch(BatchArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Input file; omit to generate a random voxel set with `--grid`.
    pub input: Option<PathBuf>,
    /// Input format; guessed from the extension when absent.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Side of the grid for a random voxel set.
    #[arg(long)]
    pub grid: Option<u32>,
    /// Seed for a random voxel set.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of occupied voxels; a quarter of the grid by default.
    #[arg(long)]
    pub voxels: Option<usize>,
    /// Grow a face-connected blob instead of sampling uniformly.
    #[arg(long)]
    pub blob: bool,
    /// Output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct PhaseArgs {
    /// Skip contractions.
    #[arg(long)]
    pub removal_only: bool,
    /// Contract before removing.
    #[arg(long, conflicts_with = "removal_only")]
    pub contraction_first: bool,
}

impl PhaseArgs {
    pub fn options(&self) -> SimplifyOptions {
        SimplifyOptions {
            removal: true,
            contraction: !self.removal_only,
            contraction_first: self.contraction_first,
        }
    }

    fn mode(&self) -> &'static str {
        match (self.removal_only, self.contraction_first) {
            (true, _) => "removal",
            (false, false) => "removal+contraction",
            (false, true) => "contraction+removal",
        }
    }
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    /// Base seed; run `k` uses `seed + k`.
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 16)]
    pub grid: u32,
    /// Number of runs.
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    /// Occupied voxels per run; a quarter of the grid by default.
    #[arg(long)]
    pub voxels: Option<usize>,
    #[arg(long)]
    pub blob: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::Io(_)
        | Error::Json(_)
        | Error::MalformedTable(_)
        | Error::DartOutOfRange { .. }
        | Error::DimensionOutOfRange { .. }
        | Error::NonManifoldEdge(..)
        | Error::EmptyBatch => 2,
        _ => 1,
    }
}

fn default_voxels(grid: u32) -> usize {
    (grid as usize).pow(3) / 4
}

/// Loads the input named by `args` and returns it with a display name.
pub fn load_input(args: &InputArgs) -> Result<(GMap, String)> {
    match (&args.input, args.grid) {
        (Some(path), None) => {
            let format = args
                .format
                .or_else(|| Format::from_path(path))
                .ok_or_else(|| Error::parse(path, 0, "unknown format; pass --format"))?;
            Ok((load(path, format)?, path.display().to_string()))
        }
        (None, Some(grid)) => {
            let seed = args
                .seed
                .ok_or_else(|| Error::parse("<random>", 0, "a random voxel set needs --seed"))?;
            let count = args.voxels.unwrap_or_else(|| default_voxels(grid));
            let v = random_set(grid, count, seed, args.blob);
            Ok((voxels_to_gmap(&v), format!("random grid={grid} voxels={count} seed={seed}")))
        }
        _ => Err(Error::parse("<args>", 0, "give either an input file or --grid")),
    }
}

fn emit<R: Serialize + Render>(r: &R, out: Option<&Path>, json: bool) -> Result<()> {
    crate::io::write_report(r, out, json)
}

#[derive(Debug, Serialize)]
pub struct ValidateReport {
    pub input: String,
    pub valid: bool,
    pub violations: Vec<String>,
    pub subclass: SubclassReport,
    /// Why signs could not be assigned, if they could not.
    pub signs: Option<String>,
}

impl ValidateReport {
    pub fn is_clean(&self) -> bool {
        self.valid && self.subclass.is_clean()
    }
}

impl Render for ValidateReport {
    fn text(&self) -> String {
        let mut out = format!("{}: {}\n", self.input, if self.is_clean() { "ok" } else { "invalid" });
        for v in &self.violations {
            out.push_str(&format!("  violation: {v}\n"));
        }
        let s = &self.subclass;
        for (d, i) in &s.free_dart_violations {
            out.push_str(&format!("  dart {d} is {i}-free\n"));
        }
        for (d, i) in &s.multi_link_violations {
            out.push_str(&format!("  dart {d} is multiply linked by alpha{i}\n"));
        }
        if let Some(why) = &self.signs {
            out.push_str(&format!("  note: signs cannot be assigned: {why}\n"));
        }
        out
    }
}

pub fn cmd_validate(g: &GMap, name: &str) -> ValidateReport {
    let report = g.validate();
    let valid = report.is_valid();
    ValidateReport {
        input: name.to_string(),
        valid,
        violations: report.violations.iter().map(|v| format!("{v:?}")).collect(),
        subclass: if valid { check_subclass(g, false) } else { SubclassReport::default() },
        signs: if valid { assign_signs(g).err().map(|e| e.to_string()) } else { None },
    }
}

#[derive(Debug, Serialize)]
pub struct StatsReport {
    pub input: String,
    pub dimension: usize,
    pub darts: usize,
    pub cells: Vec<usize>,
    /// Number of `i`-free darts per `i`.
    pub free_darts: Vec<usize>,
}

impl Render for StatsReport {
    fn text(&self) -> String {
        format!(
            "input: {}\ndimension: {}\ndarts: {}\ncells: {:?}\nfree darts: {:?}\n",
            self.input, self.dimension, self.darts, self.cells, self.free_darts
        )
    }
}

pub fn cmd_stats(g: &GMap, name: &str) -> StatsReport {
    StatsReport {
        input: name.to_string(),
        dimension: g.dimension(),
        darts: g.num_darts(),
        cells: g.cell_counts(),
        free_darts: (0..=g.dimension()).map(|i| g.darts().filter(|&d| g.is_free(d, i)).count()).collect(),
    }
}

#[derive(Debug, Serialize)]
pub struct SimplifyReport {
    pub input: String,
    pub mode: String,
    pub darts_before: usize,
    pub cells_before: Vec<usize>,
    pub darts: usize,
    pub cells: Vec<usize>,
    pub operations: usize,
    pub time_simplification_ms: f64,
}

impl Render for SimplifyReport {
    fn text(&self) -> String {
        format!(
            "input: {}\nmode: {}\ndarts: {} -> {}\ncells: {:?} -> {:?}\noperations: {}\ntime: {:.3} ms\n",
            self.input,
            self.mode,
            self.darts_before,
            self.darts,
            self.cells_before,
            self.cells,
            self.operations,
            self.time_simplification_ms
        )
    }
}

/// Simplifies `g`; with `out`, writes the reduced table there and the
/// operation log next to it as `<out>.log.json`.
pub fn cmd_simplify(g: &GMap, name: &str, phases: &PhaseArgs, out: Option<&Path>) -> Result<SimplifyReport> {
    let s = assign_signs(g)?;
    let t = Instant::now();
    let r = simplify_signed(&s, phases.options(), &mut |_| {});
    let elapsed = t.elapsed().as_secs_f64() * 1e3;
    if let Some(path) = out {
        std::fs::write(path, write_gmap_table(r.gmap()))?;
        let mut log = path.as_os_str().to_owned();
        log.push(".log.json");
        std::fs::write(log, serde_json::to_string(&r.log)?)?;
    }
    Ok(SimplifyReport {
        input: name.to_string(),
        mode: phases.mode().to_string(),
        darts_before: g.num_darts(),
        cells_before: g.cell_counts(),
        darts: r.gmap().num_darts(),
        cells: r.gmap().cell_counts(),
        operations: r.log.len(),
        time_simplification_ms: elapsed,
    })
}

/// Settings of [`cmd_homology`].
#[derive(Clone, Copy, Debug, Default)]
pub struct HomologyConfig {
    pub options: SimplifyOptions,
    pub simplify: bool,
    pub generators: bool,
    pub project: bool,
}

pub fn cmd_homology(g: &GMap, name: &str, cfg: HomologyConfig) -> Result<RunReport> {
    let initial = assign_signs(g)?;
    let t = Instant::now();
    let simplified = cfg.simplify.then(|| simplify_signed(&initial, cfg.options, &mut |_| {}));
    let time_simplification_ms = t.elapsed().as_secs_f64() * 1e3;
    let signed = simplified.as_ref().map_or(&initial, |s| &s.signed);

    let t = Instant::now();
    let cc = ChainComplex::build(signed)?;
    let (summary, generators) = if cfg.generators || cfg.project {
        let h = homology(&cc);
        let gens: Vec<_> = h.generators.iter().enumerate().map(|(p, zs)| zs.iter().map(|z| chain_terms(&cc, p, z)).collect()).collect();
        (h.summary(), Some((h, gens)))
    } else {
        (betti_and_torsion(&cc), None)
    };
    let time_homology_ms = t.elapsed().as_secs_f64() * 1e3;

    let projected = match (&generators, cfg.project) {
        (Some((h, _)), true) => match &simplified {
            Some(s) => {
                let original = ChainComplex::build(&initial)?;
                // Projected chains are keyed by cell id, which indexes the
                // basis of the unsimplified complex.
                let chains = project_generators(h, &s.log, &original)?;
                Some(
                    chains
                        .iter()
                        .enumerate()
                        .map(|(p, zs)| zs.iter().map(|z| chain_terms(&original, p, z)).collect())
                        .collect(),
                )
            }
            None => generators.as_ref().map(|(_, g)| g.clone()),
        },
        _ => None,
    };

    let mode = match (cfg.simplify, cfg.options.contraction, cfg.options.contraction_first) {
        (false, ..) => "none",
        (true, false, _) => "removal",
        (true, true, false) => "removal+contraction",
        (true, true, true) => "contraction+removal",
    };
    let HomologySummary { betti, torsion } = summary;
    Ok(RunReport {
        input: name.to_string(),
        seed: None,
        mode: mode.to_string(),
        dimension: g.dimension(),
        darts_before: g.num_darts(),
        cells_before: g.cell_counts(),
        darts: signed.base().num_darts(),
        cells: signed.base().cell_counts(),
        operations: simplified.as_ref().map_or(0, |s| s.log.len()),
        betti,
        torsion,
        time_simplification_ms,
        time_homology_ms,
        generators: cfg.generators.then(|| generators.map(|(_, g)| g)).flatten(),
        projected_generators: projected,
    })
}

/// Column names of a batch report for `n`-maps.
pub fn batch_columns(n: usize) -> Vec<String> {
    let mut cols = vec!["voxels".to_string(), "darts".to_string()];
    let mut block = |prefix: &str| {
        if !prefix.is_empty() {
            cols.push(format!("{prefix}darts"));
        }
        cols.extend((0..=n).map(|i| format!("{prefix}S{i}")));
    };
    block("");
    block("R:");
    block("RC:");
    cols.extend(["R:t_simplif_ms", "RC:t_simplif_ms", "RC:t_homology_ms"].map(String::from));
    cols
}

/// Runs `count` random voxel sets through both simplification modes and
/// checks each against the homology of the unsimplified map.
pub fn cmd_batch(args: &BatchArgs) -> Result<BatchReport> {
    if args.count == 0 {
        return Err(Error::EmptyBatch);
    }
    let voxels = args.voxels.unwrap_or_else(|| default_voxels(args.grid));
    let runs: Vec<(Vec<f64>, bool)> = (0..args.count as u64)
        .into_par_iter()
        .map(|k| -> Result<(Vec<f64>, bool)> {
            let v = random_set(args.grid, voxels, args.seed.wrapping_add(k), args.blob);
            let g = voxels_to_gmap(&v);
            let s = assign_signs(&g)?;
            let oracle = betti_and_torsion(&ChainComplex::build(&s)?);
            let mut row = vec![v.len() as f64, g.num_darts() as f64];
            row.extend(g.cell_counts().iter().map(|&c| c as f64));
            let mut times = Vec::new();
            let mut agree = true;
            for opts in [SimplifyOptions::removal_only(), SimplifyOptions::default()] {
                let t = Instant::now();
                let r = simplify_signed(&s, opts, &mut |_| {});
                times.push(t.elapsed().as_secs_f64() * 1e3);
                let t = Instant::now();
                let h = betti_and_torsion(&ChainComplex::build(&r.signed)?);
                if opts.contraction {
                    times.push(t.elapsed().as_secs_f64() * 1e3);
                }
                agree &= h == oracle;
                row.push(r.gmap().num_darts() as f64);
                row.extend(r.gmap().cell_counts().iter().map(|&c| c as f64));
            }
            row.extend(times);
            Ok((row, agree))
        })
        .collect::<Result<_>>()?;
    let agreeing = runs.iter().filter(|(_, a)| *a).count();
    let rows = runs.into_iter().map(|(r, _)| r).collect();
    BatchReport::new(args.seed, args.grid, args.count, batch_columns(3), rows, agreeing)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Validate(args) => {
            let (g, name) = load_input(&args)?;
            let r = cmd_validate(&g, &name);
            emit(&r, args.out.as_deref(), args.json)?;
            Ok(if r.is_clean() { 0 } else { 1 })
        }
        Command::Stats(args) => {
            let (g, name) = load_input(&args)?;
            emit(&cmd_stats(&g, &name), args.out.as_deref(), args.json)?;
            Ok(0)
        }
        Command::Simplify { input, phases } => {
            let (g, name) = load_input(&input)?;
            let r = cmd_simplify(&g, &name, &phases, input.out.as_deref())?;
            emit(&r, None, input.json)?;
            Ok(0)
        }
        Command::Homology {
            input,
            phases,
            no_simplify,
            project_generators,
        } => {
            let (g, name) = load_input(&input)?;
            let cfg = HomologyConfig {
                options: phases.options(),
                simplify: !no_simplify,
                generators: true,
                project: project_generators,
            };
            let mut r = cmd_homology(&g, &name, cfg)?;
            if input.input.is_none() {
                r.seed = input.seed;
            }
            emit(&r, input.out.as_deref(), input.json)?;
            Ok(0)
        }
        Command::Batch(args) => {
            let r = cmd_batch(&args)?;
            emit(&r, args.out.as_deref(), args.json)?;
            Ok(if r.agreeing == r.rows.len() { 0 } else { 1 })
        }
    }
}

/// Parses the process arguments and runs the command.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
