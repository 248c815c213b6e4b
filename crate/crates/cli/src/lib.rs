//! Seeded experiment driver: benchmark sweeps, constrained design problems
//! and UAV scenarios, with CSV/JSON/SVG artifacts.
//!
//! Run `k` of a sweep uses seed `base + k`. Cells are computed in parallel
//! and written in a fixed order, so outputs are byte-identical across runs.

mod bench;
mod engineering;
mod uav;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use cgo_core::baselines::{pso_run, random_search_run, PsoParams};
use cgo_core::stats::format_value;
use cgo_core::{CgoParams, Problem, RunRecord, SearchSpace};
use rayon::prelude::*;
use thiserror::Error;

pub use bench::{bench_problems, cmd_bench, BenchConfig};
pub use engineering::{cmd_engineering, EngineeringReport, InfeasibleCount};
pub use uav::{cmd_uav, resolve_scenario, UavReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] cgo_core::Error),
}

impl CliError {
    /// Process exit status: 2 usage, 3 ingestion, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(cgo_core::Error::Ingestion { .. }) => 3,
            CliError::Core(cgo_core::Error::Io { .. }) => 4,
            CliError::Core(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Cgo,
    Pso,
    Random,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Cgo, Algorithm::Pso, Algorithm::Random];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Cgo => "cgo",
            Algorithm::Pso => "pso",
            Algorithm::Random => "random",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown algorithm {s:?}; valid: cgo, pso, random")))
    }
}

/// Parses a comma-separated algorithm list, keeping first occurrences.
pub fn parse_algorithms(list: &str) -> Result<Vec<Algorithm>> {
    let mut out = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let a: Algorithm = name.parse()?;
        if !out.contains(&a) {
            out.push(a);
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("no algorithm selected".into()));
    }
    Ok(out)
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Problem names; empty selects the whole suite.
    pub problems: Vec<String>,
    pub algorithms: Vec<Algorithm>,
    pub runs: usize,
    pub population: usize,
    pub iterations: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub emit_traces: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(CliError::Usage("--runs must be at least 1".into()));
        }
        if self.population < 2 {
            return Err(CliError::Usage("--pop must be at least 2".into()));
        }
        if self.iterations == 0 {
            return Err(CliError::Usage("--iters must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(CliError::Usage("no algorithm selected".into()));
        }
        Ok(())
    }

    pub fn run_seed(&self, run: usize) -> u64 {
        self.seed.wrapping_add(run as u64)
    }
}

/// Picks named items out of `all`, in request order.
fn select<'a, T>(all: &'a [T], names: &[String], name_of: impl Fn(&T) -> &str) -> Result<Vec<&'a T>> {
    if names.is_empty() {
        return Ok(all.iter().collect());
    }
    names
        .iter()
        .map(|n| {
            all.iter().find(|p| name_of(p) == n).ok_or_else(|| {
                let valid: Vec<&str> = all.iter().map(&name_of).collect();
                CliError::Usage(format!("unknown problem {n:?}; valid: {}", valid.join(", ")))
            })
        })
        .collect()
}

/// Records of one (problem, run) cell in the config's algorithm order.
struct Cell {
    problem: usize,
    run: usize,
    records: Vec<RunRecord>,
}

/// Runs every selected algorithm on one problem and seed. The baselines get
/// CGO's realised evaluation count as their budget, or `N * (Tmax + 1)`
/// when CGO is not selected.
fn run_cell<P: Problem + ?Sized>(
    space: &SearchSpace,
    problem: &P,
    cfg: &ExperimentConfig,
    seed: u64,
) -> Result<Vec<RunRecord>> {
    let cgo = if cfg.algorithms.contains(&Algorithm::Cgo) {
        let params = CgoParams::new(cfg.population, cfg.iterations, seed);
        Some(cgo_core::run(space, &params, problem)?)
    } else {
        None
    };
    let budget = cgo
        .as_ref()
        .map(|r| r.evaluations)
        .unwrap_or((cfg.population * (cfg.iterations + 1)) as u64);
    let mut records = Vec::with_capacity(cfg.algorithms.len());
    for alg in &cfg.algorithms {
        let rec = match alg {
            Algorithm::Cgo => cgo.clone().expect("run above"),
            Algorithm::Pso => {
                let params = PsoParams {
                    swarm_size: cfg.population,
                    max_iterations: (budget as usize).div_ceil(cfg.population) + 1,
                    max_evaluations: Some(budget),
                    seed,
                    ..PsoParams::default()
                };
                pso_run(space, &params, problem)?
            }
            Algorithm::Random => random_search_run(space, budget, seed, problem)?,
        };
        records.push(rec);
    }
    Ok(records)
}

/// Runs all (problem, run) cells in parallel, returned in problem-major order.
fn run_grid<P, F>(problems: &[P], cfg: &ExperimentConfig, space_of: F) -> Result<Vec<Cell>>
where
    P: Problem + Sync,
    F: Fn(&P) -> SearchSpace + Sync,
{
    let jobs: Vec<(usize, usize)> = (0..problems.len())
        .flat_map(|p| (0..cfg.runs).map(move |r| (p, r)))
        .collect();
    jobs.par_iter()
        .map(|&(p, run)| {
            let problem = &problems[p];
            let records = run_cell(&space_of(problem), problem, cfg, cfg.run_seed(run))?;
            Ok(Cell {
                problem: p,
                run,
                records,
            })
        })
        .collect()
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| cgo_core::Error::io(dir, e).into())
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        create_dir(parent)?;
    }
    fs::write(path, contents).map_err(|e| cgo_core::Error::io(path, e).into())
}

/// `iteration,evaluations,objective,violation`, one row per trace entry.
pub fn trace_csv(rec: &RunRecord) -> String {
    let mut out = String::from("iteration,evaluations,objective,violation\n");
    for (i, (f, e)) in rec.trace.iter().zip(&rec.evaluations_trace).enumerate() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            i + 1,
            e,
            format_value(f.objective),
            format_value(f.violation)
        ));
    }
    out
}

fn write_traces(out: &Path, names: &[String], cells: &[Cell]) -> Result<()> {
    for cell in cells {
        for rec in &cell.records {
            let file = out.join("traces").join(format!(
                "{}__{}__run{:03}.csv",
                names[cell.problem], rec.algorithm, cell.run
            ));
            write_file(&file, &trace_csv(rec))?;
        }
    }
    Ok(())
}

/// One row per (problem, algorithm, run) with the final best and budget.
fn runs_csv(names: &[String], cells: &[Cell]) -> String {
    let mut out = String::from("problem,algorithm,run,seed,objective,violation,evaluations\n");
    for cell in cells {
        for rec in &cell.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                names[cell.problem],
                rec.algorithm,
                cell.run,
                rec.seed,
                format_value(rec.final_best.fitness.objective),
                format_value(rec.final_best.fitness.violation),
                rec.evaluations
            ));
        }
    }
    out
}
