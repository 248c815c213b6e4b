use std::path::PathBuf;

use cgo_core::benchmarks::{load_offsets, standard_suite, BenchmarkProblem};
use cgo_core::stats::{ComparisonTable, RunSet};

use crate::{
    run_grid, runs_csv, select, write_file, write_traces, Cell, CliError, ExperimentConfig, Result,
};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub experiment: ExperimentConfig,
    pub dim: usize,
    /// Whitespace-separated shift vector and row-major rotation applied to
    /// every selected problem.
    pub offsets: Option<PathBuf>,
}

/// The selected suite problems with any offset file applied.
pub fn bench_problems(cfg: &BenchConfig) -> Result<Vec<BenchmarkProblem>> {
    if cfg.dim == 0 {
        return Err(CliError::Usage("--dim must be at least 1".into()));
    }
    let suite = standard_suite(cfg.dim)?;
    let mut chosen: Vec<BenchmarkProblem> = select(&suite, &cfg.experiment.problems, |p| &p.name)?
        .into_iter()
        .cloned()
        .collect();
    if let Some(path) = &cfg.offsets {
        let (shift, rotation) = load_offsets(path, cfg.dim)?;
        chosen = chosen
            .into_iter()
            .map(|p| p.with_shift(shift.clone())?.with_rotation(rotation.clone()))
            .collect::<cgo_core::Result<_>>()?;
    }
    Ok(chosen)
}

/// Runs every algorithm on every selected benchmark and writes
/// `summary.json`, `summary.csv`, `pvalues.csv`, `runs.csv` and, when
/// requested, per-run traces under `traces/`.
pub fn cmd_bench(cfg: &BenchConfig) -> Result<ComparisonTable> {
    let exp = &cfg.experiment;
    exp.validate()?;
    let problems = bench_problems(cfg)?;
    let names: Vec<String> = problems.iter().map(|p| p.name.clone()).collect();
    let cells = run_grid(&problems, exp, |p| p.space.clone())?;
    let table = ComparisonTable::from_run_sets(&run_sets(&names, exp, &cells)?)?;
    write_file(&exp.out.join("summary.json"), &table.to_json())?;
    write_file(&exp.out.join("summary.csv"), &table.to_csv())?;
    write_file(&exp.out.join("pvalues.csv"), &table.p_values_csv())?;
    write_file(&exp.out.join("runs.csv"), &runs_csv(&names, &cells))?;
    if exp.emit_traces {
        write_traces(&exp.out, &names, &cells)?;
    }
    Ok(table)
}

/// Final objective values grouped per (problem, algorithm).
fn run_sets(names: &[String], exp: &ExperimentConfig, cells: &[Cell]) -> Result<Vec<RunSet>> {
    let mut sets = Vec::new();
    for (p, name) in names.iter().enumerate() {
        for (a, alg) in exp.algorithms.iter().enumerate() {
            let (values, seeds) = cells
                .iter()
                .filter(|c| c.problem == p)
                .map(|c| (c.records[a].final_best.fitness.objective, c.records[a].seed))
                .unzip();
            sets.push(RunSet::new(alg.name(), name.clone(), values, seeds)?);
        }
    }
    Ok(sets)
}
