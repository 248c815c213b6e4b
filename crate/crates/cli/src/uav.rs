use std::path::Path;

use cgo_core::stats::{ComparisonTable, RunSet};
use cgo_core::uav::{build_scenarios, path_csv, path_svg, CostBreakdown, Scenario};
use serde::Serialize;

use crate::{run_grid, runs_csv, write_file, write_traces, CliError, ExperimentConfig, Result};

/// `one`/`dense` and `two`/`sparse` name the built-in scenarios; anything
/// else is read as a TOML scenario file.
pub fn resolve_scenario(selector: &str) -> Result<Scenario> {
    let (one, two) = build_scenarios();
    match selector {
        "one" | "dense" => Ok(one),
        "two" | "sparse" => Ok(two),
        path => {
            let path = Path::new(path);
            if !path.exists() {
                return Err(CliError::Usage(format!(
                    "scenario {:?} is neither a built-in (one, two) nor an existing file",
                    path.display()
                )));
            }
            Ok(Scenario::load(path)?)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestPath {
    pub algorithm: String,
    pub run: usize,
    pub seed: u64,
    pub costs: CostBreakdown,
    pub clearances: Vec<f64>,
    pub collision_free: bool,
    pub within_height_band: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UavReport {
    pub table: ComparisonTable,
    pub best: Vec<BestPath>,
    /// Final best total cost of every run, per algorithm in config order.
    pub run_costs: Vec<Vec<f64>>,
}

/// Optimizes the scenario's total cost. Writes the summary tables, and for
/// each algorithm its best path as `path_<algo>.csv` and `path_<algo>.svg`
/// with the cost breakdown in `costs.json`.
pub fn cmd_uav(cfg: &ExperimentConfig, scenario: &Scenario) -> Result<UavReport> {
    cfg.validate()?;
    let problems = [scenario.clone()];
    let names = vec![scenario.name().to_string()];
    let cells = run_grid(&problems, cfg, Scenario::search_space)?;

    let mut sets = Vec::new();
    let mut best = Vec::new();
    let mut run_costs = Vec::new();
    for (a, alg) in cfg.algorithms.iter().enumerate() {
        let costs: Vec<f64> = cells
            .iter()
            .map(|c| c.records[a].final_best.fitness.objective)
            .collect();
        sets.push(RunSet::new(
            alg.name(),
            scenario.name(),
            costs.clone(),
            cells.iter().map(|c| c.records[a].seed).collect(),
        )?);
        let winner = cells
            .iter()
            .min_by(|x, y| {
                x.records[a]
                    .final_best
                    .fitness
                    .objective
                    .total_cmp(&y.records[a].final_best.fitness.objective)
            })
            .expect("at least one run");
        let rec = &winner.records[a];
        let path = scenario.decode(&rec.final_best.position)?;
        write_file(&cfg.out.join(format!("path_{alg}.csv")), &path_csv(&path))?;
        write_file(&cfg.out.join(format!("path_{alg}.svg")), &path_svg(scenario, &path))?;
        best.push(BestPath {
            algorithm: alg.name().to_string(),
            run: winner.run,
            seed: rec.seed,
            costs: scenario.breakdown(&path),
            clearances: scenario.clearances(&path),
            collision_free: scenario.is_collision_free(&path),
            within_height_band: scenario.within_height_band(&path),
        });
        run_costs.push(costs);
    }
    let table = ComparisonTable::from_run_sets(&sets)?;
    let costs_json = serde_json::to_string_pretty(&best).expect("costs serialize") + "\n";
    write_file(&cfg.out.join("costs.json"), &costs_json)?;
    write_file(&cfg.out.join("summary.json"), &table.to_json())?;
    write_file(&cfg.out.join("summary.csv"), &table.to_csv())?;
    write_file(&cfg.out.join("pvalues.csv"), &table.p_values_csv())?;
    write_file(&cfg.out.join("runs.csv"), &runs_csv(&names, &cells))?;
    if cfg.emit_traces {
        write_traces(&cfg.out, &names, &cells)?;
    }
    Ok(UavReport {
        table,
        best,
        run_costs,
    })
}
