use cgo_core::engineering::{suite, ConstrainedProblem};
use cgo_core::stats::{format_value, ComparisonTable, RunSet};
use serde::Serialize;

use crate::{run_grid, runs_csv, select, write_file, write_traces, ExperimentConfig, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfeasibleCount {
    pub problem: String,
    pub algorithm: String,
    pub runs: usize,
    pub infeasible: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineeringReport {
    /// Summaries over the runs that ended feasible.
    pub table: ComparisonTable,
    pub infeasible: Vec<InfeasibleCount>,
}

/// Runs the constrained design problems. Only runs whose final best is
/// feasible enter the summary; the rest are counted per cell.
pub fn cmd_engineering(cfg: &ExperimentConfig) -> Result<EngineeringReport> {
    cfg.validate()?;
    let all = suite();
    let problems: Vec<ConstrainedProblem> = select(&all, &cfg.problems, |p| p.name)?
        .into_iter()
        .cloned()
        .collect();
    let names: Vec<String> = problems.iter().map(|p| p.name.to_string()).collect();
    let cells = run_grid(&problems, cfg, |p| p.space.clone())?;

    let mut sets = Vec::new();
    let mut infeasible = Vec::new();
    let mut designs = String::from("problem,algorithm,run,objective,violation,design\n");
    for (p, name) in names.iter().enumerate() {
        for (a, alg) in cfg.algorithms.iter().enumerate() {
            let records: Vec<_> = cells
                .iter()
                .filter(|c| c.problem == p)
                .map(|c| (c.run, &c.records[a]))
                .collect();
            let feasible: Vec<_> = records
                .iter()
                .filter(|(_, r)| r.final_best.fitness.is_feasible())
                .collect();
            infeasible.push(InfeasibleCount {
                problem: name.clone(),
                algorithm: alg.name().to_string(),
                runs: records.len(),
                infeasible: records.len() - feasible.len(),
            });
            if !feasible.is_empty() {
                sets.push(RunSet::new(
                    alg.name(),
                    name.clone(),
                    feasible.iter().map(|(_, r)| r.final_best.fitness.objective).collect(),
                    feasible.iter().map(|(_, r)| r.seed).collect(),
                )?);
            }
            if let Some((run, best)) = records.iter().min_by(|x, y| {
                cgo_core::feasibility_compare(&x.1.final_best.fitness, &y.1.final_best.fitness)
            }) {
                let design: Vec<String> =
                    best.final_best.position.iter().map(|v| format_value(*v)).collect();
                designs.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    name,
                    alg,
                    run,
                    format_value(best.final_best.fitness.objective),
                    format_value(best.final_best.fitness.violation),
                    design.join(" ")
                ));
            }
        }
    }
    let table = ComparisonTable::from_run_sets(&sets)?;

    let mut json: serde_json::Value =
        serde_json::from_str(&table.to_json()).expect("table JSON round-trips");
    json["infeasible_runs"] = serde_json::to_value(&infeasible).expect("counts serialize");
    let json = serde_json::to_string_pretty(&json).expect("report serializes") + "\n";

    write_file(&cfg.out.join("summary.json"), &json)?;
    write_file(&cfg.out.join("summary.csv"), &table.to_csv())?;
    write_file(&cfg.out.join("pvalues.csv"), &table.p_values_csv())?;
    write_file(&cfg.out.join("runs.csv"), &runs_csv(&names, &cells))?;
    write_file(&cfg.out.join("designs.csv"), &designs)?;
    if cfg.emit_traces {
        write_traces(&cfg.out, &names, &cells)?;
    }
    Ok(EngineeringReport { table, infeasible })
}
