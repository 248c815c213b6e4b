use std::path::PathBuf;
use std::process::ExitCode;

use cgo_cli::{
    cmd_bench, cmd_engineering, cmd_uav, parse_algorithms, resolve_scenario, BenchConfig, CliError,
    ExperimentConfig,
};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cgo", version, about = "Competitive game optimizer experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Benchmark suite sweep (defaults: N = 50, Tmax = 1000, 30 runs).
    Bench {
        #[command(flatten)]
        common: Common,
        /// Problem dimension.
        #[arg(long, default_value_t = 30)]
        dim: usize,
        /// File with a shift vector followed by a row-major rotation matrix.
        #[arg(long)]
        offsets: Option<PathBuf>,
    },
    /// Constrained design problems (defaults: N = 50, Tmax = 50, 30 runs).
    Engineering {
        #[command(flatten)]
        common: Common,
    },
    /// UAV path planning (defaults: N = 50, Tmax = 300, 20 runs).
    Uav {
        #[command(flatten)]
        common: Common,
        /// Built-in scenario (`one`, `two`) or a TOML scenario file.
        #[arg(long, default_value = "one")]
        scenario: String,
        /// Write the selected scenario as TOML to this file and exit.
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Problem names, comma-separated; all when omitted.
    #[arg(long, value_delimiter = ',')]
    problem: Vec<String>,
    /// Algorithms, comma-separated: cgo, pso, random.
    #[arg(long, default_value = "cgo,pso,random")]
    algo: String,
    #[arg(long)]
    runs: Option<usize>,
    /// Population size.
    #[arg(long, default_value_t = 50)]
    pop: usize,
    #[arg(long)]
    iters: Option<usize>,
    /// Base seed; run k uses seed + k.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Also write one convergence trace CSV per run.
    #[arg(long)]
    emit_traces: bool,
}

impl Common {
    fn into_config(self, runs: usize, iters: usize) -> Result<ExperimentConfig, CliError> {
        Ok(ExperimentConfig {
            problems: self.problem,
            algorithms: parse_algorithms(&self.algo)?,
            runs: self.runs.unwrap_or(runs),
            population: self.pop,
            iterations: self.iters.unwrap_or(iters),
            seed: self.seed,
            out: self.out,
            emit_traces: self.emit_traces,
        })
    }
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Bench {
            common,
            dim,
            offsets,
        } => {
            let cfg = BenchConfig {
                experiment: common.into_config(30, 1000)?,
                dim,
                offsets,
            };
            let table = cmd_bench(&cfg)?;
            print!("{}", table.to_csv());
            eprintln!("wrote results to {}", cfg.experiment.out.display());
        }
        Command::Engineering { common } => {
            let cfg = common.into_config(30, 50)?;
            let report = cmd_engineering(&cfg)?;
            print!("{}", report.table.to_csv());
            for c in report.infeasible.iter().filter(|c| c.infeasible > 0) {
                eprintln!(
                    "{} / {}: {} of {} runs ended infeasible",
                    c.problem, c.algorithm, c.infeasible, c.runs
                );
            }
            eprintln!("wrote results to {}", cfg.out.display());
        }
        Command::Uav {
            common,
            scenario,
            export,
        } => {
            let scenario = resolve_scenario(&scenario)?;
            if let Some(path) = export {
                std::fs::write(&path, scenario.to_toml())
                    .map_err(|e| cgo_core::Error::io(&path, e))?;
                return Ok(());
            }
            if !common.problem.is_empty() {
                return Err(CliError::Usage("uav selects its problem with --scenario".into()));
            }
            let cfg = common.into_config(20, 300)?;
            let report = cmd_uav(&cfg, &scenario)?;
            println!("algorithm,run,length,obstacle,height,total,collision_free");
            for b in &report.best {
                println!(
                    "{},{},{},{},{},{},{}",
                    b.algorithm,
                    b.run,
                    b.costs.length,
                    b.costs.obstacle,
                    b.costs.height,
                    b.costs.total,
                    b.collision_free
                );
            }
            eprintln!("wrote results to {}", cfg.out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
