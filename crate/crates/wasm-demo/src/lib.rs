//! Browser bindings for the interactive demo page in `www/`.
//!
//! Each export returns a JSON document; the plain `*_json` functions carry
//! the logic and are what the native tests exercise.

use cgo_core::benchmarks::{BaseFunction, BenchmarkProblem};
use cgo_core::levy::LevyFlight;
use cgo_core::uav::{build_scenarios, path_svg, CostBreakdown};
use cgo_core::{CgoParams, RngStream};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const HALF_WIDTH: f64 = 5.0;

#[derive(Serialize)]
struct SwarmRun {
    function: &'static str,
    bounds: [f64; 2],
    optimum: [f64; 2],
    /// Best objective after each iteration.
    trace: Vec<f64>,
    /// Population positions after initialization and after each iteration.
    snapshots: Vec<Vec<[f64; 2]>>,
    best: [f64; 2],
    best_value: f64,
    evaluations: u64,
}

fn function(name: &str) -> Result<BaseFunction, String> {
    BaseFunction::from_name(name).ok_or_else(|| {
        let valid: Vec<&str> = BaseFunction::ALL.iter().map(|f| f.name()).collect();
        format!("unknown function {name:?}; valid: {}", valid.join(", "))
    })
}

/// 2-D problem on `[-5, 5]^2`; Schwefel keeps the full `[-100, 100]^2`.
fn problem_2d(name: &str) -> Result<BenchmarkProblem, String> {
    let f = function(name)?;
    let mut p = BenchmarkProblem::plain(f, 2).map_err(|e| e.to_string())?;
    if f != BaseFunction::Schwefel {
        p.space = cgo_core::SearchSpace::uniform(2, -HALF_WIDTH, HALF_WIDTH).map_err(|e| e.to_string())?;
    }
    Ok(p)
}

pub fn cgo_run_json(name: &str, population: usize, iterations: usize, seed: u32) -> Result<String, String> {
    if iterations > 2000 {
        return Err("at most 2000 iterations".into());
    }
    let problem = problem_2d(name)?;
    let params = CgoParams::new(population, iterations, u64::from(seed));
    let mut snapshots = Vec::with_capacity(iterations + 1);
    let rec = cgo_core::cgo::run_observed(&problem.space, &params, &problem, |pop| {
        snapshots.push(pop.members().iter().map(|m| [m.position[0], m.position[1]]).collect());
    })
    .map_err(|e| e.to_string())?;
    let optimum = problem.optimizer().unwrap_or_else(|| vec![0.0, 0.0]);
    let run = SwarmRun {
        function: problem_name(name)?,
        bounds: [problem.space.lower()[0], problem.space.upper()[0]],
        optimum: [optimum[0], optimum[1]],
        trace: rec.best_trace(),
        snapshots,
        best: [rec.final_best.position[0], rec.final_best.position[1]],
        best_value: rec.final_best.fitness.objective,
        evaluations: rec.evaluations,
    };
    Ok(serde_json::to_string(&run).expect("run serializes"))
}

fn problem_name(name: &str) -> Result<&'static str, String> {
    function(name).map(|f| f.name())
}

/// Objective values on a `resolution x resolution` grid over the demo box,
/// row-major with `y` increasing by row.
pub fn landscape_grid(name: &str, resolution: usize) -> Result<Vec<f64>, String> {
    if !(2..=512).contains(&resolution) {
        return Err("resolution must lie in 2..=512".into());
    }
    let p = problem_2d(name)?;
    let (lo, hi) = (p.space.lower()[0], p.space.upper()[0]);
    let step = (hi - lo) / (resolution - 1) as f64;
    let mut out = Vec::with_capacity(resolution * resolution);
    for r in 0..resolution {
        for c in 0..resolution {
            let x = [lo + c as f64 * step, lo + r as f64 * step];
            out.push(p.evaluate(&x).map_err(|e| e.to_string())?);
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct LevyWalk {
    beta: f64,
    sigma: f64,
    /// Raw step samples along the first axis.
    steps: Vec<f64>,
    /// Cumulative 2-D walk starting at the origin.
    walk: Vec<[f64; 2]>,
}

pub fn levy_walk_json(beta: f64, count: usize, seed: u32) -> Result<String, String> {
    if count == 0 || count > 100_000 {
        return Err("count must lie in 1..=100000".into());
    }
    let levy = LevyFlight::new(beta).map_err(|e| e.to_string())?;
    let mut rng = RngStream::new(u64::from(seed));
    let mut steps = Vec::with_capacity(count);
    let mut walk = Vec::with_capacity(count + 1);
    let mut at = [0.0, 0.0];
    walk.push(at);
    for _ in 0..count {
        let (dx, dy) = (levy.sample(&mut rng), levy.sample(&mut rng));
        steps.push(dx);
        at = [at[0] + dx, at[1] + dy];
        walk.push(at);
    }
    let doc = LevyWalk {
        beta,
        sigma: levy.sigma(),
        steps,
        walk,
    };
    Ok(serde_json::to_string(&doc).expect("walk serializes"))
}

#[derive(Serialize)]
struct UavPlan {
    scenario: String,
    svg: String,
    costs: CostBreakdown,
    chord: f64,
    length_ratio: f64,
    collision_free: bool,
    within_height_band: bool,
    trace: Vec<f64>,
}

pub fn uav_plan_json(scenario: &str, iterations: usize, seed: u32) -> Result<String, String> {
    if iterations == 0 || iterations > 1000 {
        return Err("iterations must lie in 1..=1000".into());
    }
    let (one, two) = build_scenarios();
    let s = match scenario {
        "one" | "dense" => one,
        "two" | "sparse" => two,
        other => return Err(format!("unknown scenario {other:?}; valid: one, two")),
    };
    let rec = cgo_core::run(&s.search_space(), &CgoParams::new(50, iterations, u64::from(seed)), &s)
        .map_err(|e| e.to_string())?;
    let path = s.decode(&rec.final_best.position).map_err(|e| e.to_string())?;
    let costs = s.breakdown(&path);
    let plan = UavPlan {
        scenario: s.name().to_string(),
        svg: path_svg(&s, &path),
        chord: s.chord_length(),
        length_ratio: costs.length / s.chord_length(),
        costs,
        collision_free: s.is_collision_free(&path),
        within_height_band: s.within_height_band(&path),
        trace: rec.best_trace(),
    };
    Ok(serde_json::to_string(&plan).expect("plan serializes"))
}

/// CGO on a 2-D base function with population snapshots for animation.
#[wasm_bindgen(js_name = runCgo)]
pub fn run_cgo(function: &str, population: usize, iterations: usize, seed: u32) -> Result<String, JsError> {
    cgo_run_json(function, population, iterations, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = landscape)]
pub fn landscape(function: &str, resolution: usize) -> Result<Vec<f64>, JsError> {
    landscape_grid(function, resolution).map_err(|e| JsError::new(&e))
}

/// Levy step samples and the 2-D walk they trace.
#[wasm_bindgen(js_name = levyWalk)]
pub fn levy_walk(beta: f64, count: usize, seed: u32) -> Result<String, JsError> {
    levy_walk_json(beta, count, seed).map_err(|e| JsError::new(&e))
}

/// Plans a path through a built-in UAV scenario and renders it as SVG.
#[wasm_bindgen(js_name = planUav)]
pub fn plan_uav(scenario: &str, iterations: usize, seed: u32) -> Result<String, JsError> {
    uav_plan_json(scenario, iterations, seed).map_err(|e| JsError::new(&e))
}
