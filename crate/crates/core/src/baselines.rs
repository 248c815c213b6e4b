//! Reference optimizers sharing the [`Problem`] contract: global-best PSO
//! and uniform random search.

use serde::{Deserialize, Serialize};

use crate::cgo::{Individual, RunRecord};
use crate::error::{Error, Result};
use crate::problem::{Fitness, Problem};
use crate::rng::RngStream;
use crate::space::SearchSpace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsoParams {
    pub swarm_size: usize,
    pub max_iterations: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    /// Velocity limit as a fraction of each coordinate's range.
    pub velocity_clamp: f64,
    /// Stop once this many objective calls have been made.
    pub max_evaluations: Option<u64>,
    pub seed: u64,
}

impl Default for PsoParams {
    fn default() -> Self {
        Self {
            swarm_size: 50,
            max_iterations: 1000,
            inertia: 0.729,
            cognitive: 1.49445,
            social: 1.49445,
            velocity_clamp: 0.2,
            max_evaluations: None,
            seed: 0,
        }
    }
}

impl PsoParams {
    pub fn validate(&self) -> Result<()> {
        if self.swarm_size == 0 {
            return Err(Error::config("swarm size must be positive"));
        }
        if !(0.0..=1.0).contains(&self.inertia) {
            return Err(Error::config(format!("inertia {} outside [0, 1]", self.inertia)));
        }
        if !(self.cognitive > 0.0 && self.social > 0.0) {
            return Err(Error::config("acceleration coefficients must be positive"));
        }
        if !(self.velocity_clamp > 0.0 && self.velocity_clamp <= 1.0) {
            return Err(Error::config(format!(
                "velocity clamp {} outside (0, 1]",
                self.velocity_clamp
            )));
        }
        Ok(())
    }
}

struct Budget {
    used: u64,
    limit: u64,
}

impl Budget {
    fn exhausted(&self) -> bool {
        self.used >= self.limit
    }
}

fn check_dim<P: Problem + ?Sized>(space: &SearchSpace, problem: &P) -> Result<()> {
    if problem.dim() != space.dim() {
        return Err(Error::config(format!(
            "problem dimension {} does not match search space dimension {}",
            problem.dim(),
            space.dim()
        )));
    }
    Ok(())
}

fn eval<P: Problem + ?Sized>(problem: &P, x: &[f64], budget: &mut Budget) -> Fitness {
    budget.used += 1;
    let f = problem.evaluate(x);
    Fitness::new(f.objective, f.violation)
}

/// Global-best PSO with inertia weight. Positions are clamped to the box,
/// velocities to `velocity_clamp * (upper - lower)`.
pub fn pso_run<P: Problem + ?Sized>(
    space: &SearchSpace,
    params: &PsoParams,
    problem: &P,
) -> Result<RunRecord> {
    pso_run_observed(space, params, problem, |_, _| {})
}

/// [`pso_run`] reporting positions and velocities after every iteration.
pub fn pso_run_observed<P, F>(
    space: &SearchSpace,
    params: &PsoParams,
    problem: &P,
    mut observe: F,
) -> Result<RunRecord>
where
    P: Problem + ?Sized,
    F: FnMut(&[Vec<f64>], &[Vec<f64>]),
{
    params.validate()?;
    check_dim(space, problem)?;
    let dim = space.dim();
    let n = params.swarm_size;
    let vmax: Vec<f64> = (0..dim).map(|j| params.velocity_clamp * space.width(j)).collect();
    let mut rng = RngStream::new(params.seed);
    let mut budget = Budget {
        used: 0,
        limit: params.max_evaluations.unwrap_or(u64::MAX),
    };

    let mut positions = Vec::with_capacity(n);
    let mut velocities = Vec::with_capacity(n);
    let mut personal: Vec<Individual> = Vec::with_capacity(n);
    for _ in 0..n {
        let x: Vec<f64> = (0..dim)
            .map(|j| space.lower()[j] + rng.uniform() * space.width(j))
            .collect();
        let v: Vec<f64> = (0..dim).map(|j| rng.uniform_in(-vmax[j], vmax[j])).collect();
        let fitness = if budget.exhausted() {
            Fitness::worst()
        } else {
            eval(problem, &x, &mut budget)
        };
        personal.push(Individual {
            position: x.clone(),
            fitness,
        });
        positions.push(x);
        velocities.push(v);
    }
    let mut best = personal
        .iter()
        .fold(None::<&Individual>, |acc, p| match acc {
            Some(b) if !p.better_than(b) => Some(b),
            _ => Some(p),
        })
        .cloned()
        .expect("swarm is non-empty");

    let mut trace = Vec::with_capacity(params.max_iterations);
    let mut evaluations_trace = Vec::with_capacity(params.max_iterations);
    for _ in 0..params.max_iterations {
        if budget.exhausted() {
            break;
        }
        for i in 0..n {
            if budget.exhausted() {
                break;
            }
            for j in 0..dim {
                let r1 = rng.uniform();
                let r2 = rng.uniform();
                let v = params.inertia * velocities[i][j]
                    + params.cognitive * r1 * (personal[i].position[j] - positions[i][j])
                    + params.social * r2 * (best.position[j] - positions[i][j]);
                velocities[i][j] = v.clamp(-vmax[j], vmax[j]);
                positions[i][j] += velocities[i][j];
            }
            space.clamp(&mut positions[i]);
            let f = eval(problem, &positions[i], &mut budget);
            if f.better_than(&personal[i].fitness) {
                personal[i] = Individual {
                    position: positions[i].clone(),
                    fitness: f,
                };
                if f.better_than(&best.fitness) {
                    best = personal[i].clone();
                }
            }
        }
        trace.push(best.fitness);
        evaluations_trace.push(budget.used);
        observe(&positions, &velocities);
    }
    Ok(RunRecord {
        algorithm: "pso".to_string(),
        trace,
        evaluations_trace,
        final_best: best,
        evaluations: budget.used,
        seed: params.seed,
    })
}

/// `budget` uniform samples from the box; the trace holds the running best
/// after each sample.
pub fn random_search_run<P: Problem + ?Sized>(
    space: &SearchSpace,
    budget: u64,
    seed: u64,
    problem: &P,
) -> Result<RunRecord> {
    if budget == 0 {
        return Err(Error::config("random search budget must be at least 1"));
    }
    check_dim(space, problem)?;
    let mut rng = RngStream::new(seed);
    let mut best: Option<Individual> = None;
    let mut trace = Vec::with_capacity(budget as usize);
    for _ in 0..budget {
        let x: Vec<f64> = (0..space.dim())
            .map(|j| space.lower()[j] + rng.uniform() * space.width(j))
            .collect();
        let f = problem.evaluate(&x);
        let f = Fitness::new(f.objective, f.violation);
        if best.as_ref().is_none_or(|b| f.better_than(&b.fitness)) {
            best = Some(Individual {
                position: x,
                fitness: f,
            });
        }
        trace.push(best.as_ref().expect("set above").fitness);
    }
    Ok(RunRecord {
        algorithm: "random".to_string(),
        trace,
        evaluations_trace: (1..=budget).collect(),
        final_best: best.expect("budget >= 1"),
        evaluations: budget,
        seed,
    })
}
