//! The competitive game optimizer.
//!
//! Each iteration runs three phases over a population of candidate
//! solutions ("players"):
//!
//! 1. **Safe zone**: the worst `worst_fraction` of the population jumps to
//!    `best + chy * (best - x)` with `chy` a standard Cauchy draw. The jump
//!    is unconditional.
//! 2. **Search**: every player proposes `x + alpha * S * |best - x|` with `S`
//!    a Levy-flight step and keeps it only on strict improvement.
//! 3. **Battle**: with probability `E(t) = sqrt(2r - r^2)`, `r = t / Tmax`,
//!    a player meets a random opponent; both get a recombined candidate and
//!    each keeps it only on strict improvement.
//!
//! Candidates leaving the box are clamped to the nearest bound. "Better"
//! always means [`Fitness::better_than`], so constrained problems are handled
//! by the feasibility rules without changing the engine.
//!
//! One Levy step is drawn per player per search phase and shared across that
//! player's coordinates. That reading gives each player its own step scale.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::levy::{cauchy_from_uniform, levy_sigma, LevyFlight};
use crate::problem::{feasibility_compare, Fitness, Problem};
use crate::rng::RngStream;
use crate::space::SearchSpace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CgoParams {
    pub population_size: usize,
    pub max_iterations: usize,
    /// Multiplier on the Levy step in the search phase.
    pub step_scale: f64,
    /// Stability exponent of the Levy flight.
    pub levy_exponent: f64,
    /// Share of the population moved by the safe-zone phase each iteration.
    pub worst_fraction: f64,
    pub seed: u64,
}

impl Default for CgoParams {
    fn default() -> Self {
        Self {
            population_size: 50,
            max_iterations: 1000,
            step_scale: 1.0,
            levy_exponent: 1.5,
            worst_fraction: 0.2,
            seed: 0,
        }
    }
}

impl CgoParams {
    pub fn new(population_size: usize, max_iterations: usize, seed: u64) -> Self {
        Self {
            population_size,
            max_iterations,
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::config(format!(
                "population size must be at least 2, got {}",
                self.population_size
            )));
        }
        if !self.step_scale.is_finite() {
            return Err(Error::config("step scale must be finite"));
        }
        if !(self.worst_fraction > 0.0 && self.worst_fraction < 1.0) {
            return Err(Error::config(format!(
                "worst fraction must lie in (0, 1), got {}",
                self.worst_fraction
            )));
        }
        levy_sigma(self.levy_exponent)?;
        Ok(())
    }

    /// Number of players replaced by the safe-zone phase, `ceil(worst_fraction * N)`.
    pub fn safe_zone_count(&self) -> usize {
        let raw = self.worst_fraction * self.population_size as f64;
        // 0.2 * 50 must give 10, not 11
        let count = (raw - 1e-9).ceil().max(0.0) as usize;
        count.min(self.population_size)
    }
}

/// Encounter probability `sqrt(2r - r^2)` with `r = t / max_iterations`.
pub fn encounter_probability(t: usize, max_iterations: usize) -> Result<f64> {
    if max_iterations == 0 {
        return Err(Error::domain("max_iterations must be at least 1"));
    }
    if t > max_iterations {
        return Err(Error::domain(format!(
            "iteration {t} exceeds max_iterations {max_iterations}"
        )));
    }
    let r = t as f64 / max_iterations as f64;
    Ok((2.0 * r - r * r).max(0.0).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub position: Vec<f64>,
    pub fitness: Fitness,
}

impl Individual {
    pub fn better_than(&self, other: &Individual) -> bool {
        self.fitness.better_than(&other.fitness)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    members: Vec<Individual>,
    best: Individual,
    iteration: usize,
}

impl Population {
    /// Builds a population from already evaluated members.
    pub fn from_members(members: Vec<Individual>) -> Result<Self> {
        let best = members
            .iter()
            .min_by(|a, b| feasibility_compare(&a.fitness, &b.fitness))
            .cloned()
            .ok_or_else(|| Error::config("population must not be empty"))?;
        Ok(Self {
            members,
            best,
            iteration: 0,
        })
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Best point found so far. Never aliased into `members`.
    pub fn best(&self) -> &Individual {
        &self.best
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// Copies the best member into `best` if it strictly improves on it.
    fn sync_best(&mut self) {
        let mut idx = None;
        for (i, m) in self.members.iter().enumerate() {
            let incumbent = idx.map_or(&self.best, |j: usize| &self.members[j]);
            if m.better_than(incumbent) {
                idx = Some(i);
            }
        }
        if let Some(i) = idx {
            self.best = self.members[i].clone();
        }
    }
}

/// `x + step_scale * step * |best - x|`, unclamped.
pub fn search_candidate(position: &[f64], best: &[f64], step_scale: f64, step: f64) -> Vec<f64> {
    position
        .iter()
        .zip(best)
        .map(|(x, b)| x + step_scale * step * (b - x).abs())
        .collect()
}

/// Random coefficients of one coordinate of a battle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BattleDraw {
    /// Mixing weights in `[0, 1)`.
    pub r2: f64,
    pub r3: f64,
    /// Perturbation weights in `[-1, 1)`.
    pub c1: f64,
    pub c2: f64,
}

/// Candidates for the two combatants `i` and `k`, one draw per coordinate.
pub fn battle_candidates(
    xi: &[f64],
    xk: &[f64],
    best: &[f64],
    draws: &[BattleDraw],
) -> (Vec<f64>, Vec<f64>) {
    let mut ci = Vec::with_capacity(xi.len());
    let mut ck = Vec::with_capacity(xi.len());
    for j in 0..xi.len() {
        let BattleDraw { r2, r3, c1, c2 } = draws[j];
        let (a, b, g) = (xi[j], xk[j], best[j]);
        ci.push(r2 * a + (1.0 - r2) * b + c1 * (a - b) + c2 * (g - a));
        ck.push(r3 * b + (1.0 - r3) * a + c2 * (b - a) + c1 * (g - b));
    }
    (ci, ck)
}

/// `best + chy * (best - x)`, unclamped.
pub fn safe_zone_candidate(best: &[f64], position: &[f64], chy: f64) -> Vec<f64> {
    best.iter()
        .zip(position)
        .map(|(g, x)| g + chy * (g - x))
        .collect()
}

/// Result of one optimizer run, shared by every algorithm in the crate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: String,
    /// Best-so-far fitness after each iteration (or sample, for random search).
    pub trace: Vec<Fitness>,
    /// Cumulative objective calls at each trace entry.
    pub evaluations_trace: Vec<u64>,
    pub final_best: Individual,
    pub evaluations: u64,
    pub seed: u64,
}

impl RunRecord {
    /// Objective part of [`RunRecord::trace`].
    pub fn best_trace(&self) -> Vec<f64> {
        self.trace.iter().map(|f| f.objective).collect()
    }
}

/// Stepwise CGO driver. [`run`] is the usual entry point; the individual
/// phases are public so they can be inspected in isolation.
pub struct Cgo<'p, P: Problem + ?Sized> {
    space: SearchSpace,
    params: CgoParams,
    problem: &'p P,
    levy: LevyFlight,
    rng: RngStream,
    evaluations: u64,
}

impl<'p, P: Problem + ?Sized> Cgo<'p, P> {
    pub fn new(space: &SearchSpace, params: &CgoParams, problem: &'p P) -> Result<Self> {
        params.validate()?;
        if problem.dim() != space.dim() {
            return Err(Error::config(format!(
                "problem dimension {} does not match search space dimension {}",
                problem.dim(),
                space.dim()
            )));
        }
        Ok(Self {
            space: space.clone(),
            params: params.clone(),
            problem,
            levy: LevyFlight::new(params.levy_exponent)?,
            rng: RngStream::new(params.seed),
            evaluations: 0,
        })
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn space(&self) -> &SearchSpace {
        &self.space
    }

    fn evaluate(&mut self, x: &[f64]) -> Fitness {
        self.evaluations += 1;
        let f = self.problem.evaluate(x);
        Fitness::new(f.objective, f.violation)
    }

    /// Uniform random placement of the population inside the box.
    pub fn initialize(&mut self) -> Population {
        let n = self.params.population_size;
        let dim = self.space.dim();
        let mut members = Vec::with_capacity(n);
        for _ in 0..n {
            let position: Vec<f64> = (0..dim)
                .map(|j| self.space.lower()[j] + self.rng.uniform() * self.space.width(j))
                .collect();
            let fitness = self.evaluate(&position);
            members.push(Individual { position, fitness });
        }
        Population::from_members(members).expect("population size validated")
    }

    /// Replaces `current` by `candidate` on strict improvement. Identical
    /// candidates are not evaluated.
    fn accept_if_better(&mut self, current: &mut Individual, mut candidate: Vec<f64>) {
        self.space.clamp(&mut candidate);
        if candidate == current.position {
            return;
        }
        let fitness = self.evaluate(&candidate);
        if fitness.better_than(&current.fitness) {
            current.position = candidate;
            current.fitness = fitness;
        }
    }

    /// Levy-flight search move for every member.
    pub fn search_step(&mut self, pop: &mut Population) {
        let best = pop.best.position.clone();
        let alpha = self.params.step_scale;
        for i in 0..pop.members.len() {
            let step = self.levy.sample(&mut self.rng);
            let candidate = search_candidate(&pop.members[i].position, &best, alpha, step);
            let mut member = std::mem::replace(&mut pop.members[i], placeholder());
            self.accept_if_better(&mut member, candidate);
            pop.members[i] = member;
        }
        pop.sync_best();
    }

    /// Pairwise battles gated by `encounter` in `[0, 1]`.
    pub fn battle_step(&mut self, pop: &mut Population, encounter: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&encounter) {
            return Err(Error::domain(format!(
                "encounter probability must lie in [0, 1], got {encounter}"
            )));
        }
        let n = pop.members.len();
        if n < 2 {
            return Ok(());
        }
        let best = pop.best.position.clone();
        let dim = best.len();
        let mut draws = Vec::with_capacity(dim);
        for i in 0..n {
            if self.rng.uniform() >= encounter {
                continue;
            }
            let k = self.rng.index_except(n, i);
            draws.clear();
            for _ in 0..dim {
                draws.push(BattleDraw {
                    r2: self.rng.uniform(),
                    r3: self.rng.uniform(),
                    c1: self.rng.uniform_in(-1.0, 1.0),
                    c2: self.rng.uniform_in(-1.0, 1.0),
                });
            }
            let (ci, ck) = battle_candidates(
                &pop.members[i].position,
                &pop.members[k].position,
                &best,
                &draws,
            );
            let mut mi = std::mem::replace(&mut pop.members[i], placeholder());
            self.accept_if_better(&mut mi, ci);
            pop.members[i] = mi;
            let mut mk = std::mem::replace(&mut pop.members[k], placeholder());
            self.accept_if_better(&mut mk, ck);
            pop.members[k] = mk;
        }
        pop.sync_best();
        Ok(())
    }

    /// Unconditional Cauchy jump of the worst members toward the best point.
    pub fn safe_zone_step(&mut self, pop: &mut Population) {
        let count = self.params.safe_zone_count().min(pop.members.len());
        let mut order: Vec<usize> = (0..pop.members.len()).collect();
        order.sort_by(|&a, &b| feasibility_compare(&pop.members[a].fitness, &pop.members[b].fitness));
        let best = pop.best.position.clone();
        for &i in &order[order.len() - count..] {
            let chy = cauchy_from_uniform(self.rng.uniform());
            let mut candidate = safe_zone_candidate(&best, &pop.members[i].position, chy);
            self.space.clamp(&mut candidate);
            if candidate != pop.members[i].position {
                let fitness = self.evaluate(&candidate);
                pop.members[i] = Individual {
                    position: candidate,
                    fitness,
                };
            }
        }
        pop.sync_best();
    }

    /// One full iteration: safe zone, search, battle.
    pub fn iterate(&mut self, pop: &mut Population) {
        let e = encounter_probability(pop.iteration, self.params.max_iterations.max(1))
            .unwrap_or(1.0);
        self.safe_zone_step(pop);
        self.search_step(pop);
        self.battle_step(pop, e).expect("encounter probability lies in [0, 1]");
        pop.iteration += 1;
    }
}

fn placeholder() -> Individual {
    Individual {
        position: Vec::new(),
        fitness: Fitness::worst(),
    }
}

/// Runs the optimizer for `params.max_iterations` iterations.
pub fn run<P: Problem + ?Sized>(
    space: &SearchSpace,
    params: &CgoParams,
    problem: &P,
) -> Result<RunRecord> {
    run_observed(space, params, problem, |_| {})
}

/// Like [`run`], calling `observe` with the population after initialization
/// and after every iteration.
pub fn run_observed<P, F>(
    space: &SearchSpace,
    params: &CgoParams,
    problem: &P,
    mut observe: F,
) -> Result<RunRecord>
where
    P: Problem + ?Sized,
    F: FnMut(&Population),
{
    let mut engine = Cgo::new(space, params, problem)?;
    let mut pop = engine.initialize();
    observe(&pop);
    let mut trace = Vec::with_capacity(params.max_iterations);
    let mut evaluations_trace = Vec::with_capacity(params.max_iterations);
    for _ in 0..params.max_iterations {
        engine.iterate(&mut pop);
        trace.push(pop.best.fitness);
        evaluations_trace.push(engine.evaluations);
        observe(&pop);
    }
    Ok(RunRecord {
        algorithm: "cgo".to_string(),
        trace,
        evaluations_trace,
        final_best: pop.best.clone(),
        evaluations: engine.evaluations,
        seed: params.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::FnProblem;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    #[test]
    fn defaults() {
        let p = CgoParams::default();
        assert_eq!(p.step_scale, 1.0);
        assert_eq!(p.levy_exponent, 1.5);
        assert_eq!(p.worst_fraction, 0.2);
        assert_eq!(p.safe_zone_count(), 10);
        assert_eq!(CgoParams::new(7, 1, 0).safe_zone_count(), 2);
        assert_eq!(CgoParams::new(2, 1, 0).safe_zone_count(), 1);
    }

    #[test]
    fn encounter_endpoints() {
        assert_eq!(encounter_probability(0, 100).unwrap(), 0.0);
        assert_eq!(encounter_probability(100, 100).unwrap(), 1.0);
        assert!((encounter_probability(50, 100).unwrap() - 0.75f64.sqrt()).abs() < 1e-12);
        assert!(encounter_probability(101, 100).is_err());
        assert!(encounter_probability(0, 0).is_err());
    }

    #[test]
    fn population_size_one_rejected() {
        let space = SearchSpace::uniform(2, 0.0, 1.0).unwrap();
        let f = FnProblem::new("sphere", 2, sphere);
        assert!(matches!(
            run(&space, &CgoParams::new(1, 5, 0), &f),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn dimension_mismatch_is_config_error() {
        let space = SearchSpace::uniform(3, 0.0, 1.0).unwrap();
        let f = FnProblem::new("sphere", 2, sphere);
        assert!(matches!(
            Cgo::new(&space, &CgoParams::default(), &f),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn initialize_within_unit_box() {
        let space = SearchSpace::uniform(2, 0.0, 1.0).unwrap();
        let f = FnProblem::new("sphere", 2, sphere);
        let mut engine = Cgo::new(&space, &CgoParams::new(5, 1, 3), &f).unwrap();
        let pop = engine.initialize();
        assert_eq!(pop.len(), 5);
        for m in pop.members() {
            assert!(m.position.iter().all(|v| (0.0..=1.0).contains(v)));
            assert_eq!(m.fitness.objective, sphere(&m.position));
        }
        let min = pop
            .members()
            .iter()
            .map(|m| m.fitness.objective)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(pop.best().fitness.objective, min);
        assert_eq!(engine.evaluations(), 5);
    }

    #[test]
    fn seeded_initialization_is_bit_identical() {
        let space = SearchSpace::uniform(4, -5.0, 5.0).unwrap();
        let f = FnProblem::new("sphere", 4, sphere);
        let params = CgoParams::new(10, 1, 42);
        let a = Cgo::new(&space, &params, &f).unwrap().initialize();
        let b = Cgo::new(&space, &params, &f).unwrap().initialize();
        assert_eq!(a, b);
    }

    #[test]
    fn search_fixed_point_at_best() {
        let x = [0.3, -2.0, 7.0];
        assert_eq!(search_candidate(&x, &x, 1.0, 123.4), x.to_vec());
    }

    #[test]
    fn battle_degenerates_to_identity() {
        // i sits on the best point, c1 = c2 = 0 and r2 = 1
        let xi = [1.0, -2.0];
        let xk = [5.0, 3.0];
        let draws = [BattleDraw {
            r2: 1.0,
            r3: 0.4,
            c1: 0.0,
            c2: 0.0,
        }; 2];
        let (ci, _) = battle_candidates(&xi, &xk, &xi, &draws);
        assert_eq!(ci, xi.to_vec());
    }

    #[test]
    fn safe_zone_fixed_points() {
        let best = [1.0, 2.0];
        assert_eq!(safe_zone_candidate(&best, &best, 37.0), best.to_vec());
        let chy = cauchy_from_uniform(0.5);
        assert_eq!(safe_zone_candidate(&best, &[9.0, -9.0], chy), best.to_vec());
    }

    #[test]
    fn zero_encounter_leaves_population_unchanged() {
        let space = SearchSpace::uniform(3, -1.0, 1.0).unwrap();
        let f = FnProblem::new("sphere", 3, sphere);
        let mut engine = Cgo::new(&space, &CgoParams::new(8, 10, 5), &f).unwrap();
        let mut pop = engine.initialize();
        let before = pop.clone();
        engine.battle_step(&mut pop, 0.0).unwrap();
        assert_eq!(pop, before);
        assert!(engine.battle_step(&mut pop, 1.5).is_err());
    }

    #[test]
    fn safe_zone_replaces_ten_of_fifty() {
        let space = SearchSpace::uniform(3, -10.0, 10.0).unwrap();
        let f = FnProblem::new("sphere", 3, sphere);
        let mut engine = Cgo::new(&space, &CgoParams::new(50, 10, 11), &f).unwrap();
        let mut pop = engine.initialize();
        let before = pop.clone();
        engine.safe_zone_step(&mut pop);
        let changed = pop
            .members()
            .iter()
            .zip(before.members())
            .filter(|(a, b)| a.position != b.position)
            .count();
        assert_eq!(changed, 10);
        assert_eq!(engine.evaluations(), 60);
    }

    #[test]
    fn degenerate_population_stays_on_best() {
        let space = SearchSpace::uniform(2, -10.0, 10.0).unwrap();
        let f = FnProblem::new("sphere", 2, sphere);
        let at = |p: [f64; 2]| Individual {
            position: p.to_vec(),
            fitness: Fitness::unconstrained(sphere(&p)),
        };
        let mut pop =
            Population::from_members(vec![at([1.0, 1.0]), at([1.0, 1.0]), at([1.0, 1.0])])
                .unwrap();
        let mut engine = Cgo::new(&space, &CgoParams::new(3, 10, 0), &f).unwrap();
        engine.safe_zone_step(&mut pop);
        engine.search_step(&mut pop);
        for m in pop.members() {
            assert_eq!(m.position, vec![1.0, 1.0]);
        }
        assert_eq!(engine.evaluations(), 0);
    }

    #[test]
    fn zero_iterations_returns_initial_best() {
        let space = SearchSpace::uniform(2, -1.0, 1.0).unwrap();
        let f = FnProblem::new("sphere", 2, sphere);
        let params = CgoParams::new(6, 0, 2);
        let rec = run(&space, &params, &f).unwrap();
        let init = Cgo::new(&space, &params, &f).unwrap().initialize();
        assert!(rec.trace.is_empty());
        assert_eq!(&rec.final_best, init.best());
        assert_eq!(rec.evaluations, 6);
    }

    #[test]
    fn nan_objective_never_panics() {
        let space = SearchSpace::uniform(2, -1.0, 1.0).unwrap();
        let f = FnProblem::new("nan", 2, |_| f64::NAN);
        let rec = run(&space, &CgoParams::new(5, 20, 0), &f).unwrap();
        assert_eq!(rec.final_best.fitness.objective, f64::INFINITY);
        assert_eq!(rec.trace.len(), 20);
    }

    #[test]
    fn sphere_improves() {
        let space = SearchSpace::uniform(10, -100.0, 100.0).unwrap();
        let f = FnProblem::new("sphere", 10, sphere);
        let params = CgoParams::new(50, 500, 17);
        let mut engine = Cgo::new(&space, &params, &f).unwrap();
        let initial = engine.initialize().best().fitness.objective;
        let rec = run(&space, &params, &f).unwrap();
        let trace = rec.best_trace();
        assert!(trace.windows(2).all(|w| w[1] <= w[0]));
        assert!(rec.final_best.fitness.objective < initial);
        assert_eq!(rec.final_best.fitness, *rec.trace.last().unwrap());
    }
}
