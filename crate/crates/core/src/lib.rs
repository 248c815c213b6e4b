//! Competitive game optimizer (CGO) and the problems used to evaluate it.
//!
//! - [`cgo`]: the optimizer itself.
//! - [`benchmarks`], [`engineering`], [`uav`]: problem families.
//! - [`baselines`]: global-best PSO and uniform random search.
//! - [`stats`]: multi-run summaries and the rank-sum test.

pub mod baselines;
pub mod benchmarks;
pub mod cgo;
pub mod engineering;
mod error;
pub mod levy;
mod problem;
mod rng;
mod space;
pub mod stats;
pub mod uav;

pub use cgo::{encounter_probability, run, CgoParams, Individual, Population, RunRecord};
pub use error::{Error, Result};
pub use problem::{feasibility_compare, FnProblem, Fitness, Problem};
pub use rng::RngStream;
pub use space::SearchSpace;
