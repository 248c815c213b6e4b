use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// Objective value together with total constraint violation.
///
/// Unconstrained problems always report `violation == 0`, in which case the
/// ordering reduces to comparing objectives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fitness {
    pub objective: f64,
    pub violation: f64,
}

impl Fitness {
    /// NaN objectives become `+inf`; NaN or negative violations are normalized.
    pub fn new(objective: f64, violation: f64) -> Self {
        let objective = if objective.is_nan() {
            f64::INFINITY
        } else {
            objective
        };
        let violation = if violation.is_nan() {
            f64::INFINITY
        } else {
            violation.max(0.0)
        };
        Self {
            objective,
            violation,
        }
    }

    pub fn unconstrained(objective: f64) -> Self {
        Self::new(objective, 0.0)
    }

    pub fn worst() -> Self {
        Self::new(f64::INFINITY, f64::INFINITY)
    }

    pub fn is_feasible(&self) -> bool {
        self.violation == 0.0
    }

    /// Strict improvement under the feasibility rules.
    pub fn better_than(&self, other: &Fitness) -> bool {
        feasibility_compare(self, other) == Ordering::Less
    }
}

/// Feasibility rules: a feasible point beats an infeasible one, two feasible
/// points compare by objective and two infeasible points by total violation.
/// `Less` means `a` is better.
pub fn feasibility_compare(a: &Fitness, b: &Fitness) -> Ordering {
    match (a.is_feasible(), b.is_feasible()) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (true, true) => a.objective.total_cmp(&b.objective),
        (false, false) => a.violation.total_cmp(&b.violation),
    }
}

/// Evaluation contract shared by every optimizer in the crate.
///
/// Implementations must be pure: the same `x` always yields the same fitness.
pub trait Problem {
    fn dim(&self) -> usize;

    fn evaluate(&self, x: &[f64]) -> Fitness;

    fn name(&self) -> &str {
        "problem"
    }
}

impl<P: Problem + ?Sized> Problem for &P {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn evaluate(&self, x: &[f64]) -> Fitness {
        (**self).evaluate(x)
    }

    fn name(&self) -> &str {
        (**self).name()
    }
}

/// Wraps a plain closure as an unconstrained problem.
pub struct FnProblem<F> {
    dim: usize,
    name: String,
    f: F,
}

impl<F: Fn(&[f64]) -> f64> FnProblem<F> {
    pub fn new(name: impl Into<String>, dim: usize, f: F) -> Self {
        Self {
            dim,
            name: name.into(),
            f,
        }
    }
}

impl<F: Fn(&[f64]) -> f64> Problem for FnProblem<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn evaluate(&self, x: &[f64]) -> Fitness {
        Fitness::unconstrained((self.f)(x))
    }

    fn name(&self) -> &str {
        &self.name
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feasible_beats_infeasible() {
        let a = Fitness::new(5.0, 0.0);
        let b = Fitness::new(1.0, 0.2);
        assert_eq!(feasibility_compare(&a, &b), Ordering::Less);
        assert!(a.better_than(&b));
    }

    #[test]
    fn feasibles_by_objective() {
        let a = Fitness::new(2.0, 0.0);
        let b = Fitness::new(3.0, 0.0);
        assert_eq!(feasibility_compare(&a, &b), Ordering::Less);
    }

    #[test]
    fn infeasibles_by_violation() {
        let a = Fitness::new(9.0, 0.1);
        let b = Fitness::new(1.0, 0.5);
        assert_eq!(feasibility_compare(&a, &b), Ordering::Less);
    }

    #[test]
    fn nan_is_never_better() {
        let nan = Fitness::unconstrained(f64::NAN);
        assert_eq!(nan.objective, f64::INFINITY);
        assert!(!nan.better_than(&Fitness::unconstrained(1e300)));
        assert!(!nan.better_than(&Fitness::unconstrained(f64::INFINITY)));
        assert!(Fitness::unconstrained(0.0).better_than(&nan));
    }
}
