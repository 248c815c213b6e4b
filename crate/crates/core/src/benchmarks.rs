//! Unconstrained test functions grouped by landscape category.
//!
//! Every problem evaluates `f(R (x - shift))` for a base function `f` whose
//! global minimum is 0 at the origin. Hybrid problems split the transformed
//! vector in half between two base functions; composition problems blend
//! three shifted components with distance-based weights.

use std::f64::consts::{E, PI};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{Fitness, Problem};
use crate::rng::RngStream;
use crate::space::SearchSpace;

const ORTHOGONALITY_TOL: f64 = 1e-6;
const SUITE_SEED: u64 = 0x5eed_cec0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Category {
    Unimodal,
    SimpleMultimodal,
    Hybrid,
    Composition,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Category::Unimodal => "unimodal",
            Category::SimpleMultimodal => "simple-multimodal",
            Category::Hybrid => "hybrid",
            Category::Composition => "composition",
        };
        f.write_str(s)
    }
}

/// Base functions, each with minimum 0 at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaseFunction {
    Sphere,
    BentCigar,
    Zakharov,
    Rastrigin,
    Ackley,
    Griewank,
    /// Rosenbrock evaluated at `z + 1`.
    Rosenbrock,
    /// Schwefel 2.26 evaluated at `z + 420.968...`.
    Schwefel,
}

const SCHWEFEL_OFFSET: f64 = 420.968_746_227_503_6;
const SCHWEFEL_CONST: f64 = 418.982_887_272_433_9;

impl BaseFunction {
    pub const ALL: [BaseFunction; 8] = [
        BaseFunction::Sphere,
        BaseFunction::BentCigar,
        BaseFunction::Zakharov,
        BaseFunction::Rastrigin,
        BaseFunction::Ackley,
        BaseFunction::Griewank,
        BaseFunction::Rosenbrock,
        BaseFunction::Schwefel,
    ];

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn name(&self) -> &'static str {
        match self {
            BaseFunction::Sphere => "sphere",
            BaseFunction::BentCigar => "bent_cigar",
            BaseFunction::Zakharov => "zakharov",
            BaseFunction::Rastrigin => "rastrigin",
            BaseFunction::Ackley => "ackley",
            BaseFunction::Griewank => "griewank",
            BaseFunction::Rosenbrock => "rosenbrock",
            BaseFunction::Schwefel => "schwefel",
        }
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        let n = z.len() as f64;
        match self {
            BaseFunction::Sphere => z.iter().map(|v| v * v).sum(),
            BaseFunction::BentCigar => match z.split_first() {
                Some((first, rest)) => first * first + 1e6 * rest.iter().map(|v| v * v).sum::<f64>(),
                None => 0.0,
            },
            BaseFunction::Zakharov => {
                let s1: f64 = z.iter().map(|v| v * v).sum();
                let s2: f64 = z
                    .iter()
                    .enumerate()
                    .map(|(i, v)| 0.5 * (i + 1) as f64 * v)
                    .sum();
                s1 + s2.powi(2) + s2.powi(4)
            }
            BaseFunction::Rastrigin => z
                .iter()
                .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
                .sum(),
            BaseFunction::Ackley => {
                if z.is_empty() {
                    return 0.0;
                }
                let sq: f64 = z.iter().map(|v| v * v).sum::<f64>() / n;
                let cs: f64 = z.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
                let value = -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E;
                // exp(1) and e differ by an ulp at the origin
                value.max(0.0)
            }
            BaseFunction::Griewank => {
                let s: f64 = z.iter().map(|v| v * v).sum::<f64>() / 4000.0;
                let p: f64 = z
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                    .product();
                s - p + 1.0
            }
            BaseFunction::Rosenbrock => z
                .windows(2)
                .map(|w| {
                    let (a, b) = (w[0] + 1.0, w[1] + 1.0);
                    100.0 * (b - a * a).powi(2) + (1.0 - a).powi(2)
                })
                .sum(),
            BaseFunction::Schwefel => {
                let s: f64 = z
                    .iter()
                    .map(|v| {
                        let y = v + SCHWEFEL_OFFSET;
                        y * y.abs().sqrt().sin()
                    })
                    .sum();
                (SCHWEFEL_CONST * n - s).max(0.0)
            }
        }
    }
}

/// One component of a composition problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub function: BaseFunction,
    pub shift: Vec<f64>,
    pub sigma: f64,
    pub lambda: f64,
    pub bias: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Landscape {
    Single(BaseFunction),
    /// First `split` transformed coordinates go to `head`, the rest to `tail`.
    Hybrid {
        head: BaseFunction,
        tail: BaseFunction,
        split: usize,
    },
    Composition(Vec<Component>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkProblem {
    pub name: String,
    pub category: Category,
    pub space: SearchSpace,
    pub landscape: Landscape,
    pub known_optimum: Option<f64>,
    pub shift: Option<Vec<f64>>,
    /// Row-major `dim x dim` orthogonal matrix.
    pub rotation: Option<Vec<f64>>,
}

impl BenchmarkProblem {
    /// Unshifted, unrotated base function on `[-100, 100]^dim`.
    pub fn plain(function: BaseFunction, dim: usize) -> Result<Self> {
        Ok(Self {
            name: function.name().to_string(),
            category: match function {
                BaseFunction::Sphere | BaseFunction::BentCigar | BaseFunction::Zakharov => {
                    Category::Unimodal
                }
                _ => Category::SimpleMultimodal,
            },
            space: SearchSpace::uniform(dim, -100.0, 100.0)?,
            landscape: Landscape::Single(function),
            known_optimum: Some(0.0),
            shift: None,
            rotation: None,
        })
    }

    pub fn with_shift(mut self, shift: Vec<f64>) -> Result<Self> {
        if shift.len() != self.dim() {
            return Err(Error::config(format!(
                "shift has length {}, expected {}",
                shift.len(),
                self.dim()
            )));
        }
        self.shift = Some(shift);
        Ok(self)
    }

    pub fn with_rotation(mut self, rotation: Vec<f64>) -> Result<Self> {
        let dim = self.dim();
        if rotation.len() != dim * dim {
            return Err(Error::config(format!(
                "rotation has {} entries, expected {}",
                rotation.len(),
                dim * dim
            )));
        }
        if let Some(err) = orthogonality_error(&rotation, dim).filter(|e| *e >= 1e-9) {
            return Err(Error::config(format!(
                "rotation is not orthogonal: max |R^T R - I| = {err:e}"
            )));
        }
        self.rotation = Some(rotation);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `R (x - shift)`.
    pub fn transform(&self, x: &[f64]) -> Vec<f64> {
        let shifted: Vec<f64> = match &self.shift {
            Some(s) => x.iter().zip(s).map(|(a, b)| a - b).collect(),
            None => x.to_vec(),
        };
        match &self.rotation {
            Some(r) => {
                let d = shifted.len();
                (0..d)
                    .map(|i| (0..d).map(|j| r[i * d + j] * shifted[j]).sum())
                    .collect()
            }
            None => shifted,
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::config(format!(
                "{}: point has dimension {}, expected {}",
                self.name,
                x.len(),
                self.dim()
            )));
        }
        Ok(self.value(x))
    }

    fn value(&self, x: &[f64]) -> f64 {
        match &self.landscape {
            Landscape::Single(f) => f.eval(&self.transform(x)),
            Landscape::Hybrid { head, tail, split } => {
                let z = self.transform(x);
                let (a, b) = z.split_at((*split).min(z.len()));
                head.eval(a) + tail.eval(b)
            }
            Landscape::Composition(components) => composition_value(components, x),
        }
    }

    /// Location of the global minimum when it is known in closed form.
    pub fn optimizer(&self) -> Option<Vec<f64>> {
        self.known_optimum?;
        match &self.landscape {
            Landscape::Composition(components) => components.first().map(|c| c.shift.clone()),
            _ => Some(self.shift.clone().unwrap_or_else(|| vec![0.0; self.dim()])),
        }
    }
}

impl Problem for BenchmarkProblem {
    fn dim(&self) -> usize {
        self.space.dim()
    }

    fn evaluate(&self, x: &[f64]) -> Fitness {
        Fitness::unconstrained(self.value(x))
    }

    fn name(&self) -> &str {
        &self.name
    }
}

fn composition_value(components: &[Component], x: &[f64]) -> f64 {
    let d = x.len() as f64;
    let mut weights = Vec::with_capacity(components.len());
    let mut values = Vec::with_capacity(components.len());
    for c in components {
        let z: Vec<f64> = x.iter().zip(&c.shift).map(|(a, b)| a - b).collect();
        let dist2: f64 = z.iter().map(|v| v * v).sum();
        values.push(c.lambda * c.function.eval(&z) + c.bias);
        if dist2 == 0.0 {
            weights.push(f64::INFINITY);
        } else {
            weights.push((-dist2 / (2.0 * d * c.sigma * c.sigma)).exp() / dist2.sqrt());
        }
    }
    if let Some(i) = weights.iter().position(|w| w.is_infinite()) {
        return values[i];
    }
    let total: f64 = weights.iter().sum();
    if total == 0.0 || !total.is_finite() {
        // far from every component: fall back to the cheapest one
        return values.iter().cloned().fold(f64::INFINITY, f64::min);
    }
    weights.iter().zip(&values).map(|(w, v)| w / total * v).sum()
}

/// `max |R^T R - I|`, or `None` when `r` is not `dim x dim`.
pub fn orthogonality_error(r: &[f64], dim: usize) -> Option<f64> {
    if r.len() != dim * dim {
        return None;
    }
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let dot: f64 = (0..dim).map(|k| r[k * dim + i] * r[k * dim + j]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot - target).abs());
        }
    }
    Some(worst)
}

/// Random orthogonal matrix (row-major) by Gram-Schmidt on Gaussian rows.
pub fn random_rotation(dim: usize, rng: &mut RngStream) -> Vec<f64> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(dim);
    while rows.len() < dim {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.standard_normal()).collect();
        for _ in 0..2 {
            for r in &rows {
                let dot: f64 = v.iter().zip(r).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(r).for_each(|(a, b)| *a -= dot * b);
            }
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-8 {
            rows.push(v.into_iter().map(|a| a / norm).collect());
        }
    }
    rows.concat()
}

fn random_shift(dim: usize, rng: &mut RngStream) -> Vec<f64> {
    (0..dim).map(|_| rng.uniform_in(-80.0, 80.0)).collect()
}

/// Twelve problems, at least two per category, on `[-100, 100]^dim`.
///
/// Shifts and rotations come from a fixed internal seed, so the suite is
/// identical across calls.
pub fn standard_suite(dim: usize) -> Result<Vec<BenchmarkProblem>> {
    if dim < 2 {
        return Err(Error::config("benchmark suite needs dim >= 2"));
    }
    let mut rng = RngStream::new(SUITE_SEED);
    let mut suite = Vec::new();

    let singles = [
        (BaseFunction::Sphere, false),
        (BaseFunction::BentCigar, true),
        (BaseFunction::Zakharov, false),
        (BaseFunction::Rastrigin, false),
        (BaseFunction::Ackley, true),
        (BaseFunction::Griewank, true),
        (BaseFunction::Rosenbrock, false),
        (BaseFunction::Schwefel, false),
    ];
    for (f, rotate) in singles {
        let shift = random_shift(dim, &mut rng);
        let mut p = BenchmarkProblem::plain(f, dim)?.with_shift(shift)?;
        if rotate {
            p = p.with_rotation(random_rotation(dim, &mut rng))?;
            p.name = format!("rotated_{}", f.name());
        } else {
            p.name = format!("shifted_{}", f.name());
        }
        suite.push(p);
    }

    let hybrids = [
        (BaseFunction::Zakharov, BaseFunction::Rastrigin),
        (BaseFunction::Rosenbrock, BaseFunction::Ackley),
    ];
    for (head, tail) in hybrids {
        let shift = random_shift(dim, &mut rng);
        let rotation = random_rotation(dim, &mut rng);
        let p = BenchmarkProblem {
            name: format!("hybrid_{}_{}", head.name(), tail.name()),
            category: Category::Hybrid,
            space: SearchSpace::uniform(dim, -100.0, 100.0)?,
            landscape: Landscape::Hybrid {
                head,
                tail,
                split: dim / 2,
            },
            known_optimum: Some(0.0),
            shift: None,
            rotation: None,
        }
        .with_shift(shift)?
        .with_rotation(rotation)?;
        suite.push(p);
    }

    let compositions = [
        [
            (BaseFunction::Rastrigin, 10.0, 1.0),
            (BaseFunction::Griewank, 20.0, 10.0),
            (BaseFunction::Sphere, 30.0, 1e-6),
        ],
        [
            (BaseFunction::Ackley, 10.0, 1.0),
            (BaseFunction::Schwefel, 20.0, 1.0),
            (BaseFunction::Rastrigin, 30.0, 1.0),
        ],
    ];
    for (c, spec) in compositions.iter().enumerate() {
        let components = spec
            .iter()
            .zip([0.0, 100.0, 200.0])
            .map(|(&(function, sigma, lambda), bias)| Component {
                function,
                shift: random_shift(dim, &mut rng),
                sigma,
                lambda,
                bias,
            })
            .collect();
        suite.push(BenchmarkProblem {
            name: format!("composition_{}", c + 1),
            category: Category::Composition,
            space: SearchSpace::uniform(dim, -100.0, 100.0)?,
            landscape: Landscape::Composition(components),
            known_optimum: Some(0.0),
            shift: None,
            rotation: None,
        });
    }
    Ok(suite)
}

/// Reads a shift vector and a row-major rotation from a whitespace-separated
/// file: `dim` shift values followed by `dim * dim` matrix entries.
pub fn load_offsets(path: &Path, dim: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_offsets(&text, dim).map_err(|e| match e {
        Error::Ingestion {
            line,
            column,
            message,
            ..
        } => Error::ingestion(Some(path), line, column, message),
        other => other,
    })
}

/// Parsing half of [`load_offsets`].
pub fn parse_offsets(text: &str, dim: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let expected = dim + dim * dim;
    let mut values = Vec::with_capacity(expected);
    for (ln, line) in text.lines().enumerate() {
        let mut col = 0;
        for token in line.split_whitespace() {
            // 1-based column of the token start
            let start = line[col..].find(token).map(|p| p + col).unwrap_or(col);
            col = start + token.len();
            let v: f64 = token.parse().map_err(|_| {
                Error::ingestion(
                    None,
                    Some(ln + 1),
                    Some(start + 1),
                    format!("cannot parse {token:?} as a real number"),
                )
            })?;
            if !v.is_finite() {
                return Err(Error::ingestion(
                    None,
                    Some(ln + 1),
                    Some(start + 1),
                    format!("non-finite value {token:?}"),
                ));
            }
            values.push(v);
        }
    }
    if values.len() != expected {
        return Err(Error::ingestion(
            None,
            None,
            None,
            format!(
                "expected {expected} values ({dim} shift + {} rotation), found {}",
                dim * dim,
                values.len()
            ),
        ));
    }
    let rotation = values.split_off(dim);
    let err = orthogonality_error(&rotation, dim).unwrap_or(f64::INFINITY);
    if err > ORTHOGONALITY_TOL {
        return Err(Error::ingestion(
            None,
            None,
            None,
            format!("rotation matrix is not orthogonal: max |R^T R - I| = {err:e}"),
        ));
    }
    Ok((values, rotation))
}
