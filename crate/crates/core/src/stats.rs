//! Multi-run summaries and the two-sided Wilcoxon rank-sum test.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Final best values of independent runs of one algorithm on one problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSet {
    pub algorithm: String,
    pub problem: String,
    pub values: Vec<f64>,
    pub seeds: Vec<u64>,
}

impl RunSet {
    pub fn new(
        algorithm: impl Into<String>,
        problem: impl Into<String>,
        values: Vec<f64>,
        seeds: Vec<u64>,
    ) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::config("a run set needs at least one value"));
        }
        if values.len() != seeds.len() {
            return Err(Error::config(format!(
                "{} values but {} seeds",
                values.len(),
                seeds.len()
            )));
        }
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::config("run seeds must be distinct"));
        }
        Ok(Self {
            algorithm: algorithm.into(),
            problem: problem.into(),
            values,
            seeds,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub best: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for a single run.
    pub std: f64,
    pub mean: f64,
    pub runs: usize,
}

impl Summary {
    /// True when `std` was defined as 0 because only one run exists.
    pub fn is_degenerate(&self) -> bool {
        self.runs < 2
    }
}

pub fn summarize(rs: &RunSet) -> Summary {
    summarize_values(&rs.values)
}

/// Minimum, sample standard deviation and mean of a non-empty slice.
pub fn summarize_values(values: &[f64]) -> Summary {
    assert!(!values.is_empty(), "summary of an empty sample");
    let n = values.len();
    let best = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = values.iter().sum::<f64>() / n as f64;
    let std = if n < 2 {
        0.0
    } else {
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        (ss / (n - 1) as f64).sqrt()
    };
    Summary {
        best,
        std,
        mean,
        runs: n,
    }
}

/// Midranks (1-based) of the pooled sample and the tie groups' sizes.
fn pooled_ranks(a: &[f64], b: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&i, &j| pooled[i].total_cmp(&pooled[j]));
    let mut ranks = vec![0.0; pooled.len()];
    let mut ties = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && pooled[order[end]] == pooled[order[start]] {
            end += 1;
        }
        let mid = (start + end + 1) as f64 / 2.0;
        for &k in &order[start..end] {
            ranks[k] = mid;
        }
        if end - start > 1 {
            ties.push(end - start);
        }
        start = end;
    }
    (ranks, ties)
}

fn check_samples(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() < 3 || b.len() < 3 {
        return Err(Error::domain(format!(
            "rank-sum test needs at least 3 values per sample, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        return Err(Error::domain("rank-sum test input contains NaN"));
    }
    Ok(())
}

/// Mann-Whitney U of `a`: its rank sum minus the minimum possible.
fn u_statistic(ranks: &[f64], n: usize) -> f64 {
    ranks[..n].iter().sum::<f64>() - (n * (n + 1)) as f64 / 2.0
}

/// Two-sided rank-sum p-value from the normal approximation with
/// continuity and tie corrections. Returns 1 when every value is identical.
pub fn wilcoxon_ranksum(a: &[f64], b: &[f64]) -> Result<f64> {
    check_samples(a, b)?;
    let (n, m) = (a.len() as f64, b.len() as f64);
    let total = n + m;
    let (ranks, ties) = pooled_ranks(a, b);
    let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum();
    let var = n * m / 12.0 * ((total + 1.0) - tie_term / (total * (total - 1.0)));
    if var <= 0.0 {
        return Ok(1.0);
    }
    let dev = (u_statistic(&ranks, a.len()) - n * m / 2.0).abs();
    let z = ((dev - 0.5).max(0.0)) / var.sqrt();
    let p = libm::erfc(z / std::f64::consts::SQRT_2);
    Ok(p.clamp(f64::MIN_POSITIVE, 1.0))
}

/// Two-sided rank-sum p-value from the exact null distribution of U.
/// Defined for tie-free samples only.
pub fn wilcoxon_ranksum_exact(a: &[f64], b: &[f64]) -> Result<f64> {
    check_samples(a, b)?;
    let (ranks, ties) = pooled_ranks(a, b);
    if !ties.is_empty() {
        return Err(Error::domain("exact rank-sum distribution requires tie-free samples"));
    }
    let (n, m) = (a.len(), b.len());
    let u = u_statistic(&ranks, n).round() as usize;
    let dist = u_distribution(n, m);
    let total: f64 = dist.iter().sum();
    let lower: f64 = dist[..=u].iter().sum::<f64>() / total;
    let upper: f64 = dist[u..].iter().sum::<f64>() / total;
    Ok((2.0 * lower.min(upper)).min(1.0))
}

/// Counts of each U value in 0..=n*m over all C(n+m, n) rank assignments.
fn u_distribution(n: usize, m: usize) -> Vec<f64> {
    // f[j][u]: ways to choose j of the ranks seen so far with U = u, where
    // U counts pairs (x in a, y in b) with y < x.
    let max_u = n * m;
    let mut f = vec![vec![0.0f64; max_u + 1]; n + 1];
    f[0][0] = 1.0;
    for pos in 0..n + m {
        for j in (1..=n.min(pos + 1)).rev() {
            // Placing an a-value at this position adds one per b-value below.
            let below_b = pos + 1 - j;
            if below_b > m {
                continue;
            }
            for u in (below_b..=max_u).rev() {
                let add = f[j - 1][u - below_b];
                f[j][u] += add;
            }
        }
    }
    f.swap_remove(n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub problem: String,
    pub algorithm: String,
    pub best: f64,
    pub std: f64,
    pub mean: f64,
    pub runs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseP {
    pub problem: String,
    pub algorithm_a: String,
    pub algorithm_b: String,
    pub p_value: f64,
}

/// Per-problem summaries of several algorithms plus pairwise rank-sum
/// p-values. `std` uses the n - 1 denominator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub algorithms: Vec<String>,
    pub problems: Vec<String>,
    pub rows: Vec<SummaryRow>,
    pub p_values: Vec<PairwiseP>,
}

impl ComparisonTable {
    /// Builds the table with problems and algorithms in first-seen order.
    /// Pairs where either side has fewer than 3 runs get no p-value.
    pub fn from_run_sets(sets: &[RunSet]) -> Result<Self> {
        let mut algorithms: Vec<String> = Vec::new();
        let mut problems: Vec<String> = Vec::new();
        let mut cells: BTreeMap<(usize, usize), &RunSet> = BTreeMap::new();
        for rs in sets {
            let a = index_of(&mut algorithms, &rs.algorithm);
            let p = index_of(&mut problems, &rs.problem);
            if cells.insert((p, a), rs).is_some() {
                return Err(Error::config(format!(
                    "duplicate run set for {} on {}",
                    rs.algorithm, rs.problem
                )));
            }
        }
        let mut rows = Vec::new();
        let mut p_values = Vec::new();
        for (pi, problem) in problems.iter().enumerate() {
            for (ai, algorithm) in algorithms.iter().enumerate() {
                if let Some(rs) = cells.get(&(pi, ai)) {
                    let s = summarize(rs);
                    rows.push(SummaryRow {
                        problem: problem.clone(),
                        algorithm: algorithm.clone(),
                        best: s.best,
                        std: s.std,
                        mean: s.mean,
                        runs: s.runs,
                    });
                }
            }
            for ai in 0..algorithms.len() {
                for bi in ai + 1..algorithms.len() {
                    let (Some(x), Some(y)) = (cells.get(&(pi, ai)), cells.get(&(pi, bi))) else {
                        continue;
                    };
                    if x.values.len() < 3 || y.values.len() < 3 {
                        continue;
                    }
                    p_values.push(PairwiseP {
                        problem: problem.clone(),
                        algorithm_a: algorithms[ai].clone(),
                        algorithm_b: algorithms[bi].clone(),
                        p_value: wilcoxon_ranksum(&x.values, &y.values)?,
                    });
                }
            }
        }
        Ok(Self {
            algorithms,
            problems,
            rows,
            p_values,
        })
    }

    pub fn row(&self, problem: &str, algorithm: &str) -> Option<&SummaryRow> {
        self.rows
            .iter()
            .find(|r| r.problem == problem && r.algorithm == algorithm)
    }

    pub fn p_value(&self, problem: &str, a: &str, b: &str) -> Option<f64> {
        self.p_values
            .iter()
            .find(|r| {
                r.problem == problem
                    && ((r.algorithm_a == a && r.algorithm_b == b)
                        || (r.algorithm_a == b && r.algorithm_b == a))
            })
            .map(|r| r.p_value)
    }

    /// Columns `problem,metric,<algorithm>...` with best/std/mean rows per
    /// problem. Missing cells are left empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("problem,metric");
        for a in &self.algorithms {
            out.push(',');
            out.push_str(&csv_field(a));
        }
        out.push('\n');
        for problem in &self.problems {
            for metric in ["best", "std", "mean"] {
                out.push_str(&csv_field(problem));
                out.push(',');
                out.push_str(metric);
                for a in &self.algorithms {
                    out.push(',');
                    if let Some(r) = self.row(problem, a) {
                        let v = match metric {
                            "best" => r.best,
                            "std" => r.std,
                            _ => r.mean,
                        };
                        out.push_str(&format_value(v));
                    }
                }
                out.push('\n');
            }
        }
        out
    }

    /// Columns `problem,algorithm_a,algorithm_b,p_value`.
    pub fn p_values_csv(&self) -> String {
        let mut out = String::from("problem,algorithm_a,algorithm_b,p_value\n");
        for r in &self.p_values {
            out.push_str(&format!(
                "{},{},{},{}\n",
                csv_field(&r.problem),
                csv_field(&r.algorithm_a),
                csv_field(&r.algorithm_b),
                format_value(r.p_value)
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            std_denominator: &'a str,
            p_value_method: &'a str,
            #[serde(flatten)]
            table: &'a ComparisonTable,
        }
        let doc = Doc {
            std_denominator: "n-1",
            p_value_method: "two-sided rank-sum, normal approximation with tie and continuity correction",
            table: self,
        };
        serde_json::to_string_pretty(&doc).expect("table serializes") + "\n"
    }
}

fn index_of(list: &mut Vec<String>, name: &str) -> usize {
    match list.iter().position(|s| s == name) {
        Some(i) => i,
        None => {
            list.push(name.to_string());
            list.len() - 1
        }
    }
}

/// Shortest round-trip representation; stable across runs and platforms.
pub fn format_value(v: f64) -> String {
    if v.is_finite() {
        format!("{v:e}")
    } else if v.is_nan() {
        "nan".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
