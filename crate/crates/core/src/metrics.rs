//! FEV statistics, the cross-algorithm performance score and knowledge-source
//! choice rates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimizer::RunResult;

/// Standard deviation convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StdKind {
    /// Denominator `n`.
    #[default]
    Population,
    /// Denominator `n − 1`.
    Sample,
}

impl std::str::FromStr for StdKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "population" => Ok(StdKind::Population),
            "sample" => Ok(StdKind::Sample),
            _ => Err(format!("unknown std kind `{s}` (population|sample)")),
        }
    }
}

/// FEVs indexed by (algorithm q, task j, run l).
#[derive(Debug, Clone, PartialEq)]
pub struct FevTable {
    algorithms: usize,
    tasks: usize,
    runs: usize,
    values: Vec<f64>,
}

impl FevTable {
    /// Builds a table from `values[q][j][l]`.
    pub fn new(values: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let algorithms = values.len();
        let tasks = values.first().map_or(0, Vec::len);
        let runs = values.first().and_then(|a| a.first()).map_or(0, Vec::len);
        if algorithms == 0 || tasks == 0 || runs == 0 {
            return Err(Error::InvalidTable("table is empty".into()));
        }
        let mut flat = Vec::with_capacity(algorithms * tasks * runs);
        for (q, per_task) in values.into_iter().enumerate() {
            if per_task.len() != tasks {
                return Err(Error::InvalidTable(format!(
                    "algorithm {q} has {} tasks, expected {tasks}",
                    per_task.len()
                )));
            }
            for (j, per_run) in per_task.into_iter().enumerate() {
                if per_run.len() != runs {
                    return Err(Error::InvalidTable(format!(
                        "algorithm {q}, task {j} has {} runs, expected {runs}",
                        per_run.len()
                    )));
                }
                if let Some(bad) = per_run.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
                    return Err(Error::InvalidTable(format!(
                        "algorithm {q}, task {j}: FEV {bad} is not a finite nonnegative number"
                    )));
                }
                flat.extend(per_run);
            }
        }
        Ok(FevTable {
            algorithms,
            tasks,
            runs,
            values: flat,
        })
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.algorithms, self.tasks, self.runs)
    }

    pub fn get(&self, q: usize, j: usize, l: usize) -> f64 {
        self.values[(q * self.tasks + j) * self.runs + l]
    }

    fn task_values(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.algorithms).flat_map(move |q| (0..self.runs).map(move |l| self.get(q, j, l)))
    }
}

/// Mean and standard deviation of `values`; `None` when empty.
pub fn mean_std(values: &[f64], kind: StdKind) -> Option<(f64, f64)> {
    let n = values.len();
    if n == 0 {
        return None;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    let denom = match kind {
        StdKind::Population => n as f64,
        StdKind::Sample if n > 1 => (n - 1) as f64,
        StdKind::Sample => return Some((mean, 0.0)),
    };
    Some((mean, (ss / denom).sqrt()))
}

/// Score per algorithm with population standard deviations.
pub fn score(table: &FevTable) -> Vec<f64> {
    score_with(table, StdKind::Population)
}

/// `score_q = Σ_j Σ_l (I_qjl − μ_j) / σ_j`, with `μ_j` and `σ_j` pooled over
/// all algorithms and runs of task `j`. Lower is better. A task whose pooled
/// FEVs are all equal contributes nothing.
pub fn score_with(table: &FevTable, kind: StdKind) -> Vec<f64> {
    let (q_count, k_count, l_count) = table.shape();
    let mut scores = vec![0.0; q_count];
    for j in 0..k_count {
        let pooled: Vec<f64> = table.task_values(j).collect();
        let (mu, sigma) = mean_std(&pooled, kind).expect("non-empty table");
        if !(sigma > 0.0) {
            log::warn!("task {} has zero FEV spread; it contributes 0 to every score", j + 1);
            continue;
        }
        for (q, s) in scores.iter_mut().enumerate() {
            *s += (0..l_count).map(|l| (table.get(q, j, l) - mu) / sigma).sum::<f64>();
        }
    }
    scores
}

/// Sample mean and standard deviation of one task's final FEVs over runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaskSummary {
    pub mean: f64,
    pub std: f64,
}

impl TaskSummary {
    /// `mean(std)` in two-decimal scientific notation, e.g. `6.00E-3(7.70E-3)`.
    pub fn cell(&self) -> String {
        format_mean_std(self.mean, self.std)
    }
}

/// Per-task statistics of the final FEVs over a set of runs of one problem.
pub fn aggregate(results: &[RunResult]) -> Vec<TaskSummary> {
    let Some(first) = results.first() else {
        return Vec::new();
    };
    (0..first.num_tasks)
        .map(|t| {
            let fevs: Vec<f64> = results.iter().map(|r| r.final_fev[t]).collect();
            let (mean, std) = mean_std(&fevs, StdKind::Sample).expect("non-empty");
            TaskSummary { mean, std }
        })
        .collect()
}

/// Two-decimal scientific notation with an explicit exponent sign:
/// `6.00E-3`, `2.17E+1`.
pub fn format_sci(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let s = format!("{x:.2e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}E{sign}{}", exp.abs())
}

pub fn format_mean_std(mean: f64, std: f64) -> String {
    format!("{}({})", format_sci(mean), format_sci(std))
}

/// Source-choice fractions of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferStats {
    /// `itk[t][k]`: mean over generations of the fraction of task `t`'s
    /// particles that chose source `k`. Off-diagonal entries are the
    /// inter-task transfer rates.
    pub itk: Vec<Vec<f64>>,
    /// `per_generation[g][t][k]`.
    pub per_generation: Vec<Vec<Vec<f64>>>,
}

pub fn transfer_rates(result: &RunResult) -> Result<TransferStats> {
    let counts = result.source_counts.as_ref().ok_or(Error::NoSourceChoices)?;
    if counts.is_empty() {
        return Err(Error::NoSourceChoices);
    }
    let k = result.num_tasks;
    let n = result.pop_per_task as f64;
    let per_generation: Vec<Vec<Vec<f64>>> = counts
        .iter()
        .map(|row| {
            (0..k)
                .map(|t| (0..k).map(|s| f64::from(row[t * k + s]) / n).collect())
                .collect()
        })
        .collect();
    let gens = per_generation.len() as f64;
    let itk = (0..k)
        .map(|t| {
            (0..k)
                .map(|s| per_generation.iter().map(|g| g[t][s]).sum::<f64>() / gens)
                .collect()
        })
        .collect();
    Ok(TransferStats {
        itk,
        per_generation,
    })
}
