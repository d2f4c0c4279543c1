//! Cross-algorithm scores from `results.csv` rows.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use samtpso::metrics::{format_sci, mean_std, score_with, FevTable, StdKind, TaskSummary};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::output::{fmt_f64, ResultRow};

pub const SCORES_FILE: &str = "scores.csv";

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemScores {
    pub problem: usize,
    /// `summaries[algorithm][task]`: sample mean and std over runs.
    pub summaries: Vec<Vec<TaskSummary>>,
    pub scores: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    /// Labels in order of first appearance.
    pub algorithms: Vec<String>,
    pub problems: Vec<ProblemScores>,
    /// Arithmetic mean of the per-problem scores, per algorithm.
    pub mean: Vec<f64>,
}

// algorithm -> problem -> task -> run -> fev
type Grouped = Vec<BTreeMap<usize, BTreeMap<usize, BTreeMap<usize, f64>>>>;

fn group(rows: &[ResultRow]) -> Result<(Vec<String>, Grouped)> {
    let mut labels: Vec<String> = Vec::new();
    let mut grouped: Grouped = Vec::new();
    for r in rows {
        let a = match labels.iter().position(|l| *l == r.algorithm) {
            Some(a) => a,
            None => {
                labels.push(r.algorithm.clone());
                grouped.push(BTreeMap::new());
                labels.len() - 1
            }
        };
        let slot = grouped[a]
            .entry(r.problem)
            .or_default()
            .entry(r.task)
            .or_default();
        if slot.insert(r.run, r.final_fev).is_some() {
            return Err(HarnessError::Mismatch(format!(
                "{} problem {} task {} run {} appears more than once",
                r.algorithm, r.problem, r.task, r.run
            )));
        }
    }
    Ok((labels, grouped))
}

/// Scores every problem across all algorithms found in `rows`. All
/// algorithms must cover the same problems, tasks and runs.
pub fn score_rows(rows: &[ResultRow], kind: StdKind) -> Result<ScoreReport> {
    let (algorithms, grouped) = group(rows)?;
    if algorithms.len() < 2 {
        return Err(HarnessError::Mismatch(format!(
            "scoring needs at least two algorithms, found {}",
            algorithms.len()
        )));
    }
    let reference = &grouped[0];
    for (a, g) in grouped.iter().enumerate().skip(1) {
        let ids = |m: &BTreeMap<usize, _>| m.keys().copied().collect::<Vec<_>>();
        if ids(g) != ids(reference) {
            return Err(HarnessError::Mismatch(format!(
                "{} covers problems {:?} but {} covers {:?}",
                algorithms[a],
                ids(g),
                algorithms[0],
                ids(reference)
            )));
        }
    }

    let mut problems = Vec::with_capacity(reference.len());
    for (&problem, tasks) in reference {
        let task_ids: Vec<usize> = tasks.keys().copied().collect();
        let run_ids: Vec<usize> = tasks.values().next().map(|r| r.keys().copied().collect()).unwrap_or_default();
        let mut values = Vec::with_capacity(algorithms.len());
        for (a, g) in grouped.iter().enumerate() {
            let per_task = &g[&problem];
            if per_task.keys().copied().collect::<Vec<_>>() != task_ids {
                return Err(HarnessError::Mismatch(format!(
                    "{} has different tasks on problem {problem}",
                    algorithms[a]
                )));
            }
            let mut v = Vec::with_capacity(task_ids.len());
            for (task, runs) in per_task {
                if runs.keys().copied().collect::<Vec<_>>() != run_ids {
                    return Err(HarnessError::Mismatch(format!(
                        "{} has different runs on problem {problem} task {task}",
                        algorithms[a]
                    )));
                }
                v.push(runs.values().copied().collect::<Vec<f64>>());
            }
            values.push(v);
        }
        let summaries = values
            .iter()
            .map(|per_task| {
                per_task
                    .iter()
                    .map(|fevs| {
                        let (mean, std) = mean_std(fevs, StdKind::Sample).expect("runs present");
                        TaskSummary { mean, std }
                    })
                    .collect()
            })
            .collect();
        let table = FevTable::new(values)?;
        problems.push(ProblemScores {
            problem,
            summaries,
            scores: score_with(&table, kind),
        });
    }
    let n = problems.len() as f64;
    let mean = (0..algorithms.len())
        .map(|a| problems.iter().map(|p| p.scores[a]).sum::<f64>() / n)
        .collect();
    Ok(ScoreReport {
        algorithms,
        problems,
        mean,
    })
}

/// Table with one mean(std) and score column pair per algorithm, one row
/// per (problem, task) and a final row of mean scores.
pub fn render_table(report: &ScoreReport) -> String {
    const CELL: usize = 18;
    const SCORE: usize = 10;
    let mut out = String::new();
    let _ = write!(out, "{:<8}{:<6}", "Problem", "Task");
    for a in &report.algorithms {
        let _ = write!(out, "{:<width$}", a, width = CELL + SCORE + 2);
    }
    out.push('\n');
    let _ = write!(out, "{:<14}", "");
    for _ in &report.algorithms {
        let _ = write!(out, "{:<CELL$}{:<SCORE$}  ", "Mean(Std)", "Score");
    }
    out.push('\n');
    for p in &report.problems {
        let tasks = p.summaries.first().map_or(0, Vec::len);
        for t in 0..tasks {
            let problem = if t == 0 { p.problem.to_string() } else { String::new() };
            let _ = write!(out, "{:<8}{:<6}", problem, format!("T{}", t + 1));
            for (a, summaries) in p.summaries.iter().enumerate() {
                let score = if t == 0 { format_sci(p.scores[a]) } else { String::new() };
                let _ = write!(out, "{:<CELL$}{:<SCORE$}  ", summaries[t].cell(), score);
            }
            out.push('\n');
        }
    }
    let _ = write!(out, "{:<14}", "Mean");
    for m in &report.mean {
        let _ = write!(out, "{:<CELL$}{:<SCORE$}  ", "-", format_sci(*m));
    }
    out.push('\n');
    out
}

/// One line of `scores.csv`; `problem` is a problem id or `mean`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub algorithm: String,
    pub problem: String,
    pub score: f64,
}

pub fn score_table_rows(report: &ScoreReport) -> Vec<ScoreRow> {
    let mut rows = Vec::new();
    for (a, label) in report.algorithms.iter().enumerate() {
        for p in &report.problems {
            rows.push(ScoreRow {
                algorithm: label.clone(),
                problem: p.problem.to_string(),
                score: p.scores[a],
            });
        }
        rows.push(ScoreRow {
            algorithm: label.clone(),
            problem: "mean".into(),
            score: report.mean[a],
        });
    }
    rows
}

pub fn write_scores(path: &Path, report: &ScoreReport) -> Result<()> {
    let err = |e| HarnessError::csv(path, e);
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    w.write_record(["algorithm", "problem", "score"]).map_err(err)?;
    for r in score_table_rows(report) {
        w.write_record([r.algorithm.as_str(), &r.problem, &fmt_f64(r.score)])
            .map_err(err)?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

pub fn read_scores(path: &Path) -> Result<Vec<ScoreRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| HarnessError::csv(path, e))?;
    r.deserialize()
        .collect::<std::result::Result<Vec<ScoreRow>, _>>()
        .map_err(|e| HarnessError::csv(path, e))
}
