//! CSV and manifest files.
//!
//! Floats are written in shortest round-trip form, so parsing a file gives
//! back exactly the values that were computed.

use std::fs;
use std::path::{Path, PathBuf};

use samtpso::metrics::transfer_rates;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::experiment::ExperimentResults;

pub const RESULTS_FILE: &str = "results.csv";
pub const CONVERGENCE_FILE: &str = "convergence.csv";
pub const TRANSFER_FILE: &str = "transfer.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Shortest decimal text that parses back to `x`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// One line of `results.csv`; task and run indices are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub experiment: String,
    pub algorithm: String,
    pub problem: usize,
    pub task: usize,
    pub run: usize,
    pub seed: u64,
    pub final_fev: f64,
}

/// Final FEVs of every run, in output order.
pub fn result_rows(res: &ExperimentResults) -> Vec<ResultRow> {
    let exp = &res.experiment;
    res.cells
        .iter()
        .flat_map(|c| {
            c.result.final_fev.iter().enumerate().map(move |(t, &fev)| ResultRow {
                experiment: exp.name.clone(),
                algorithm: exp.algorithms[c.cell.algorithm].0.clone(),
                problem: c.cell.problem,
                task: t + 1,
                run: c.cell.run,
                seed: c.cell.seed,
                final_fev: fev,
            })
        })
        .collect()
}

fn writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|e| HarnessError::csv(path, e))
}

fn write_rows<I>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = writer(path)?;
    w.write_record(header).map_err(|e| HarnessError::csv(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| HarnessError::csv(path, e))?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

pub fn write_results(path: &Path, rows: &[ResultRow]) -> Result<()> {
    write_rows(
        path,
        &["experiment", "algorithm", "problem", "task", "run", "seed", "final_fev"],
        rows.iter().map(|r| {
            vec![
                r.experiment.clone(),
                r.algorithm.clone(),
                r.problem.to_string(),
                r.task.to_string(),
                r.run.to_string(),
                r.seed.to_string(),
                fmt_f64(r.final_fev),
            ]
        }),
    )
}

pub fn write_convergence(path: &Path, res: &ExperimentResults) -> Result<()> {
    let exp = &res.experiment;
    let rows = res.cells.iter().flat_map(|c| {
        let label = &exp.algorithms[c.cell.algorithm].0;
        c.result.best_fev_trace.iter().enumerate().flat_map(move |(g, row)| {
            row.iter().enumerate().map(move |(t, &fev)| {
                vec![
                    label.clone(),
                    c.cell.problem.to_string(),
                    c.cell.run.to_string(),
                    (g + 1).to_string(),
                    (t + 1).to_string(),
                    fmt_f64(fev),
                ]
            })
        })
    });
    write_rows(
        path,
        &["algorithm", "problem", "run", "generation", "task", "best_fev"],
        rows,
    )
}

/// Per-generation source-choice fractions; the baseline contributes no rows.
pub fn write_transfer(path: &Path, res: &ExperimentResults) -> Result<()> {
    let exp = &res.experiment;
    let mut w = writer(path)?;
    let err = |e| HarnessError::csv(path, e);
    w.write_record(["algorithm", "problem", "run", "generation", "task", "source", "fraction"])
        .map_err(err)?;
    for c in &res.cells {
        let Ok(stats) = transfer_rates(&c.result) else {
            continue;
        };
        let label = &exp.algorithms[c.cell.algorithm].0;
        let (problem, run) = (c.cell.problem.to_string(), c.cell.run.to_string());
        for (g, per_task) in stats.per_generation.iter().enumerate() {
            let generation = (g + 1).to_string();
            for (t, per_source) in per_task.iter().enumerate() {
                let task = (t + 1).to_string();
                for (k, &fraction) in per_source.iter().enumerate() {
                    w.write_record([
                        label.as_str(),
                        &problem,
                        &run,
                        &generation,
                        &task,
                        &(k + 1).to_string(),
                        &fmt_f64(fraction),
                    ])
                    .map_err(err)?;
                }
            }
        }
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

/// Writes results, convergence and transfer tables plus the manifest into
/// `dir`, creating it if needed.
pub fn write_all(dir: &Path, res: &ExperimentResults) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let results = dir.join(RESULTS_FILE);
    write_results(&results, &result_rows(res))?;
    let convergence = dir.join(CONVERGENCE_FILE);
    write_convergence(&convergence, res)?;
    let transfer = dir.join(TRANSFER_FILE);
    write_transfer(&transfer, res)?;
    let manifest = dir.join(MANIFEST_FILE);
    let mut exp = res.experiment.clone();
    exp.output_dir = dir.to_path_buf();
    fs::write(&manifest, exp.manifest_json()).map_err(|e| HarnessError::io(&manifest, e))?;
    Ok(vec![results, convergence, transfer, manifest])
}

pub fn read_results(path: &Path) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| HarnessError::csv(path, e))?;
    r.deserialize()
        .collect::<std::result::Result<Vec<ResultRow>, _>>()
        .map_err(|e| HarnessError::csv(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.0, 1.0, 0.1, 6.0e-3, 1e-300, 123456789.125, f64::MIN_POSITIVE, 2.0f64.sqrt()] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(1e-7), "1e-7");
        assert_eq!(fmt_f64(2.5), "2.5");
    }

    #[test]
    fn results_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        let rows = vec![
            ResultRow {
                experiment: "e".into(),
                algorithm: "PSO".into(),
                problem: 3,
                task: 2,
                run: 1,
                seed: u64::MAX,
                final_fev: 1.0 / 3.0,
            },
            ResultRow {
                experiment: "e".into(),
                algorithm: "bp=0.1".into(),
                problem: 1,
                task: 1,
                run: 2,
                seed: 0,
                final_fev: 4.2e-12,
            },
        ];
        write_results(&path, &rows).unwrap();
        assert_eq!(read_results(&path).unwrap(), rows);
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("experiment,algorithm,problem,task,run,seed,final_fev\n"));
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let err = read_results(Path::new("/nonexistent/results.csv")).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }
}
