//! Expanding an experiment into independent seeded runs and executing them.

use rayon::prelude::*;
use samtpso::benchmarks::{generate_problem, load_problem_file};
use samtpso::rng::{label_hash, mix_seed};
use samtpso::{run, MtoProblem, RunResult};

use crate::error::{HarnessError, Result};
use crate::spec::{ResolvedExperiment, SuiteRef};

/// Seed of one run: a hash of the master seed, the algorithm label, the
/// problem id and the run index.
pub fn run_seed(master_seed: u64, label: &str, problem: usize, run: usize) -> u64 {
    mix_seed(&[master_seed, label_hash(label), problem as u64, run as u64])
}

/// One (algorithm, problem, run) cell of the experiment grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    /// Index into the experiment's algorithm list.
    pub algorithm: usize,
    /// 1-based problem id.
    pub problem: usize,
    /// 1-based run index.
    pub run: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct CellResult {
    pub cell: Cell,
    pub result: RunResult,
}

#[derive(Debug, Clone)]
pub struct ExperimentResults {
    pub experiment: ResolvedExperiment,
    /// Ordered by (algorithm, problem, run).
    pub cells: Vec<CellResult>,
}

/// Builds the problems of an experiment, keyed by id.
pub fn load_problems(exp: &ResolvedExperiment) -> Result<Vec<(usize, MtoProblem)>> {
    exp.problem_ids
        .iter()
        .map(|&id| {
            let problem = match &exp.suite {
                SuiteRef::Generated(suite) => generate_problem(*suite, id, exp.master_seed)?,
                SuiteRef::Files(f) => {
                    let p = load_problem_file(&f.data_dir.join(format!("problem{id}.json")))?;
                    let expected = match f.id {
                        samtpso::benchmarks::SuiteId::Suite1 => 2,
                        samtpso::benchmarks::SuiteId::Suite2 => 5,
                    };
                    if p.num_tasks() != expected {
                        return Err(HarnessError::Config(format!(
                            "problem{id}.json has {} tasks; {} problems have {expected}",
                            p.num_tasks(),
                            f.id
                        )));
                    }
                    p
                }
                SuiteRef::Problem(p) => load_problem_file(&p.problem_file)?,
            };
            Ok((id, problem))
        })
        .collect()
}

/// Every cell of the grid in output order.
pub fn cells(exp: &ResolvedExperiment) -> Vec<Cell> {
    let mut out = Vec::with_capacity(exp.algorithms.len() * exp.problem_ids.len() * exp.runs);
    for (a, (label, _)) in exp.algorithms.iter().enumerate() {
        for &problem in &exp.problem_ids {
            for run in 1..=exp.runs {
                out.push(Cell {
                    algorithm: a,
                    problem,
                    run,
                    seed: run_seed(exp.master_seed, label, problem, run),
                });
            }
        }
    }
    out
}

/// Runs every cell on a pool of `jobs` worker threads. Results do not depend
/// on `jobs`.
pub fn run_experiment(exp: &ResolvedExperiment, jobs: usize) -> Result<ExperimentResults> {
    let problems = load_problems(exp)?;
    let grid = cells(exp);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| HarnessError::Config(format!("cannot start worker pool: {e}")))?;
    log::info!(
        "{}: {} runs on {} worker(s)",
        exp.name,
        grid.len(),
        jobs.max(1)
    );
    let results: Vec<CellResult> = pool.install(|| {
        grid.par_iter()
            .map(|cell| {
                let problem = &problems
                    .iter()
                    .find(|(id, _)| *id == cell.problem)
                    .expect("problem loaded")
                    .1;
                let config = exp.algorithms[cell.algorithm].1.clone().with_seed(cell.seed);
                let result = run(problem, &config)?;
                log::debug!(
                    "{} problem {} run {}: {:?}",
                    exp.algorithms[cell.algorithm].0,
                    cell.problem,
                    cell.run,
                    result.final_fev
                );
                Ok(CellResult {
                    cell: *cell,
                    result,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(ExperimentResults {
        experiment: exp.clone(),
        cells: results,
    })
}
