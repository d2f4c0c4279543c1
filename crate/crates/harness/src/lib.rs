//! Experiment runner for `samtpso`: seeded multi-run experiments written to
//! CSV, cross-algorithm scoring and parameter sweeps.

pub mod error;
pub mod experiment;
pub mod output;
pub mod score;
pub mod spec;
pub mod sweep;

use std::path::{Path, PathBuf};

use samtpso::metrics::StdKind;

pub use error::{HarnessError, Result};
pub use experiment::{run_experiment, run_seed, ExperimentResults};
pub use spec::{ExperimentSpec, ResolvedExperiment};

/// Environment variable that replaces an experiment's master seed.
pub const SEED_ENV: &str = "MTPSO_SEED";

/// Reads the seed override from [`SEED_ENV`], if set.
pub fn seed_from_env() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| HarnessError::Config(format!("{SEED_ENV}: `{v}` is not a 64-bit unsigned integer"))),
        Err(_) => Ok(None),
    }
}

/// Loads and resolves an experiment file, applying the seed override.
pub fn load_experiment(path: &Path, seed_override: Option<u64>) -> Result<ResolvedExperiment> {
    ExperimentSpec::from_path(path)?.resolve(seed_override)
}

/// Runs an experiment and writes its files to `out` (or the experiment's
/// own output directory). Returns the directory written.
pub fn cmd_run(exp: &ResolvedExperiment, jobs: usize, out: Option<&Path>) -> Result<(PathBuf, ExperimentResults)> {
    let dir = out.map_or_else(|| exp.output_dir.clone(), Path::to_path_buf);
    let results = run_experiment(exp, jobs)?;
    output::write_all(&dir, &results)?;
    Ok((dir, results))
}

/// Scores one or more results files together; writes `scores.csv` to
/// `scores_path` and returns the report.
pub fn cmd_score(inputs: &[PathBuf], kind: StdKind, scores_path: &Path) -> Result<score::ScoreReport> {
    let mut rows = Vec::new();
    for p in inputs {
        rows.extend(output::read_results(p)?);
    }
    let report = score::score_rows(&rows, kind)?;
    score::write_scores(scores_path, &report)?;
    Ok(report)
}

/// Runs a sweep and writes the experiment files plus `scores.csv` and
/// `sweep.csv`. With a single value there is nothing to compare and only the
/// experiment files are written.
pub fn cmd_sweep(
    base: &ResolvedExperiment,
    param: sweep::SweepParam,
    values: &[String],
    jobs: usize,
    out: Option<&Path>,
) -> Result<(PathBuf, Option<score::ScoreReport>)> {
    let exp = sweep::expand(base, param, values)?;
    let (dir, results) = cmd_run(&exp, jobs, out)?;
    if exp.algorithms.len() < 2 {
        return Ok((dir, None));
    }
    let report = score::score_rows(&output::result_rows(&results), StdKind::Population)?;
    score::write_scores(&dir.join(score::SCORES_FILE), &report)?;
    sweep::write_sweep(&dir.join(sweep::SWEEP_FILE), &report)?;
    Ok((dir, Some(report)))
}
