//! Shifted/rotated task construction and the two benchmark suites.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{BaseFn, Rotation};
use crate::error::{Error, Result};
use crate::problem::{MtoProblem, TaskDef};
use crate::rng::mix_seed;

/// Optima are drawn from the middle 80% of each native box.
const OPTIMUM_MARGIN: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteId {
    Suite1,
    Suite2,
}

impl SuiteId {
    pub fn name(self) -> &'static str {
        match self {
            SuiteId::Suite1 => "suite1",
            SuiteId::Suite2 => "suite2",
        }
    }

    fn tag(self) -> u64 {
        match self {
            SuiteId::Suite1 => 1,
            SuiteId::Suite2 => 2,
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "suite1" | "1" => Ok(SuiteId::Suite1),
            "suite2" | "2" => Ok(SuiteId::Suite2),
            _ => Err(format!("unknown suite `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DataSource {
    /// Shifts and rotations drawn from a master seed.
    GeneratedSeeded(u64),
    /// A directory holding `problem1.json` … `problem9.json`.
    FromFiles(PathBuf),
}

/// How much two tasks' optima share in the unified space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Intersection {
    Complete,
    Partial,
    None,
}

#[derive(Debug, Clone)]
pub struct SuiteSpec {
    pub suite_id: SuiteId,
    pub problems: Vec<MtoProblem>,
    pub data_source: DataSource,
}

struct TwoTaskRow {
    first: (BaseFn, usize),
    second: (BaseFn, usize),
    intersection: Intersection,
}

const fn row(a: BaseFn, da: usize, b: BaseFn, db: usize, intersection: Intersection) -> TwoTaskRow {
    TwoTaskRow {
        first: (a, da),
        second: (b, db),
        intersection,
    }
}

use BaseFn::*;

const SUITE1: [TwoTaskRow; 9] = [
    row(Griewank, 50, Rastrigin, 50, Intersection::Complete),
    row(Ackley, 50, Rastrigin, 50, Intersection::Complete),
    row(Ackley, 50, Schwefel, 50, Intersection::Complete),
    row(Rastrigin, 50, Sphere, 50, Intersection::Partial),
    row(Ackley, 50, Rosenbrock, 50, Intersection::Partial),
    row(Ackley, 50, Weierstrass, 25, Intersection::Partial),
    row(Rosenbrock, 50, Rastrigin, 50, Intersection::None),
    row(Griewank, 50, Weierstrass, 50, Intersection::None),
    row(Rastrigin, 50, Weierstrass, 50, Intersection::None),
];

const SUITE2: [[BaseFn; 5]; 9] = [
    [Sphere, Sphere, Sphere, Sphere, Sphere],
    [Rosenbrock, Rosenbrock, Rosenbrock, Rosenbrock, Rosenbrock],
    [Rastrigin, Rastrigin, Rastrigin, Rastrigin, Rastrigin],
    [Sphere, Rosenbrock, Rastrigin, Sphere, Rosenbrock],
    [Rastrigin, Griewank, Weierstrass, Rastrigin, Griewank],
    [Rosenbrock, Griewank, Schwefel, Rosenbrock, Griewank],
    [Ackley, Rastrigin, Weierstrass, Ackley, Rastrigin],
    [Rosenbrock, Ackley, Rastrigin, Griewank, Weierstrass],
    [Ackley, Rastrigin, Griewank, Weierstrass, Schwefel],
];

const SUITE2_DIM: usize = 50;

/// Degree of intersection of suite-1 problem `id` (1-based).
pub fn suite1_intersection(id: usize) -> Option<Intersection> {
    SUITE1.get(id.checked_sub(1)?).map(|r| r.intersection)
}

fn random_unified_optimum<R: Rng>(dim: usize, rng: &mut R) -> Vec<f64> {
    (0..dim)
        .map(|_| rng.random_range(OPTIMUM_MARGIN..1.0 - OPTIMUM_MARGIN))
        .collect()
}

/// Builds a task of base `id` whose optimum sits at the given unified
/// coordinates, with a rotation drawn from `rng`.
pub fn make_task_at<R: Rng>(id: BaseFn, unified_optimum: &[f64], rng: &mut R) -> TaskDef {
    let dim = unified_optimum.len();
    let (lo, hi) = id.canonical_range();
    let shift = unified_optimum.iter().map(|u| lo + u * (hi - lo)).collect();
    let rotation = Rotation::random(dim, rng);
    TaskDef::new(id, vec![lo; dim], vec![hi; dim], shift, rotation)
        .expect("generated tasks satisfy the task invariants")
}

/// Seeded task of base `id` with a random optimum and rotation.
pub fn make_task(id: BaseFn, dim: usize, seed: u64) -> TaskDef {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let optimum = random_unified_optimum(dim, &mut rng);
    make_task_at(id, &optimum, &mut rng)
}

fn suite1_problem(index: usize, seed: u64) -> MtoProblem {
    let r = &SUITE1[index];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (da, db) = (r.first.1, r.second.1);
    let opt_a = random_unified_optimum(da, &mut rng);
    let mut opt_b = random_unified_optimum(db, &mut rng);
    let shared = match r.intersection {
        Intersection::Complete => da.min(db),
        Intersection::Partial => da.min(db).div_ceil(2),
        Intersection::None => 0,
    };
    opt_b[..shared].copy_from_slice(&opt_a[..shared]);
    let a = make_task_at(r.first.0, &opt_a, &mut rng);
    let b = make_task_at(r.second.0, &opt_b, &mut rng);
    MtoProblem::new(vec![a, b]).expect("two tasks")
}

fn suite2_problem(index: usize, seed: u64) -> MtoProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tasks = SUITE2[index]
        .iter()
        .map(|&f| {
            let opt = random_unified_optimum(SUITE2_DIM, &mut rng);
            make_task_at(f, &opt, &mut rng)
        })
        .collect();
    MtoProblem::new(tasks).expect("five tasks")
}

/// Generates problem `id` (1-based) of a suite from a master seed.
pub fn generate_problem(suite: SuiteId, id: usize, master_seed: u64) -> Result<MtoProblem> {
    if !(1..=9).contains(&id) {
        return Err(Error::InvalidProblem(format!(
            "{suite} has problems 1..=9, got {id}"
        )));
    }
    let seed = mix_seed(&[master_seed, suite.tag(), id as u64]);
    Ok(match suite {
        SuiteId::Suite1 => suite1_problem(id - 1, seed),
        SuiteId::Suite2 => suite2_problem(id - 1, seed),
    })
}

pub fn build_suite(suite_id: SuiteId, data_source: DataSource) -> Result<SuiteSpec> {
    let problems = match &data_source {
        DataSource::GeneratedSeeded(seed) => (1..=9)
            .map(|id| generate_problem(suite_id, id, *seed))
            .collect::<Result<Vec<_>>>()?,
        DataSource::FromFiles(dir) => (1..=9)
            .map(|id| {
                let path = dir.join(format!("problem{id}.json"));
                let p = load_problem_file(&path)?;
                check_suite_shape(suite_id, &p, &path)?;
                Ok(p)
            })
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(SuiteSpec {
        suite_id,
        problems,
        data_source,
    })
}

fn check_suite_shape(suite: SuiteId, p: &MtoProblem, path: &Path) -> Result<()> {
    let ok = match suite {
        SuiteId::Suite1 => p.num_tasks() == 2,
        SuiteId::Suite2 => p.num_tasks() == 5 && p.tasks.iter().all(|t| t.dim == SUITE2_DIM),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidProblem(format!(
            "{}: problem does not match the shape of {suite}",
            path.display()
        )))
    }
}

#[derive(Serialize, Deserialize)]
struct ProblemFile {
    tasks: Vec<TaskDef>,
}

/// Parses a problem file: `{"tasks": [{"fn", "dim", "lower", "upper", "shift", "rotation"}, …]}`.
pub fn parse_problem(text: &str, path: &Path) -> Result<MtoProblem> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| Error::TaskFile {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let tasks = file
        .tasks
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            let declared = t.dim;
            if declared != t.shift.len() {
                return Err(Error::InvalidProblem(format!(
                    "{}: task {}: dim {declared} disagrees with shift length {}",
                    path.display(),
                    i + 1,
                    t.shift.len()
                )));
            }
            t.finalize().map_err(|e| {
                Error::InvalidProblem(format!("{}: task {}: {e}", path.display(), i + 1))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    MtoProblem::new(tasks)
        .map_err(|e| Error::InvalidProblem(format!("{}: {e}", path.display())))
}

pub fn load_problem_file(path: &Path) -> Result<MtoProblem> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_problem(&text, path)
}

/// Serializes a problem in the file format read by [`load_problem_file`].
pub fn problem_to_json(problem: &MtoProblem) -> String {
    let file = ProblemFile {
        tasks: problem.tasks.clone(),
    };
    serde_json::to_string_pretty(&file).expect("problem serializes")
}
