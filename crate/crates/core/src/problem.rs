//! Component tasks, multi-task problems and the unified search space.
//!
//! Particles live in `[0,1]^D_u` where `D_u` is the largest task dimension. A
//! task of dimension `D_t` reads the first `D_t` unified coordinates and maps
//! them affinely onto its native box.

use serde::{Deserialize, Serialize};

use crate::benchmarks::{BaseFn, Rotation};
use crate::error::{Error, Result};

/// Anything the swarm can minimize over the unified space.
pub trait Objective: Send + Sync {
    /// Number of leading unified coordinates the objective reads.
    fn dim(&self) -> usize;

    /// Objective value at a unified point of length at least `dim()`.
    fn evaluate(&self, x_unified: &[f64]) -> f64;
}

/// One shifted and rotated component task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskDef {
    #[serde(rename = "fn")]
    pub base_fn: BaseFn,
    pub dim: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Native-space location of the global optimum.
    pub shift: Vec<f64>,
    pub rotation: Rotation,
    /// Raw base-function value at the optimum; subtracted during evaluation so
    /// every task has minimum 0.
    #[serde(skip)]
    pub optimum_value: f64,
}

impl TaskDef {
    pub fn new(
        base_fn: BaseFn,
        lower: Vec<f64>,
        upper: Vec<f64>,
        shift: Vec<f64>,
        rotation: Rotation,
    ) -> Result<Self> {
        let dim = shift.len();
        let mut task = TaskDef {
            base_fn,
            dim,
            lower,
            upper,
            shift,
            rotation,
            optimum_value: 0.0,
        };
        task.validate()?;
        task.optimum_value = base_fn.minimum_value(dim);
        Ok(task)
    }

    /// Checks the structural invariants and recomputes `optimum_value`.
    /// Used after deserialization, which skips `optimum_value`.
    pub fn finalize(mut self) -> Result<Self> {
        self.validate()?;
        self.optimum_value = self.base_fn.minimum_value(self.dim);
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim;
        if d == 0 {
            return Err(Error::InvalidTask("dim must be positive".into()));
        }
        for (name, len) in [
            ("lower", self.lower.len()),
            ("upper", self.upper.len()),
            ("shift", self.shift.len()),
            ("rotation", self.rotation.dim()),
        ] {
            if len != d {
                return Err(Error::InvalidTask(format!(
                    "{name} has length {len}, expected {d}"
                )));
            }
        }
        for i in 0..d {
            let (lo, hi, s) = (self.lower[i], self.upper[i], self.shift[i]);
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidTask(format!(
                    "bounds [{lo}, {hi}] at dimension {i} are not a finite non-empty interval"
                )));
            }
            if !(lo..=hi).contains(&s) {
                return Err(Error::InvalidTask(format!(
                    "shift {s} at dimension {i} lies outside [{lo}, {hi}]"
                )));
            }
        }
        let err = self.rotation.orthogonality_error();
        if err > 1e-9 {
            return Err(Error::InvalidTask(format!(
                "rotation is not orthogonal (max |RᵀR − I| = {err:e})"
            )));
        }
        Ok(())
    }

    /// Unified coordinates of the optimum.
    pub fn unified_optimum(&self) -> Vec<f64> {
        encode(&self.shift, self)
    }

    fn eval_unchecked(&self, x: &[f64]) -> f64 {
        let centered: Vec<f64> = (0..self.dim)
            .map(|d| {
                let z = self.lower[d] + x[d] * (self.upper[d] - self.lower[d]);
                z - self.shift[d]
            })
            .collect();
        let mut y = vec![0.0; self.dim];
        self.rotation.apply_into(&centered, &mut y);
        let c = self.base_fn.optimum_coordinate();
        if c != 0.0 {
            y.iter_mut().for_each(|v| *v += c);
        }
        (self.base_fn.eval(&y) - self.optimum_value).max(0.0)
    }
}

impl Objective for TaskDef {
    fn dim(&self) -> usize {
        self.dim
    }

    fn evaluate(&self, x_unified: &[f64]) -> f64 {
        self.eval_unchecked(x_unified)
    }
}

/// Maps the first `task.dim` unified coordinates onto the task's native box.
pub fn decode(x_unified: &[f64], task: &TaskDef) -> Result<Vec<f64>> {
    if x_unified.len() < task.dim {
        return Err(Error::DimensionMismatch {
            expected: task.dim,
            got: x_unified.len(),
        });
    }
    Ok((0..task.dim)
        .map(|d| task.lower[d] + x_unified[d] * (task.upper[d] - task.lower[d]))
        .collect())
}

/// Inverse of [`decode`] for a native point of length `task.dim`.
pub fn encode(native: &[f64], task: &TaskDef) -> Vec<f64> {
    native
        .iter()
        .zip(task.lower.iter().zip(&task.upper))
        .map(|(z, (lo, hi))| (z - lo) / (hi - lo))
        .collect()
}

/// Fitness of a unified point on `task`, already relative to the optimum.
pub fn evaluate_task(x_unified: &[f64], task: &TaskDef) -> Result<f64> {
    if x_unified.len() < task.dim {
        return Err(Error::DimensionMismatch {
            expected: task.dim,
            got: x_unified.len(),
        });
    }
    Ok(task.eval_unchecked(x_unified))
}

/// An ordered set of at least two component tasks.
#[derive(Debug, Clone, PartialEq)]
pub struct MtoProblem {
    pub tasks: Vec<TaskDef>,
    pub unified_dim: usize,
}

impl MtoProblem {
    pub fn new(tasks: Vec<TaskDef>) -> Result<Self> {
        if tasks.len() < 2 {
            return Err(Error::InvalidProblem(format!(
                "a multi-task problem needs at least 2 tasks, got {}",
                tasks.len()
            )));
        }
        let unified_dim = tasks.iter().map(|t| t.dim).max().unwrap_or(0);
        Ok(MtoProblem { tasks, unified_dim })
    }

    pub fn num_tasks(&self) -> usize {
        self.tasks.len()
    }

    pub fn objectives(&self) -> Vec<&dyn Objective> {
        self.tasks.iter().map(|t| t as &dyn Objective).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn plain(base_fn: BaseFn, lo: f64, hi: f64, dim: usize) -> TaskDef {
        TaskDef::new(
            base_fn,
            vec![lo; dim],
            vec![hi; dim],
            vec![0.0_f64.clamp(lo, hi); dim],
            Rotation::identity(dim),
        )
        .unwrap()
    }

    #[test]
    fn decode_maps_affinely() {
        let t = plain(BaseFn::Sphere, -100.0, 100.0, 2);
        assert_eq!(decode(&[0.5, 0.5], &t).unwrap(), vec![0.0, 0.0]);
        let t = plain(BaseFn::Sphere, -50.0, 50.0, 2);
        assert_eq!(decode(&[0.0, 1.0], &t).unwrap(), vec![-50.0, 50.0]);
        let t = TaskDef::new(
            BaseFn::Sphere,
            vec![0.0; 2],
            vec![4.0; 2],
            vec![1.0; 2],
            Rotation::identity(2),
        )
        .unwrap();
        assert_eq!(decode(&[0.25, 0.75, 0.5], &t).unwrap(), vec![1.0, 3.0]);
    }

    #[test]
    fn decode_rejects_short_input() {
        let t = plain(BaseFn::Sphere, -1.0, 1.0, 3);
        assert!(matches!(
            decode(&[0.1, 0.2], &t),
            Err(Error::DimensionMismatch {
                expected: 3,
                got: 2
            })
        ));
        assert!(evaluate_task(&[0.1], &t).is_err());
    }

    #[test]
    fn evaluate_examples() {
        // decode(x) = (1, 1) with bounds [-100, 100]: x = 101/200
        let t = plain(BaseFn::Sphere, -100.0, 100.0, 2);
        let x = [101.0 / 200.0; 2];
        assert_relative_eq!(evaluate_task(&x, &t).unwrap(), 2.0, max_relative = 1e-12);
        let t = plain(BaseFn::Rastrigin, -50.0, 50.0, 4);
        assert_eq!(evaluate_task(&[0.5; 4], &t).unwrap(), 0.0);
    }

    #[test]
    fn encode_inverts_decode() {
        let t = TaskDef::new(
            BaseFn::Ackley,
            vec![-50.0, -3.0],
            vec![50.0, 7.0],
            vec![0.0, 0.0],
            Rotation::identity(2),
        )
        .unwrap();
        let native = [12.5, -1.25];
        let back = decode(&encode(&native, &t), &t).unwrap();
        for (a, b) in native.iter().zip(&back) {
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
    }

    #[test]
    fn rejects_invalid_tasks() {
        let bad_bounds = TaskDef::new(
            BaseFn::Sphere,
            vec![1.0],
            vec![1.0],
            vec![1.0],
            Rotation::identity(1),
        );
        assert!(bad_bounds.is_err());
        let shift_outside = TaskDef::new(
            BaseFn::Sphere,
            vec![-1.0],
            vec![1.0],
            vec![2.0],
            Rotation::identity(1),
        );
        assert!(shift_outside.is_err());
        let not_orthogonal = TaskDef::new(
            BaseFn::Sphere,
            vec![-1.0; 2],
            vec![1.0; 2],
            vec![0.0; 2],
            Rotation::from_rows(vec![vec![1.0, 0.1], vec![0.0, 1.0]]).unwrap(),
        );
        assert!(not_orthogonal.is_err());
    }

    #[test]
    fn problem_needs_two_tasks_and_takes_max_dim() {
        let a = plain(BaseFn::Sphere, -1.0, 1.0, 5);
        assert!(MtoProblem::new(vec![a.clone()]).is_err());
        let b = plain(BaseFn::Sphere, -1.0, 1.0, 3);
        let p = MtoProblem::new(vec![a, b]).unwrap();
        assert_eq!(p.unified_dim, 5);
    }
}
