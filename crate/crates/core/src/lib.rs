//! Self-adaptive multi-task particle swarm optimization.
//!
//! Each task of a multi-task problem gets its own swarm in a shared unified
//! space `[0,1]^D`. Every particle picks a knowledge source (any task,
//! itself included) by roulette over probabilities learned from recent
//! success rates, and folds that source's best position into its velocity
//! update. Tasks whose sources have all stopped producing improvements fall
//! back to searching on their own until progress resumes.
//!
//! ```no_run
//! use samtpso::benchmarks::{generate_problem, SuiteId};
//! use samtpso::{run, Algorithm, RunConfig};
//!
//! let problem = generate_problem(SuiteId::Suite1, 1, 42).unwrap();
//! let config = RunConfig::new(Algorithm::SaMtpsoS1).with_seed(7).with_max_gens(500);
//! let result = run(&problem, &config).unwrap();
//! println!("{:?}", result.final_fev);
//! ```

pub mod adaptation;
pub mod benchmarks;
pub mod config;
pub mod error;
pub mod metrics;
pub mod optimizer;
pub mod problem;
pub mod rng;

pub use config::{Algorithm, RunConfig};
pub use error::{Error, Result};
pub use optimizer::{run, run_tasks, RunResult, SwarmState};
pub use problem::{decode, encode, evaluate_task, MtoProblem, Objective, TaskDef};
