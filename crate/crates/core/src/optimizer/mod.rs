//! Generation loop of the multi-task swarm and its baseline.

mod swarm;
mod velocity;

pub use swarm::{evaluate_and_update, run, run_tasks, GbestRecord, RunResult, SubpopState, SwarmState};
pub use velocity::{
    inertia_weight, step_position, velocity_pso, velocity_s1, velocity_s2, Coefficients, Particle,
};
