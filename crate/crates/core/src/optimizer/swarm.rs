use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::velocity::{
    inertia_weight, step_position, velocity_pso, velocity_s1, velocity_s2, Coefficients, Particle,
};
use crate::adaptation::{check_focus, choose_source, update_probabilities, MemoryWindow, SourcePool};
use crate::config::{Algorithm, RunConfig};
use crate::error::{Error, Result};
use crate::problem::{MtoProblem, Objective};
use crate::rng::{particle_stream, StreamKind};

/// Best position found so far by one subpopulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GbestRecord {
    pub position: Vec<f64>,
    pub fitness: f64,
}

/// The swarm assigned to one task.
#[derive(Debug, Clone)]
pub struct SubpopState {
    pub particles: Vec<Particle>,
    pub gbest: GbestRecord,
    pub pool: SourcePool,
    pub mem: MemoryWindow,
    pub task_index: usize,
}

/// Evaluates every moved particle of `subpop` on `task`, updating personal
/// and global bests and recording a success (strict improvement of the
/// personal best) or failure against the particle's chosen source. The
/// generation's column is committed to the memory afterwards.
pub fn evaluate_and_update(subpop: &mut SubpopState, task: &dyn Objective) -> Result<()> {
    for particle in &mut subpop.particles {
        let fitness = task.evaluate(&particle.x);
        let improved = fitness < particle.f_pbest;
        if improved {
            particle.pbest.copy_from_slice(&particle.x);
            particle.f_pbest = fitness;
            if fitness < subpop.gbest.fitness {
                subpop.gbest.position.copy_from_slice(&particle.x);
                subpop.gbest.fitness = fitness;
            }
        }
        subpop.mem.record_outcome(particle.last_source, improved)?;
    }
    subpop.mem.commit();
    Ok(())
}

struct ParticleRngs {
    motion: ChaCha8Rng,
    selection: ChaCha8Rng,
}

/// Complete state of one run.
pub struct SwarmState<'a> {
    tasks: Vec<&'a dyn Objective>,
    unified_dim: usize,
    pub subpops: Vec<SubpopState>,
    /// Completed generations; 0 right after initialization.
    pub generation: usize,
    pub config: RunConfig,
    rngs: Vec<Vec<ParticleRngs>>,
    last_choices: Option<Vec<u32>>,
}

impl<'a> SwarmState<'a> {
    /// Uniform random positions, zero velocities, each subpopulation
    /// evaluated on its own task, uniform source probabilities and empty
    /// memories.
    pub fn init(tasks: Vec<&'a dyn Objective>, unified_dim: usize, config: RunConfig) -> Result<Self> {
        config.validate()?;
        if tasks.is_empty() {
            return Err(Error::InvalidProblem("no tasks".into()));
        }
        if let Some(t) = tasks.iter().find(|t| t.dim() > unified_dim) {
            return Err(Error::DimensionMismatch {
                expected: t.dim(),
                got: unified_dim,
            });
        }
        let k = tasks.len();
        let n = config.pop_per_task;
        let mut rngs = Vec::with_capacity(k);
        let mut subpops = Vec::with_capacity(k);
        for (t, task) in tasks.iter().enumerate() {
            let mut streams: Vec<ParticleRngs> = (0..n)
                .map(|i| ParticleRngs {
                    motion: particle_stream(config.seed, t, i, StreamKind::Motion),
                    selection: particle_stream(config.seed, t, i, StreamKind::Selection),
                })
                .collect();
            let particles: Vec<Particle> = streams
                .iter_mut()
                .map(|s| {
                    let x: Vec<f64> = (0..unified_dim).map(|_| s.motion.random::<f64>()).collect();
                    let f = task.evaluate(&x);
                    Particle::at_rest(x, f, t)
                })
                .collect();
            let best = particles
                .iter()
                .enumerate()
                .fold(0, |b, (i, p)| if p.f_pbest < particles[b].f_pbest { i } else { b });
            let gbest = GbestRecord {
                position: particles[best].pbest.clone(),
                fitness: particles[best].f_pbest,
            };
            subpops.push(SubpopState {
                particles,
                gbest,
                pool: SourcePool::uniform(k),
                mem: MemoryWindow::new(config.lp, k),
                task_index: t,
            });
            rngs.push(streams);
        }
        Ok(SwarmState {
            tasks,
            unified_dim,
            subpops,
            generation: 0,
            config,
            rngs,
            last_choices: None,
        })
    }

    pub fn num_tasks(&self) -> usize {
        self.tasks.len()
    }

    pub fn unified_dim(&self) -> usize {
        self.unified_dim
    }

    pub fn tasks(&self) -> &[&'a dyn Objective] {
        &self.tasks
    }

    pub fn is_finished(&self) -> bool {
        self.generation >= self.config.max_gens
    }

    /// Row-major K×K source-choice counts of the last generation, `None` for
    /// the baseline or before the first generation.
    pub fn last_choices(&self) -> Option<&[u32]> {
        self.last_choices.as_deref()
    }

    /// One generation: every particle picks a knowledge source and moves
    /// using the gbests held at the start of the generation, then all
    /// subpopulations are evaluated, and finally source probabilities and
    /// focus flags are refreshed for every task whose memory holds `lp`
    /// generations.
    pub fn run_generation(&mut self) -> Result<()> {
        let cfg = &self.config;
        let k = self.tasks.len();
        let d = self.unified_dim;
        let g = self.generation + 1;
        let coef = Coefficients {
            w: inertia_weight(g, cfg.max_gens, cfg.w_start, cfg.w_end),
            c1: cfg.c1,
            c2: cfg.c2,
            c3: cfg.c3,
        };
        let algorithm = cfg.algorithm;
        let transfers = algorithm.transfers_knowledge();
        let frozen: Vec<Vec<f64>> = self.subpops.iter().map(|s| s.gbest.position.clone()).collect();
        let mut choices = transfers.then(|| vec![0u32; k * k]);
        let (mut r1, mut r2, mut r3) = (vec![0.0; d], vec![0.0; d], vec![0.0; d]);

        for (t, (sub, streams)) in self.subpops.iter_mut().zip(&mut self.rngs).enumerate() {
            for (particle, rng) in sub.particles.iter_mut().zip(streams.iter_mut()) {
                let ik = if transfers {
                    let u: f64 = rng.selection.random();
                    choose_source(&sub.pool, t, u)
                } else {
                    t
                };
                particle.last_source = ik;
                if let Some(c) = choices.as_mut() {
                    c[t * k + ik] += 1;
                }
                r1.iter_mut().for_each(|r| *r = rng.motion.random());
                r2.iter_mut().for_each(|r| *r = rng.motion.random());
                let v = match algorithm {
                    Algorithm::SaMtpsoS1 => {
                        r3.iter_mut().for_each(|r| *r = rng.motion.random());
                        velocity_s1(particle, &frozen[t], &frozen[ik], coef, &r1, &r2, &r3)?
                    }
                    Algorithm::SaMtpsoS2 => velocity_s2(particle, &frozen[ik], coef, &r1, &r2)?,
                    Algorithm::Pso => velocity_pso(particle, &frozen[t], coef, &r1, &r2)?,
                };
                step_position(particle, v);
            }
        }

        for (sub, task) in self.subpops.iter_mut().zip(&self.tasks) {
            evaluate_and_update(sub, *task)?;
        }

        if transfers {
            for sub in &mut self.subpops {
                if sub.mem.is_full() {
                    sub.pool.p = update_probabilities(&sub.mem, cfg.bp, cfg.eps)?;
                    sub.pool.is_focus = check_focus(&sub.mem);
                }
            }
        }
        self.last_choices = choices;
        self.generation = g;
        Ok(())
    }

    pub fn best_fevs(&self) -> Vec<f64> {
        self.subpops.iter().map(|s| s.gbest.fitness).collect()
    }
}

/// Outcome of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub algorithm: Algorithm,
    pub num_tasks: usize,
    pub pop_per_task: usize,
    /// `[generation][task]` best FEV at the end of each generation.
    pub best_fev_trace: Vec<Vec<f64>>,
    /// `[generation][t·K + k]`: particles of task `t` that chose source `k`.
    /// Absent for the baseline PSO.
    pub source_counts: Option<Vec<Vec<u32>>>,
    /// Best unified position per task.
    pub best_positions: Vec<Vec<f64>>,
    pub final_fev: Vec<f64>,
}

/// Runs the optimizer on arbitrary objectives sharing a unified space.
pub fn run_tasks(tasks: Vec<&dyn Objective>, unified_dim: usize, config: &RunConfig) -> Result<RunResult> {
    let mut state = SwarmState::init(tasks, unified_dim, config.clone())?;
    let transfers = config.algorithm.transfers_knowledge();
    let mut trace = Vec::with_capacity(config.max_gens);
    let mut counts = transfers.then(|| Vec::with_capacity(config.max_gens));
    while !state.is_finished() {
        state.run_generation()?;
        trace.push(state.best_fevs());
        if let (Some(c), Some(last)) = (counts.as_mut(), state.last_choices()) {
            c.push(last.to_vec());
        }
    }
    Ok(RunResult {
        algorithm: config.algorithm,
        num_tasks: state.num_tasks(),
        pop_per_task: config.pop_per_task,
        best_fev_trace: trace,
        source_counts: counts,
        best_positions: state.subpops.iter().map(|s| s.gbest.position.clone()).collect(),
        final_fev: state.best_fevs(),
    })
}

/// Runs the optimizer on a multi-task problem until `max_gens` generations.
pub fn run(problem: &MtoProblem, config: &RunConfig) -> Result<RunResult> {
    run_tasks(problem.objectives(), problem.unified_dim, config)
}
