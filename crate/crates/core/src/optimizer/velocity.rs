//! Velocity and position updates.
//!
//! All three update rules draw fresh uniforms per dimension; the caller passes
//! them in so the rules stay pure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A particle in the unified space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Particle {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub pbest: Vec<f64>,
    pub f_pbest: f64,
    /// Knowledge source chosen in the most recent generation.
    pub last_source: usize,
}

impl Particle {
    /// Particle at rest at `x`, with `x` as its personal best.
    pub fn at_rest(x: Vec<f64>, fitness: f64, own_task: usize) -> Self {
        Particle {
            v: vec![0.0; x.len()],
            pbest: x.clone(),
            x,
            f_pbest: fitness,
            last_source: own_task,
        }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }
}

/// Inertia and acceleration coefficients for one generation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub w: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

/// Linear ramp from `w_start` at generation 1 to `w_end` at `max_gens`.
pub fn inertia_weight(g: usize, max_gens: usize, w_start: f64, w_end: f64) -> f64 {
    if max_gens <= 1 {
        return w_start;
    }
    let g = g.clamp(1, max_gens);
    w_start - (w_start - w_end) * (g - 1) as f64 / (max_gens - 1) as f64
}

fn check_len(particle: &Particle, others: &[&[f64]]) -> Result<()> {
    let d = particle.dim();
    for len in [particle.v.len(), particle.pbest.len()]
        .into_iter()
        .chain(others.iter().map(|o| o.len()))
    {
        if len != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: len,
            });
        }
    }
    Ok(())
}

/// `w·v + c1·r1(pbest−x) + c2·r2(gbest_own−x) + c3·r3(gbest_src−x)`.
#[allow(clippy::too_many_arguments)]
pub fn velocity_s1(
    particle: &Particle,
    gbest_own: &[f64],
    gbest_src: &[f64],
    coef: Coefficients,
    r1: &[f64],
    r2: &[f64],
    r3: &[f64],
) -> Result<Vec<f64>> {
    check_len(particle, &[gbest_own, gbest_src, r1, r2, r3])?;
    let Coefficients { w, c1, c2, c3 } = coef;
    Ok((0..particle.dim())
        .map(|d| {
            let x = particle.x[d];
            w * particle.v[d]
                + c1 * r1[d] * (particle.pbest[d] - x)
                + c2 * r2[d] * (gbest_own[d] - x)
                + c3 * r3[d] * (gbest_src[d] - x)
        })
        .collect())
}

/// `w·v + c1·r1(pbest−x) + c2·r2(gbest_src−x)`.
pub fn velocity_s2(
    particle: &Particle,
    gbest_src: &[f64],
    coef: Coefficients,
    r1: &[f64],
    r2: &[f64],
) -> Result<Vec<f64>> {
    check_len(particle, &[gbest_src, r1, r2])?;
    let Coefficients { w, c1, c2, .. } = coef;
    Ok((0..particle.dim())
        .map(|d| {
            let x = particle.x[d];
            w * particle.v[d] + c1 * r1[d] * (particle.pbest[d] - x) + c2 * r2[d] * (gbest_src[d] - x)
        })
        .collect())
}

/// Classical update with the swarm's own gbest.
pub fn velocity_pso(
    particle: &Particle,
    gbest: &[f64],
    coef: Coefficients,
    r1: &[f64],
    r2: &[f64],
) -> Result<Vec<f64>> {
    velocity_s2(particle, gbest, coef, r1, r2)
}

/// Moves the particle by `v_new`, clamping into `[0,1]` and zeroing the
/// velocity of every clamped dimension.
pub fn step_position(particle: &mut Particle, v_new: Vec<f64>) {
    particle.v = v_new;
    for (x, v) in particle.x.iter_mut().zip(particle.v.iter_mut()) {
        let moved = *x + *v;
        if moved > 1.0 {
            *x = 1.0;
            *v = 0.0;
        } else if moved < 0.0 {
            *x = 0.0;
            *v = 0.0;
        } else {
            *x = moved;
        }
    }
}
