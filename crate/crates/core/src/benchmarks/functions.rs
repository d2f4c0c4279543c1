//! Classical single-objective base functions.
//!
//! Every function is minimized. All of them except Schwefel reach exactly 0 at
//! their canonical minimizer; Schwefel's printed constant leaves a residual of
//! about 1.3e-5 per dimension, which [`BaseFn::minimum_value`] reports so task
//! construction can subtract it.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Per-dimension minimizer of the Schwefel function.
pub const SCHWEFEL_OPTIMUM: f64 = 420.968_746_227_503_6;

const SCHWEFEL_CONSTANT: f64 = 418.9829;
const SCHWEFEL_BOUND: f64 = 500.0;

const WEIERSTRASS_A: f64 = 0.5;
const WEIERSTRASS_B: f64 = 3.0;
const WEIERSTRASS_KMAX: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseFn {
    Sphere,
    Rosenbrock,
    Ackley,
    Rastrigin,
    Griewank,
    Weierstrass,
    Schwefel,
}

impl BaseFn {
    pub const ALL: [BaseFn; 7] = [
        BaseFn::Sphere,
        BaseFn::Rosenbrock,
        BaseFn::Ackley,
        BaseFn::Rastrigin,
        BaseFn::Griewank,
        BaseFn::Weierstrass,
        BaseFn::Schwefel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaseFn::Sphere => "sphere",
            BaseFn::Rosenbrock => "rosenbrock",
            BaseFn::Ackley => "ackley",
            BaseFn::Rastrigin => "rastrigin",
            BaseFn::Griewank => "griewank",
            BaseFn::Weierstrass => "weierstrass",
            BaseFn::Schwefel => "schwefel",
        }
    }

    /// Canonical per-dimension search range.
    pub fn canonical_range(self) -> (f64, f64) {
        match self {
            BaseFn::Sphere | BaseFn::Griewank => (-100.0, 100.0),
            BaseFn::Rosenbrock | BaseFn::Rastrigin | BaseFn::Ackley => (-50.0, 50.0),
            BaseFn::Schwefel => (-500.0, 500.0),
            BaseFn::Weierstrass => (-0.5, 0.5),
        }
    }

    /// Coordinate (identical in every dimension) of the canonical minimizer.
    pub fn optimum_coordinate(self) -> f64 {
        match self {
            BaseFn::Rosenbrock => 1.0,
            BaseFn::Schwefel => SCHWEFEL_OPTIMUM,
            _ => 0.0,
        }
    }

    /// Value at the canonical minimizer in `dim` dimensions.
    pub fn minimum_value(self, dim: usize) -> f64 {
        let y = vec![self.optimum_coordinate(); dim];
        self.eval(&y)
    }

    pub fn eval(self, y: &[f64]) -> f64 {
        match self {
            BaseFn::Sphere => sphere(y),
            BaseFn::Rosenbrock => rosenbrock(y),
            BaseFn::Ackley => ackley(y),
            BaseFn::Rastrigin => rastrigin(y),
            BaseFn::Griewank => griewank(y),
            BaseFn::Weierstrass => weierstrass(y),
            BaseFn::Schwefel => schwefel(y),
        }
    }
}

impl fmt::Display for BaseFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BaseFn {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BaseFn::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown base function `{s}`"))
    }
}

/// Evaluates `id` at the native-space point `y`.
pub fn base_eval(id: BaseFn, y: &[f64]) -> f64 {
    id.eval(y)
}

pub fn sphere(y: &[f64]) -> f64 {
    y.iter().map(|v| v * v).sum()
}

pub fn rosenbrock(y: &[f64]) -> f64 {
    y.windows(2)
        .map(|w| {
            let a = w[1] - w[0] * w[0];
            let b = 1.0 - w[0];
            100.0 * a * a + b * b
        })
        .sum()
}

pub fn ackley(y: &[f64]) -> f64 {
    if y.is_empty() {
        return 0.0;
    }
    let n = y.len() as f64;
    let sq = y.iter().map(|v| v * v).sum::<f64>() / n;
    let cs = y.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
    -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
}

pub fn rastrigin(y: &[f64]) -> f64 {
    y.iter()
        .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
        .sum()
}

pub fn griewank(y: &[f64]) -> f64 {
    let sum = y.iter().map(|v| v * v).sum::<f64>() / 4000.0;
    let prod = y
        .iter()
        .enumerate()
        .map(|(d, v)| (v / ((d + 1) as f64).sqrt()).cos())
        .product::<f64>();
    1.0 + sum - prod
}

pub fn weierstrass(y: &[f64]) -> f64 {
    let mut amp = [0.0; WEIERSTRASS_KMAX + 1];
    let mut freq = [0.0; WEIERSTRASS_KMAX + 1];
    let mut offset = 0.0;
    for k in 0..=WEIERSTRASS_KMAX {
        amp[k] = WEIERSTRASS_A.powi(k as i32);
        freq[k] = WEIERSTRASS_B.powi(k as i32);
        offset += amp[k] * (PI * freq[k]).cos();
    }
    let mut total = 0.0;
    for v in y {
        for k in 0..=WEIERSTRASS_KMAX {
            total += amp[k] * (2.0 * PI * freq[k] * (v + 0.5)).cos();
        }
    }
    total - y.len() as f64 * offset
}

/// Schwefel's function. Inside `[-500, 500]` this is the plain
/// `418.9829·D − Σ y·sin(√|y|)`; coordinates beyond the box are folded back
/// and charged a quadratic penalty so the function stays bounded below by its
/// minimum.
pub fn schwefel(y: &[f64]) -> f64 {
    let n = y.len() as f64;
    let mut total = 0.0;
    for &v in y {
        total += if v > SCHWEFEL_BOUND {
            let folded = SCHWEFEL_BOUND - v % SCHWEFEL_BOUND;
            let over = v - SCHWEFEL_BOUND;
            folded * folded.abs().sqrt().sin() - over * over / (10_000.0 * n)
        } else if v < -SCHWEFEL_BOUND {
            let folded = v.abs() % SCHWEFEL_BOUND - SCHWEFEL_BOUND;
            let over = v + SCHWEFEL_BOUND;
            folded * folded.abs().sqrt().sin() - over * over / (10_000.0 * n)
        } else {
            v * v.abs().sqrt().sin()
        };
    }
    SCHWEFEL_CONSTANT * n - total
}
