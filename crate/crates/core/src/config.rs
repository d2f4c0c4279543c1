use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    /// Four-term velocity update: own gbest plus the chosen source's gbest.
    #[serde(rename = "SaMTPSO-S1", alias = "S1")]
    SaMtpsoS1,
    /// Three-term velocity update with the chosen source's gbest in the
    /// social term.
    #[serde(rename = "SaMTPSO-S2", alias = "S2")]
    SaMtpsoS2,
    /// Independent swarms, no transfer.
    #[serde(rename = "PSO")]
    Pso,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::SaMtpsoS1 => "SaMTPSO-S1",
            Algorithm::SaMtpsoS2 => "SaMTPSO-S2",
            Algorithm::Pso => "PSO",
        }
    }

    pub fn transfers_knowledge(self) -> bool {
        !matches!(self, Algorithm::Pso)
    }

    /// Default `(c1, c2, c3)`.
    pub fn default_coefficients(self) -> (f64, f64, f64) {
        match self {
            Algorithm::SaMtpsoS1 => (1.1, 1.1, 1.1),
            Algorithm::SaMtpsoS2 | Algorithm::Pso => (1.494, 1.494, 0.0),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "SAMTPSO-S1" | "S1" => Ok(Algorithm::SaMtpsoS1),
            "SAMTPSO-S2" | "S2" => Ok(Algorithm::SaMtpsoS2),
            "PSO" => Ok(Algorithm::Pso),
            _ => Err(format!("unknown algorithm `{s}`")),
        }
    }
}

/// Parameters of a single optimizer run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    /// Particles per task (`N / K`).
    pub pop_per_task: usize,
    /// Learning period: generations kept in the success/failure memories.
    pub lp: usize,
    /// Base probability added to every source's success rate.
    pub bp: f64,
    pub eps: f64,
    pub w_start: f64,
    pub w_end: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub max_gens: usize,
    pub seed: u64,
    pub runs: usize,
}

impl RunConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        let (c1, c2, c3) = algorithm.default_coefficients();
        RunConfig {
            algorithm,
            pop_per_task: 50,
            lp: 10,
            bp: 0.001,
            eps: 0.001,
            w_start: 0.9,
            w_end: 0.4,
            c1,
            c2,
            c3,
            max_gens: 2000,
            seed: 0,
            runs: 30,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_max_gens(mut self, max_gens: usize) -> Self {
        self.max_gens = max_gens;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.pop_per_task == 0 {
            return Err(Error::config("pop_per_task", "must be at least 1"));
        }
        if self.lp == 0 {
            return Err(Error::config("lp", "must be at least 1"));
        }
        if self.max_gens == 0 {
            return Err(Error::config("max_gens", "must be at least 1"));
        }
        if self.runs == 0 {
            return Err(Error::config("runs", "must be at least 1"));
        }
        if !(self.bp >= 0.0 && self.bp.is_finite()) {
            return Err(Error::config("bp", "must be a finite nonnegative number"));
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::config("eps", "must be a finite positive number"));
        }
        if !(self.w_start.is_finite() && self.w_end.is_finite()) || self.w_start < self.w_end {
            return Err(Error::config("w_start", "must be finite and at least w_end"));
        }
        for (name, c) in [("c1", self.c1), ("c2", self.c2), ("c3", self.c3)] {
            if !(c >= 0.0 && c.is_finite()) {
                return Err(Error::config(name, "must be a finite nonnegative number"));
            }
        }
        Ok(())
    }
}
