//! One-parameter sweeps over an experiment's single algorithm.

use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

use samtpso::metrics::format_sci;

use crate::error::{HarnessError, Result};
use crate::output::fmt_f64;
use crate::score::ScoreReport;
use crate::spec::ResolvedExperiment;

pub const SWEEP_FILE: &str = "sweep.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Bp,
    Lp,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Bp => "bp",
            SweepParam::Lp => "lp",
        }
    }

    /// The grids of the reference parameter study.
    pub fn default_grid(self) -> &'static [&'static str] {
        match self {
            SweepParam::Bp => &["0.0001", "0.0005", "0.001", "0.005", "0.01", "0.05", "0.1"],
            SweepParam::Lp => &["1", "2", "5", "10", "20", "50", "100"],
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bp" => Ok(SweepParam::Bp),
            "lp" => Ok(SweepParam::Lp),
            _ => Err(format!("unknown sweep parameter `{s}` (bp|lp)")),
        }
    }
}

/// Replaces the experiment's single algorithm by one copy per value,
/// labelled `param=value`.
pub fn expand(base: &ResolvedExperiment, param: SweepParam, values: &[String]) -> Result<ResolvedExperiment> {
    let [(_, config)] = base.algorithms.as_slice() else {
        return Err(HarnessError::Config(format!(
            "algorithms: a sweep needs exactly one algorithm, found {}",
            base.algorithms.len()
        )));
    };
    if values.is_empty() {
        return Err(HarnessError::Config("values: at least one value is required".into()));
    }
    let mut algorithms = Vec::with_capacity(values.len());
    for raw in values {
        let raw = raw.trim();
        let bad = |why: &str| HarnessError::Config(format!("values: `{raw}` {why}"));
        let mut c = config.clone();
        let label = match param {
            SweepParam::Bp => {
                let v: f64 = raw.parse().map_err(|_| bad("is not a number"))?;
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(bad("must be a finite nonnegative number"));
                }
                c.bp = v;
                format!("bp={v}")
            }
            SweepParam::Lp => {
                let v: usize = raw.parse().map_err(|_| bad("is not a positive integer"))?;
                if v == 0 {
                    return Err(bad("must be at least 1"));
                }
                c.lp = v;
                format!("lp={v}")
            }
        };
        if algorithms.iter().any(|(l, _)| *l == label) {
            return Err(bad("is listed twice"));
        }
        algorithms.push((label, c));
    }
    Ok(ResolvedExperiment {
        algorithms,
        ..base.clone()
    })
}

/// Problems as rows, parameter values as columns, plus a mean row.
pub fn render_sweep(report: &ScoreReport) -> String {
    let mut out = String::new();
    let _ = write!(out, "{:<10}", "Problem");
    for a in &report.algorithms {
        let _ = write!(out, "{a:<14}");
    }
    out.push('\n');
    for p in &report.problems {
        let _ = write!(out, "{:<10}", p.problem);
        for s in &p.scores {
            let _ = write!(out, "{:<14}", format_sci(*s));
        }
        out.push('\n');
    }
    let _ = write!(out, "{:<10}", "Mean");
    for m in &report.mean {
        let _ = write!(out, "{:<14}", format_sci(*m));
    }
    out.push('\n');
    out
}

pub fn write_sweep(path: &Path, report: &ScoreReport) -> Result<()> {
    let err = |e| HarnessError::csv(path, e);
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    let mut header = vec!["problem".to_string()];
    header.extend(report.algorithms.iter().cloned());
    w.write_record(&header).map_err(err)?;
    for p in &report.problems {
        let mut rec = vec![p.problem.to_string()];
        rec.extend(p.scores.iter().map(|s| fmt_f64(*s)));
        w.write_record(&rec).map_err(err)?;
    }
    let mut rec = vec!["mean".to_string()];
    rec.extend(report.mean.iter().map(|s| fmt_f64(*s)));
    w.write_record(&rec).map_err(err)?;
    w.flush().map_err(|e| HarnessError::io(path, e))
}
