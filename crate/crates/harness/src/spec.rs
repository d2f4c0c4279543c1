//! Experiment files.
//!
//! An experiment is a JSON object; every optimizer parameter may be omitted
//! and then takes its default. A resolved experiment serializes back to the
//! same format with every field spelled out, which is what `manifest.json`
//! holds.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use samtpso::benchmarks::SuiteId;
use samtpso::{Algorithm, RunConfig};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

pub const DEFAULT_RUNS: usize = 30;
pub const DEFAULT_MAX_GENS: usize = 2000;

/// Where the problems come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SuiteRef {
    /// Generated from the master seed: `"suite1"` or `"suite2"`.
    Generated(SuiteId),
    /// `problem{id}.json` files in `data_dir`.
    Files(FilesSuite),
    /// A single problem file, addressed as problem 1.
    Problem(ProblemFileRef),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilesSuite {
    pub id: SuiteId,
    pub data_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFileRef {
    pub problem_file: PathBuf,
}

/// One algorithm entry; unset fields take the algorithm's defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSpec {
    pub algorithm: Algorithm,
    /// Name used in output files; defaults to the algorithm name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pop_per_task: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lp: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bp: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_end: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c3: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_gens: Option<usize>,
}

impl AlgorithmSpec {
    pub fn new(algorithm: Algorithm) -> Self {
        AlgorithmSpec {
            algorithm,
            label: None,
            pop_per_task: None,
            lp: None,
            bp: None,
            eps: None,
            w_start: None,
            w_end: None,
            c1: None,
            c2: None,
            c3: None,
            max_gens: None,
        }
    }

    pub fn label(&self) -> String {
        self.label.clone().unwrap_or_else(|| self.algorithm.name().to_string())
    }

    fn to_config(&self, max_gens: usize, runs: usize) -> RunConfig {
        let d = RunConfig::new(self.algorithm);
        RunConfig {
            algorithm: self.algorithm,
            pop_per_task: self.pop_per_task.unwrap_or(d.pop_per_task),
            lp: self.lp.unwrap_or(d.lp),
            bp: self.bp.unwrap_or(d.bp),
            eps: self.eps.unwrap_or(d.eps),
            w_start: self.w_start.unwrap_or(d.w_start),
            w_end: self.w_end.unwrap_or(d.w_end),
            c1: self.c1.unwrap_or(d.c1),
            c2: self.c2.unwrap_or(d.c2),
            c3: self.c3.unwrap_or(d.c3),
            max_gens: self.max_gens.unwrap_or(max_gens),
            seed: 0,
            runs,
        }
    }

    fn from_config(label: &str, c: &RunConfig) -> Self {
        AlgorithmSpec {
            algorithm: c.algorithm,
            label: Some(label.to_string()),
            pop_per_task: Some(c.pop_per_task),
            lp: Some(c.lp),
            bp: Some(c.bp),
            eps: Some(c.eps),
            w_start: Some(c.w_start),
            w_end: Some(c.w_end),
            c1: Some(c.c1),
            c2: Some(c.c2),
            c3: Some(c.c3),
            max_gens: Some(c.max_gens),
        }
    }
}

fn default_runs() -> usize {
    DEFAULT_RUNS
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

/// An experiment as written in a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    pub suite: SuiteRef,
    /// 1-based problem ids; all nine when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem_ids: Option<Vec<usize>>,
    pub algorithms: Vec<AlgorithmSpec>,
    #[serde(default = "default_runs")]
    pub runs: usize,
    /// Generation budget for algorithms that do not set their own.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_gens: Option<usize>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub master_seed: u64,
}

impl ExperimentSpec {
    /// Parses an experiment from JSON text. `path` is only used in messages.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            HarnessError::Config(format!(
                "{}: line {}, column {}: {e}",
                path.display(),
                e.line(),
                e.column()
            ))
        })
    }

    /// Reads an experiment file. Relative data paths are taken relative to
    /// the file's directory.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let mut spec = Self::parse(&text, path)?;
        let base = path.parent().unwrap_or(Path::new(""));
        match &mut spec.suite {
            SuiteRef::Files(f) if f.data_dir.is_relative() => f.data_dir = base.join(&f.data_dir),
            SuiteRef::Problem(p) if p.problem_file.is_relative() => {
                p.problem_file = base.join(&p.problem_file)
            }
            _ => {}
        }
        Ok(spec)
    }

    /// Validates and fills in defaults. `seed_override` replaces the master
    /// seed when given.
    pub fn resolve(&self, seed_override: Option<u64>) -> Result<ResolvedExperiment> {
        let config_err = |field: &str, reason: &str| HarnessError::Config(format!("{field}: {reason}"));
        if self.runs == 0 {
            return Err(config_err("runs", "must be at least 1"));
        }
        if self.max_gens == Some(0) {
            return Err(config_err("max_gens", "must be at least 1"));
        }
        if self.algorithms.is_empty() {
            return Err(config_err("algorithms", "at least one algorithm is required"));
        }
        let available = match self.suite {
            SuiteRef::Problem(_) => 1,
            _ => 9,
        };
        let problem_ids = self
            .problem_ids
            .clone()
            .unwrap_or_else(|| (1..=available).collect());
        if problem_ids.is_empty() {
            return Err(config_err("problem_ids", "at least one problem is required"));
        }
        let mut seen = HashSet::new();
        for &id in &problem_ids {
            if !(1..=available).contains(&id) {
                return Err(config_err(
                    "problem_ids",
                    &format!("problem {id} is outside 1..={available}"),
                ));
            }
            if !seen.insert(id) {
                return Err(config_err("problem_ids", &format!("problem {id} is listed twice")));
            }
        }

        let max_gens = self.max_gens.unwrap_or(DEFAULT_MAX_GENS);
        let mut labels = HashSet::new();
        let mut algorithms = Vec::with_capacity(self.algorithms.len());
        for (i, a) in self.algorithms.iter().enumerate() {
            let label = a.label();
            if label.is_empty() || label.contains([',', '"', '\n']) {
                return Err(config_err(
                    &format!("algorithms[{i}].label"),
                    "must be non-empty and free of commas, quotes and newlines",
                ));
            }
            if !labels.insert(label.clone()) {
                return Err(config_err(
                    &format!("algorithms[{i}].label"),
                    &format!("duplicate label `{label}`"),
                ));
            }
            let cfg = a.to_config(max_gens, self.runs);
            cfg.validate().map_err(|e| match e {
                samtpso::Error::InvalidConfig { field, reason } => {
                    config_err(&format!("algorithms[{i}].{field}"), &reason)
                }
                other => HarnessError::Core(other),
            })?;
            algorithms.push((label, cfg));
        }

        Ok(ResolvedExperiment {
            name: self.name.clone(),
            suite: self.suite.clone(),
            problem_ids,
            algorithms,
            runs: self.runs,
            max_gens,
            output_dir: self.output_dir.clone(),
            master_seed: seed_override.unwrap_or(self.master_seed),
        })
    }
}

/// A validated experiment with every parameter fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedExperiment {
    pub name: String,
    pub suite: SuiteRef,
    pub problem_ids: Vec<usize>,
    /// `(label, config)`; the config's seed is replaced per run.
    pub algorithms: Vec<(String, RunConfig)>,
    pub runs: usize,
    pub max_gens: usize,
    pub output_dir: PathBuf,
    pub master_seed: u64,
}

impl ResolvedExperiment {
    /// The fully explicit experiment file that reproduces this experiment.
    pub fn to_spec(&self) -> ExperimentSpec {
        ExperimentSpec {
            name: self.name.clone(),
            suite: self.suite.clone(),
            problem_ids: Some(self.problem_ids.clone()),
            algorithms: self
                .algorithms
                .iter()
                .map(|(label, c)| AlgorithmSpec::from_config(label, c))
                .collect(),
            runs: self.runs,
            max_gens: Some(self.max_gens),
            output_dir: self.output_dir.clone(),
            master_seed: self.master_seed,
        }
    }

    pub fn manifest_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_spec()).expect("spec serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentSpec> {
        ExperimentSpec::parse(text, Path::new("exp.json"))
    }

    #[test]
    fn defaults_are_filled() {
        let spec = parse(r#"{"name":"t","suite":"suite1","algorithms":[{"algorithm":"SaMTPSO-S1"},{"algorithm":"PSO","c1":2.0}]}"#)
            .unwrap();
        let r = spec.resolve(None).unwrap();
        assert_eq!(r.problem_ids, (1..=9).collect::<Vec<_>>());
        assert_eq!(r.runs, 30);
        assert_eq!(r.master_seed, 0);
        assert_eq!(r.algorithms[0].0, "SaMTPSO-S1");
        assert_eq!(r.algorithms[0].1, RunConfig::new(Algorithm::SaMtpsoS1));
        assert_eq!(r.algorithms[1].1.c1, 2.0);
        assert_eq!(r.algorithms[1].1.c2, 1.494);
        assert_eq!(r.output_dir, PathBuf::from("results"));
    }

    #[test]
    fn manifest_round_trips() {
        let spec = parse(
            r#"{"name":"t","suite":{"id":"suite2","data_dir":"d"},"problem_ids":[2,5],
                "algorithms":[{"algorithm":"S2","label":"mine","bp":0.01}],"runs":3,"max_gens":40,
                "output_dir":"o","master_seed":9}"#,
        )
        .unwrap();
        let r = spec.resolve(Some(17)).unwrap();
        assert_eq!(r.master_seed, 17);
        let again = parse(&r.manifest_json()).unwrap().resolve(None).unwrap();
        assert_eq!(again, r);
    }

    #[test]
    fn syntax_errors_carry_line_and_column() {
        let err = parse("{\n  \"name\": \"t\",\n  \"suite\": suite1\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.starts_with("exp.json: line 3, column"), "{msg}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = parse(r#"{"name":"t","suite":"suite1","algorithms":[{"algorithm":"PSO","bpp":0.1}]}"#).unwrap_err();
        assert!(err.to_string().contains("bpp"), "{err}");
    }

    #[test]
    fn field_errors_name_the_field() {
        let cases = [
            (r#""algorithms":[{"algorithm":"PSO","lp":0}]"#, "algorithms[0].lp"),
            (r#""algorithms":[{"algorithm":"PSO"},{"algorithm":"PSO"}]"#, "algorithms[1].label"),
            (r#""algorithms":[]"#, "algorithms"),
            (r#""algorithms":[{"algorithm":"PSO"}],"runs":0"#, "runs"),
            (r#""algorithms":[{"algorithm":"PSO"}],"problem_ids":[10]"#, "problem_ids"),
            (r#""algorithms":[{"algorithm":"PSO"}],"problem_ids":[1,1]"#, "problem_ids"),
        ];
        for (body, field) in cases {
            let spec = parse(&format!(r#"{{"name":"t","suite":"suite1",{body}}}"#)).unwrap();
            let err = spec.resolve(None).unwrap_err();
            assert!(err.to_string().starts_with(field), "{err}");
            assert_eq!(err.exit_code(), 2);
        }
    }

    #[test]
    fn single_problem_file_has_one_problem() {
        let spec = parse(r#"{"name":"t","suite":{"problem_file":"p.json"},"algorithms":[{"algorithm":"PSO"}]}"#).unwrap();
        assert_eq!(spec.resolve(None).unwrap().problem_ids, vec![1]);
    }
}
