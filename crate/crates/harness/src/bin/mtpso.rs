use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use samtpso::metrics::StdKind;
use samtpso_harness::score::{render_table, SCORES_FILE};
use samtpso_harness::sweep::{render_sweep, SweepParam};
use samtpso_harness::{cmd_run, cmd_score, cmd_sweep, load_experiment, seed_from_env, Result};

#[derive(Parser)]
#[command(name = "mtpso", version, about = "Multi-task PSO experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment file and write results, convergence, transfer and
    /// manifest files.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Worker threads (default: number of CPUs).
        #[arg(long)]
        jobs: Option<usize>,
        /// Output directory, overriding the experiment's `output_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score algorithms against each other from one or more results files.
    Score {
        #[arg(required = true)]
        results: Vec<PathBuf>,
        #[arg(long, default_value = "population")]
        std: StdKind,
        /// Where to write the scores (default: next to the first input).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the experiment's single algorithm once per parameter value and
    /// score the values against each other.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        param: SweepParam,
        /// Comma-separated values (default: the standard grid).
        #[arg(long, value_delimiter = ',')]
        values: Vec<String>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, jobs, out } => {
            let exp = load_experiment(&config, seed_from_env()?)?;
            let (dir, _) = cmd_run(&exp, jobs.unwrap_or_else(default_jobs), out.as_deref())?;
            println!("wrote {}", dir.display());
        }
        Command::Score { results, std, out } => {
            let out = out.unwrap_or_else(|| {
                results[0]
                    .parent()
                    .unwrap_or(std::path::Path::new(""))
                    .join(SCORES_FILE)
            });
            let report = cmd_score(&results, std, &out)?;
            print!("{}", render_table(&report));
            println!("wrote {}", out.display());
        }
        Command::Sweep {
            config,
            param,
            values,
            jobs,
            out,
        } => {
            let exp = load_experiment(&config, seed_from_env()?)?;
            let values = if values.is_empty() {
                param.default_grid().iter().map(|s| s.to_string()).collect()
            } else {
                values
            };
            let (dir, report) = cmd_sweep(&exp, param, &values, jobs.unwrap_or_else(default_jobs), out.as_deref())?;
            if let Some(report) = report {
                print!("{}", render_sweep(&report));
            }
            println!("wrote {}", dir.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
