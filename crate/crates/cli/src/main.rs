use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use mfwb::workbench::{compare_golden, run_file, Report};

#[derive(Parser)]
#[command(
    name = "workbench",
    version,
    about = "Exact computations for curved algebras and matrix factorizations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write its JSON report.
    Run {
        scenario: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (defaults to all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Compare the report against a golden file.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// Compare an existing report with a golden file.
    Golden { report: PathBuf, golden: PathBuf },
}

const TASK_ERROR: u8 = 1;
const GOLDEN_MISMATCH: u8 = 2;

fn read_json(path: &PathBuf) -> Result<serde_json::Value> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn golden_diff(report: &serde_json::Value, golden: &PathBuf) -> Result<bool> {
    let diff = compare_golden(report, &read_json(golden)?);
    for d in &diff {
        eprintln!("{d}");
    }
    Ok(diff.is_empty())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run {
            scenario,
            out,
            seed,
            jobs,
            golden,
        } => {
            if let Some(j) = jobs {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(j)
                    .build_global()
                    .context("configuring worker threads")?;
            }
            let report: Report = run_file(&scenario, seed)?;
            let text = report.to_json();
            match &out {
                Some(path) => std::fs::write(path, &text)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => println!("{text}"),
            }
            for t in report.tasks.iter().filter(|t| !t.ok) {
                eprintln!(
                    "task {} failed: {}",
                    t.task,
                    t.error
                        .as_ref()
                        .map_or(String::new(), |e| e["message"].to_string())
                );
            }
            if !report.all_ok() {
                return Ok(ExitCode::from(TASK_ERROR));
            }
            if let Some(g) = golden {
                let value = serde_json::to_value(&report)?;
                if !golden_diff(&value, &g)? {
                    return Ok(ExitCode::from(GOLDEN_MISMATCH));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Golden { report, golden } => {
            if golden_diff(&read_json(&report)?, &golden)? {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(GOLDEN_MISMATCH))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(TASK_ERROR)
        }
    }
}
