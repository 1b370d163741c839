use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use vesd_core::harness::{
    run_example, run_kernels, run_solve_control, run_solve_state, ConvergenceReport, ExampleId, RunOutput, StudyConfig,
};

/// Solver and convergence studies for optimal control of variable-exponent subdiffusion.
#[derive(Debug, Parser)]
#[command(name = "vesd", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// TOML file overriding the preset parameters.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides `out_dir` from the config).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Temporal and spatial two-mesh study of the uncontrolled state.
    Example1(Common),
    /// Two-mesh study of the optimality system (U, Z, C).
    Example2(Common),
    /// Manufactured optimality system compared with its exact fields.
    Example3(Common),
    /// Single state solve: final profile and per-level norms.
    SolveState(Common),
    /// Single fixed-point solve: iteration history, summary and profiles.
    SolveControl(Common),
    /// Kernel tables g, w, b, b̂ and P.
    Kernels(Common),
}

/// Preset used when the config file has no `example` key.
const DEFAULT_SINGLE: ExampleId = ExampleId::Example2;

fn load(common: &Common, fixed: Option<ExampleId>) -> Result<(StudyConfig, PathBuf)> {
    let cfg = match &common.config {
        Some(path) => {
            let text = StudyConfig::read_file(path)?;
            match fixed {
                Some(id) => StudyConfig::from_toml_str(&text, Some(id)),
                None => StudyConfig::from_toml_str_or(&text, DEFAULT_SINGLE),
            }
            .with_context(|| format!("loading {}", path.display()))?
        }
        None => StudyConfig::preset(fixed.unwrap_or(DEFAULT_SINGLE)),
    };
    let out = common
        .out
        .clone()
        .or_else(|| cfg.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    Ok((cfg, out))
}

fn print_reports(reports: &[ConvergenceReport]) {
    for r in reports {
        println!("{} {} alpha0={}", r.variable, r.direction, r.alpha0);
        for row in &r.rows {
            match row.rate {
                Some(rate) => println!("  {:>6}  {:.4e}  {:.2}", row.param, row.error, rate),
                None => println!("  {:>6}  {:.4e}     *", row.param, row.error),
            }
        }
    }
}

fn print_files(out: &RunOutput, dir: &Path) {
    println!("wrote {} file(s) to {}", out.files.len(), dir.display());
    for f in &out.files {
        println!("  {}", f.display());
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let (common, fixed) = match &cli.command {
        Command::Example1(c) => (c, Some(ExampleId::Example1)),
        Command::Example2(c) => (c, Some(ExampleId::Example2)),
        Command::Example3(c) => (c, Some(ExampleId::Example3)),
        Command::SolveState(c) | Command::SolveControl(c) | Command::Kernels(c) => (c, None),
    };
    let (cfg, dir) = load(common, fixed)?;
    let out = match cli.command {
        Command::Example1(_) | Command::Example2(_) | Command::Example3(_) => {
            let out = run_example(&cfg, &dir)?;
            print_reports(&out.reports);
            out
        }
        Command::SolveState(_) => run_solve_state(&cfg, &dir)?,
        Command::SolveControl(_) => run_solve_control(&cfg, &dir)?,
        Command::Kernels(_) => run_kernels(&cfg, &dir)?,
    };
    print_files(&out, &dir);
    Ok(())
}
