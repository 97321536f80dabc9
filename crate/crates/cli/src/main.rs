//! `closedcurve`: decide whether a curve given by periodic curvatures closes up.

mod commands;
mod config;
mod output;

use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{Format, Overrides};

#[derive(Debug, Parser)]
#[command(name = "closedcurve", version, about = "Closure tests for curves in Minkowski space-time")]
pub struct Cli {
    /// TOML job file (`.json` is read as JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Table format for traces and sweeps.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    tol_zero: Option<f64>,
    #[arg(long, global = true)]
    grid_points: Option<usize>,
    #[arg(long, global = true)]
    steps: Option<usize>,
    #[arg(long, global = true)]
    max_order: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Causal character and pseudo-norm of a vector.
    Classify {
        /// Signature as `n,v`.
        #[arg(long)]
        sig: String,
        /// Comma-separated components.
        #[arg(long = "vec", allow_hyphen_values = true)]
        vector: String,
    },
    /// Run the closure criterion; exit 0 when closed, 1 when not.
    Closure {
        /// Write the JSON report here (overrides `outputs.report_path`).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Integrate the frame equations and write the curve samples.
    Reconstruct {
        /// Overrides `outputs.trace_path`.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Append the flattened frame to every row.
        #[arg(long)]
        frames: bool,
    },
    /// Constant Darboux curvatures on a timelike surface; exit 0 when closed.
    Darboux(DarbouxArgs),
    /// Evaluate the criterion over the `[sweep]` grid.
    Sweep {
        /// Overrides `outputs.table_path`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct DarbouxArgs {
    #[arg(long, allow_hyphen_values = true)]
    kg: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    kn: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    tg: Option<f64>,
    /// Causal sign of the tangent, `1` or `-1`.
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<i64>,
    #[arg(long)]
    omega: Option<f64>,
    /// Write the JSON report here (overrides `outputs.report_path`).
    #[arg(long)]
    report: Option<PathBuf>,
}

impl Cli {
    fn overrides(&self) -> Overrides {
        Overrides {
            format: self.format,
            tol_zero: self.tol_zero,
            grid_points: self.grid_points,
            steps: self.steps,
            max_order: self.max_order,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match panic::catch_unwind(AssertUnwindSafe(|| commands::run(&cli))) {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(_) => ExitCode::from(2),
    }
}
