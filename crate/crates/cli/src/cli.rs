// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use qdsim_core::cqca::RecombineMode;
use qdsim_core::spin::ProductOrder;
use qdsim_core::Axis;
use serde_json::json;

use crate::commands::{self, SweepKind};
use crate::config::{check_tolerance, Format, RunConfig};
use crate::error::CliError;
use crate::report::Output;

#[derive(Debug, Parser)]
#[command(name = "qdsim", version, about = "Simulate the charge-ancilla CNOT on two dot spins")]
pub struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true, env = "QDSIM_CONFIG", value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Tolerance for closed-form comparisons.
    #[arg(long, global = true, value_name = "REAL", allow_hyphen_values = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_parser = parse_mode)]
    pub recombine: Option<RecombineMode>,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_mode(s: &str) -> Result<RecombineMode, String> {
    s.parse().map_err(|e: qdsim_core::Error| e.to_string())
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Order {
    /// Rightmost rotation acts first.
    Rtl,
    /// Leftmost rotation acts first.
    Ltr,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RamanAxis {
    X,
    Y,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the four basis inputs through the gate and compare with CNOT.
    TruthTable,
    /// Print the 36-amplitude state after every step.
    Trace {
        /// Basis input: 00, 01, 10 or 11.
        #[arg(long, conflicts_with = "amplitudes")]
        input: Option<String>,
        /// Explicit spin state as re0,im0,re1,im1,re2,im2,re3,im3.
        #[arg(long, allow_hyphen_values = true)]
        amplitudes: Option<String>,
    },
    /// Entangler fidelity against bias ratio, or Raman infidelity against detuning.
    Sweep {
        #[arg(value_enum)]
        kind: SweepKind,
        /// Comma-separated parameter values (ratios; detunings in units of Ω̄).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        points: Option<Vec<f64>>,
    },
    /// Check a rotation identity such as `Z:3 = X:3 Y:1` (angles in units of π).
    Decompose {
        #[arg(long, value_enum, default_value = "rtl")]
        order: Order,
        #[arg(required = true, num_args = 1..)]
        equation: Vec<String>,
    },
    /// Gate duration against the spin coherence time.
    Budget,
    /// Synthesize a Raman pulse pair and validate it against the three-level model.
    Raman {
        #[arg(long, value_enum)]
        axis: Option<RamanAxis>,
        /// Rotation angle in units of π.
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        omega_bar: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
    },
}

impl Cli {
    /// Configuration file (or defaults) with command-line overrides applied.
    pub fn resolve_config(&self) -> Result<RunConfig, CliError> {
        let mut config = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(f) = self.format {
            config.format = f;
        }
        if let Some(t) = self.tol {
            check_tolerance("--tol", t)?;
            config.tolerances.exact = t;
        }
        if let Some(m) = self.recombine {
            config.recombine_mode = m;
        }
        if let Command::Raman { axis, theta, omega_bar, delta, steps } = &self.command {
            let r = &mut config.raman;
            if let Some(a) = axis {
                r.axis = match a {
                    RamanAxis::X => Axis::X,
                    RamanAxis::Y => Axis::Y,
                };
            }
            r.theta_pi = theta.unwrap_or(r.theta_pi);
            r.omega_bar = omega_bar.unwrap_or(r.omega_bar);
            r.delta = delta.unwrap_or(r.delta);
            r.steps_per_segment = steps.unwrap_or(r.steps_per_segment);
        }
        config.validate()?;
        Ok(config)
    }
}

pub fn execute(cli: &Cli, config: &RunConfig) -> Result<Output, CliError> {
    match &cli.command {
        Command::TruthTable => commands::truth_table_cmd(config),
        Command::Trace { input, amplitudes } => {
            let state = commands::parse_input(input.as_deref(), amplitudes.as_deref())?;
            let arguments = match amplitudes {
                Some(a) => json!({ "amplitudes": a }),
                None => json!({ "input": input.as_deref().unwrap_or("00") }),
            };
            commands::trace_cmd(config, arguments, &state)
        }
        Command::Sweep { kind, points } => {
            let points = points.clone().unwrap_or_else(|| kind.default_points());
            commands::sweep_cmd(config, *kind, &points)
        }
        Command::Decompose { order, equation } => {
            let order = match order {
                Order::Rtl => ProductOrder::RightToLeft,
                Order::Ltr => ProductOrder::LeftToRight,
            };
            commands::decompose_cmd(config, equation, order)
        }
        Command::Budget => commands::budget_cmd(config),
        Command::Raman { .. } => commands::raman_cmd(config),
    }
}

/// Runs the tool on `args`, writing the report to stdout and errors to
/// stderr. Returns the exit status.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = cli
        .resolve_config()
        .and_then(|config| Ok((execute(&cli, &config)?, config)));
    match outcome {
        Ok((output, config)) => {
            print!("{}", output.render(config.format));
            if output.report.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
