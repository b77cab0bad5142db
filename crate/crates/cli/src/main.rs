use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use unipar::decompose::DEFAULT_INPUT_TOLERANCE;
use unipar::toolkit::FitConfig;
use unipar_cli::commands;

/// Recursive parameterisation of unitary matrices: convert between real
/// angle lists and complex matrices, sample, verify, and fit. All files
/// are JSON; all angles are radians.
#[derive(Parser)]
#[command(name = "unipar", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compose a parameter file into a matrix file.
    Compose {
        /// Input parameter file (JSON).
        in_params: PathBuf,
        /// Output matrix file (JSON).
        out_matrix: PathBuf,
    },
    /// Decompose a matrix file into canonical parameters.
    Decompose {
        /// Input matrix file (JSON).
        in_matrix: PathBuf,
        /// Output parameter file (JSON).
        out_params: PathBuf,
        /// Unitarity gate on the input.
        #[arg(long, default_value_t = DEFAULT_INPUT_TOLERANCE)]
        tolerance: f64,
        /// Write the raw (pre-gauge-fixing) decomposition instead:
        /// complex level directions plus residual phases psi.
        #[arg(long)]
        raw: bool,
    },
    /// Sample random canonical parameters (uniform per angle, not Haar).
    Sample {
        /// Output parameter file (JSON).
        out_params: PathBuf,
        /// Matrix order.
        #[arg(long)]
        n: usize,
        /// Random seed; identical seeds give identical files.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the composed matrix to this file.
        #[arg(long)]
        matrix_out: Option<PathBuf>,
    },
    /// Check a matrix file against the unitary gate and print a report.
    Verify {
        /// Input matrix file (JSON).
        in_matrix: PathBuf,
        /// Gate on the unitarity deviation.
        #[arg(long, default_value_t = DEFAULT_INPUT_TOLERANCE)]
        tolerance: f64,
    },
    /// Find the canonical parameters whose composition is closest to a
    /// target matrix (Frobenius distance).
    Fit {
        /// Input target matrix file (JSON); any square complex matrix.
        in_target: PathBuf,
        /// Output parameter file (JSON).
        out_params: PathBuf,
        /// Gradient steps per start.
        #[arg(long, default_value_t = FitConfig::default().max_iterations)]
        max_iterations: usize,
        /// Initial step scale.
        #[arg(long, default_value_t = FitConfig::default().learning_rate)]
        learning_rate: f64,
        /// Central-difference offset.
        #[arg(long, default_value_t = FitConfig::default().gradient_step)]
        gradient_step: f64,
        /// Stop once a step improves the squared distance by less than this.
        #[arg(long, default_value_t = FitConfig::default().convergence_tol)]
        convergence_tol: f64,
        /// Random restarts in addition to the warm start.
        #[arg(long, default_value_t = FitConfig::default().seed_count)]
        seed_count: usize,
        /// Seed for the restart draws.
        #[arg(long, default_value_t = FitConfig::default().rng_seed)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Compose {
            in_params,
            out_matrix,
        } => commands::cmd_compose(&in_params, &out_matrix),
        Command::Decompose {
            in_matrix,
            out_params,
            tolerance,
            raw,
        } => commands::cmd_decompose(&in_matrix, &out_params, tolerance, raw),
        Command::Sample {
            out_params,
            n,
            seed,
            matrix_out,
        } => commands::cmd_sample(&out_params, n, seed, matrix_out.as_deref()),
        Command::Verify {
            in_matrix,
            tolerance,
        } => commands::cmd_verify(&in_matrix, tolerance),
        Command::Fit {
            in_target,
            out_params,
            max_iterations,
            learning_rate,
            gradient_step,
            convergence_tol,
            seed_count,
            seed,
        } => commands::cmd_fit(
            &in_target,
            &out_params,
            FitConfig {
                max_iterations,
                learning_rate,
                gradient_step,
                convergence_tol,
                seed_count,
                rng_seed: seed,
            },
        ),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
