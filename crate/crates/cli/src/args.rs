use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "anharmonic",
    version,
    about = "Gaussian states of the quartic anharmonic oscillator H = p²/2 + ω²x²/2 + λx⁴/4",
    after_help = "Exit status: 0 success, 2 invalid input, 3 numerical failure."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Physics {
    /// Bare frequency ω (> 0)
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub omega: f64,
    /// Quartic coupling λ (≥ 0)
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Output file (default: stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Ode,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve Ω³ - ω²Ω - 3λ/2 = 0 for the vacuum frequency and energy floor
    Gap {
        #[command(flatten)]
        physics: Physics,
        #[command(flatten)]
        output: Output,
    },
    /// Width trajectory y = χ² from the closed form and from the width ODE
    ///
    /// CSV columns: t,y_closed,y_ode,abs_diff.
    Trajectory {
        #[command(flatten)]
        physics: Physics,
        /// Energy ε (≥ ε_min)
        #[arg(long, allow_hyphen_values = true)]
        epsilon: f64,
        /// End of the time span starting at 0
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        tmax: f64,
        /// Number of uniformly spaced samples
        #[arg(long, default_value_t = 201)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[command(flatten)]
        output: Output,
    },
    /// Turning points of the width motion, exact and first order in λ
    Roots {
        #[command(flatten)]
        physics: Physics,
        #[arg(long, allow_hyphen_values = true)]
        epsilon: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Squeeze parameter matching energy ε (exact at λ = 0, first order otherwise)
    Squeeze {
        #[command(flatten)]
        physics: Physics,
        #[arg(long, allow_hyphen_values = true)]
        epsilon: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Lowest eigenvalues of H in a truncated number basis built on Ω_G
    ///
    /// CSV columns: n,energy,converged.
    Spectrum {
        #[command(flatten)]
        physics: Physics,
        /// Basis dimension
        #[arg(long, default_value_t = 60)]
        dim: usize,
        /// Number of eigenvalues reported
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Errors of the weak-coupling expansions over a grid of λ, with log-log slopes
    ///
    /// CSV columns: lambda,root_err,freq_err,norm_defect.
    Weakcheck {
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        omega: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        epsilon: f64,
        /// Comma-separated couplings
        #[arg(
            long,
            default_value = "1e-4,1.778279410038923e-4,3.1622776601683795e-4,5.623413251903491e-4,1e-3,1.778279410038923e-3,3.1622776601683795e-3,5.623413251903491e-3,1e-2",
            allow_hyphen_values = true
        )]
        lambda_grid: String,
        #[command(flatten)]
        output: Output,
    },
    /// How far a fixed squeeze of the gap vacuum is from the exact Gaussian state
    Nonlinearity {
        #[command(flatten)]
        physics: Physics,
        /// Energy of the exact trajectory; the best-fit r is used for the residual
        #[arg(long, allow_hyphen_values = true, conflicts_with = "r", required_unless_present = "r")]
        epsilon: Option<f64>,
        /// Squeeze parameter; the energy is that of the squeezed state at t = 0
        #[arg(long, allow_hyphen_values = true)]
        r: Option<f64>,
        /// Span for the mean-field residual
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        tmax: f64,
        #[arg(long, default_value_t = 401)]
        samples: usize,
        #[command(flatten)]
        output: Output,
    },
}

impl Command {
    pub fn output(&self) -> &Output {
        match self {
            Command::Gap { output, .. }
            | Command::Trajectory { output, .. }
            | Command::Roots { output, .. }
            | Command::Squeeze { output, .. }
            | Command::Spectrum { output, .. }
            | Command::Weakcheck { output, .. }
            | Command::Nonlinearity { output, .. } => output,
        }
    }
}
