use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gausspr::Error;

mod commands;

/// Phase retrieval in Gaussian shift-invariant spaces.
#[derive(Parser)]
#[command(name = "gausspr", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a function as JSON, from fixed or seeded random coefficients.
    Synthesize(SynthesizeArgs),
    /// Sample |f| on a point set and write `lambda,magnitude` rows.
    Sample(SampleArgs),
    /// Recover functions from phaseless samples.
    Reconstruct(ReconstructArgs),
    /// Build two functions with equal magnitudes on a sparse set.
    Counterexample(CounterexampleArgs),
    /// Strip zeros of the periodic series attached to a function.
    Zeros(ZerosArgs),
}

#[derive(Args)]
pub struct SynthesizeArgs {
    /// JSON config with gamma, beta and either coeffs or seed and support.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of random coefficients.
    #[arg(long)]
    pub support: Option<usize>,
    /// Index of the first coefficient; random supports are centred by default.
    #[arg(long, allow_hyphen_values = true)]
    pub offset: Option<i64>,
    /// Draw complex instead of real coefficients.
    #[arg(long)]
    pub complex: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub function: PathBuf,
    /// Sample locations as `{"points": [...]}` or one per line.
    #[arg(long, conflicts_with = "step")]
    pub points: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true, requires = "window")]
    pub step: Option<f64>,
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true)]
    pub window: Option<Vec<f64>>,
    /// Standard deviation of Gaussian noise added to the magnitudes.
    #[arg(long, allow_negative_numbers = true)]
    pub noise: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Mode {
    Real,
    All,
    #[value(name = "even_real", alias = "even-real")]
    EvenReal,
}

#[derive(Args)]
pub struct ReconstructArgs {
    #[arg(long)]
    pub samples: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, value_enum, default_value_t = Mode::Real)]
    pub mode: Mode,
    #[arg(long, default_value_t = 64)]
    pub max_solutions: usize,
    /// Coefficient support `[A, B]` to fit.
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true)]
    pub window: Option<Vec<i64>>,
    #[arg(long, allow_negative_numbers = true)]
    pub tol_cluster: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV of measured and reconstructed magnitudes at the sample locations.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Args)]
pub struct CounterexampleArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub step: f64,
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true, default_values_t = [-10.0, 10.0])]
    pub window: Vec<f64>,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub beta: f64,
    /// Margin removed from each end of the window; defaults to 4β.
    #[arg(long)]
    pub guard: Option<f64>,
    /// Directory for `F.json`, `G.json` and `evidence.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Series {
    /// `D`, from the decayed coefficients of f.
    D,
    /// `R = D D*`, from the coefficients of |f|².
    R,
}

#[derive(Args)]
pub struct ZerosArgs {
    #[arg(long, conflicts_with = "laurent", required_unless_present = "laurent")]
    pub function: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Series::R)]
    pub series: Series,
    /// Laurent series JSON `{"offset", "coeffs"}`.
    #[arg(long)]
    pub laurent: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub tol_cluster: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_)
        | Error::Parse(_)
        | Error::InvalidParameter(_)
        | Error::Precondition(_)
        | Error::NotSeparated
        | Error::WindowTooSmall { .. } => 2,
        Error::IllConditioned { .. } => 3,
        Error::OddMultiplicity { .. } | Error::OddMultiplicityOnAxis { .. } | Error::NotASquare => {
            4
        }
        Error::NotSelfAdjoint { .. } => 5,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GAUSSPR_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synthesize(a) => commands::synthesize(a),
        Command::Sample(a) => commands::sample(a),
        Command::Reconstruct(a) => commands::reconstruct(a),
        Command::Counterexample(a) => commands::counterexample(a),
        Command::Zeros(a) => commands::zeros(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
