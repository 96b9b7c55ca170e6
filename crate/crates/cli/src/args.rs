use std::path::PathBuf;

use carries_core::exactmath::parse_rational;
use carries_core::simulate::DEFAULT_BURN_IN;
use carries_core::Rational;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "carries", version, about = "Exact carries chains and generalized Eulerian numbers")]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rows 0..=N of the generalized Eulerian triangle E_p
    Triangle(TriangleArgs),
    /// Exact transition matrix of an n-carry process
    Matrix(MatrixArgs),
    /// Check that the Eulerian array diagonalizes the transition matrix
    Verify(VerifyArgs),
    /// Construct a numeration system with a prescribed p
    FindSystem(FindSystemArgs),
    /// Monte Carlo run of the carries process
    Simulate(SimulateArgs),
    /// Irwin-Hall interval masses against the Eulerian row
    UniformSum(UniformSumArgs),
}

pub fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct TriangleArgs {
    /// Parameter p as K or K/L
    #[arg(long, value_parser = rational_arg)]
    pub p: Rational,
    #[arg(long)]
    pub n_max: usize,
}

#[derive(Debug, Args)]
pub struct SystemArgs {
    /// Magnitude of the base
    #[arg(long)]
    pub base: i64,
    /// Least digit; the digit set is {d, ..., d+base-1}
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
    /// Number of summands
    #[arg(long)]
    pub n: usize,
    /// Use base -b instead of b
    #[arg(long)]
    pub negative: bool,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    #[arg(long)]
    pub base: i64,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "digits", conflicts_with = "digits")]
    pub d: Option<i64>,
    /// Explicit digit set such as "-1,0,4"; uses the brute-force construction
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    pub digits: Option<Vec<i64>>,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub negative: bool,
    /// Also emit det(xI - P)
    #[arg(long)]
    pub char_poly: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Verify this matrix (JSON) instead of the computed one
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FindSystemArgs {
    #[arg(long, value_parser = rational_arg)]
    pub p: Rational,
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long)]
    pub steps: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_BURN_IN)]
    pub burn_in: u64,
}

#[derive(Debug, Args)]
pub struct UniformSumArgs {
    #[arg(long, value_parser = rational_arg)]
    pub p: Rational,
    #[arg(long)]
    pub n: usize,
}
