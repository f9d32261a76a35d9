//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "TONGUES_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "tongues", version, about = "Gap modes of the kicked Mathieu equation")]
pub struct Cli {
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; defaults to stdout, or to `<name>.<ext>` in the output
    /// directory when one is set.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, env = OUTPUT_DIR_ENV)]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a (delta, epsilon) grid as stable or unstable.
    Chart(ChartArgs),
    /// Edges of Arnold tongues.
    Edges(EdgesArgs),
    /// Kick strength needed for a gap mode at (delta, epsilon).
    Lambda(PointArgs),
    /// Gap-mode eigenvalue for a Dirac kick.
    Solve(SolveArgs),
    /// Sampled gap-mode profile for a Dirac kick.
    Profile(ProfileArgs),
    /// Eigenvalue as a function of kick strength.
    Flow(FlowArgs),
    /// Numerical delta1 against the small-epsilon law.
    Asym(AsymArgs),
    /// Gap mode of a finite-width kick by shooting.
    Bvp(BvpArgs),
    /// Gaussian-kick eigenvalue against width.
    WidthSweep(WidthSweepArgs),
    /// Regenerate the data behind a figure.
    Figure(FigureArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Chart(_) => "chart",
            Command::Edges(_) => "edges",
            Command::Lambda(_) => "lambda",
            Command::Solve(_) => "solve",
            Command::Profile(_) => "profile",
            Command::Flow(_) => "flow",
            Command::Asym(_) => "asym",
            Command::Bvp(_) => "bvp",
            Command::WidthSweep(_) => "width-sweep",
            Command::Figure(f) => f.name.name(),
        }
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ChartArgs {
    #[arg(long, default_value_t = 0.0)]
    pub delta_min: f64,
    #[arg(long, default_value_t = 2.5)]
    pub delta_max: f64,
    #[arg(long, default_value_t = 0.0)]
    pub epsilon_min: f64,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon_max: f64,
    /// Grid points along delta.
    #[arg(long, default_value_t = 50)]
    pub nd: usize,
    /// Grid points along epsilon.
    #[arg(long, default_value_t = 20)]
    pub ne: usize,
    #[arg(long, default_value_t = tongues_core::floquet::DEFAULT_EDGE_TOL)]
    pub edge_tol: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct EdgesArgs {
    #[arg(long)]
    pub epsilon: f64,
    /// Tongue index; repeat or separate with commas for several.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub gap: Vec<u32>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct PointArgs {
    #[arg(long)]
    pub delta: f64,
    #[arg(long)]
    pub epsilon: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SolveArgs {
    #[arg(long)]
    pub lambda: f64,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1)]
    pub gap: u32,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ProfileArgs {
    #[arg(long)]
    pub lambda: f64,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1)]
    pub gap: u32,
    #[arg(long, default_value_t = 125.6)]
    pub half_window: f64,
    #[arg(long, default_value_t = 4000)]
    pub samples: usize,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct FlowArgs {
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1)]
    pub gap: u32,
    /// Explicit strengths, strictly ascending; overrides the range flags.
    #[arg(long, value_delimiter = ',')]
    pub lambdas: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.1)]
    pub lambda_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub lambda_max: f64,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct AsymArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.02,0.05")]
    pub epsilons: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,4")]
    pub lambdas: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KickKind {
    Gaussian,
    Lorentzian,
    Tae,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct BvpArgs {
    #[arg(long, value_enum)]
    pub kick: KickKind,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1)]
    pub gap: u32,
    /// Integrated strength of a Gaussian or Lorentzian kick.
    #[arg(long, default_value_t = 1.0)]
    pub strength: f64,
    #[arg(long)]
    pub width: Option<f64>,
    /// Shear of the TAE kick.
    #[arg(long)]
    pub shear: Option<f64>,
    /// Emit the sampled profile instead of the summary row.
    #[arg(long)]
    pub profile: bool,
    #[arg(long)]
    pub half_window: Option<f64>,
    #[arg(long, default_value_t = 4001)]
    pub samples: usize,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct WidthSweepArgs {
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1)]
    pub gap: u32,
    /// Widths, strictly descending.
    #[arg(long, value_delimiter = ',', default_value = "0.4,0.2,0.1,0.05,0.025")]
    pub widths: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    D1curve,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::D1curve => "d1curve",
        }
    }
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub name: Figure,
}
