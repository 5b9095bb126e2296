//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "fermat-torus",
    version,
    about = "Fermat curves, torus geodesics and rational point searches",
    disable_help_subcommand = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample x^n + y^n = 1 on [0, 1] for each n.
    Curve(CurveArgs),
    /// Velocity and acceleration of the curve, with the small-x phase class.
    Kinematics(KinematicsArgs),
    /// Integrate a torus geodesic with RK4.
    Geodesic(GeodesicArgs),
    /// Wind the line (a t + u0, b t + v0) onto the torus.
    MapLine(MapLineArgs),
    /// Grid coverage of a winding line for several horizons.
    Density(DensityArgs),
    /// Exact rational points of x^n + y^n = 1 with bounded denominators.
    Search(SearchArgs),
    /// Primitive integer solutions of x^n + y^n = z^n.
    Triples(TriplesArgs),
    /// Crossings of y = (b/a) x wrapped on the unit square with the curve.
    Intersect(IntersectArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
    Obj,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Svg => "svg",
            Format::Obj => "obj",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// Output file; parent directories are created.
    #[arg(long)]
    pub out: PathBuf,
    /// Output format; inferred from the extension of --out when omitted.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Y,
    Vel,
    Acc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Surface {
    Torus,
    Cylinder,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Exponents, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0])]
    pub n: Vec<f64>,
    #[arg(long, default_value_t = 1001)]
    pub samples: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct KinematicsArgs {
    /// Exponents, comma separated (n >= 1).
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<f64>,
    #[arg(long, default_value_t = 0.001)]
    pub x_min: f64,
    #[arg(long, default_value_t = 0.999)]
    pub x_max: f64,
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    /// Plotted quantity (svg only).
    #[arg(long, value_enum, default_value_t = Quantity::Acc)]
    pub quantity: Quantity,
    /// Lower edge of the plot; samples below are clipped (svg only).
    #[arg(long, allow_negative_numbers = true)]
    pub y_min: Option<f64>,
    /// Upper edge of the plot (svg only).
    #[arg(long, allow_negative_numbers = true)]
    pub y_max: Option<f64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct GeodesicArgs {
    /// Major radius.
    #[arg(long = "R", default_value_t = 2.0)]
    pub major: f64,
    /// Minor radius.
    #[arg(long = "r", default_value_t = 1.0)]
    pub minor: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub u0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub v0: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub du: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub dv: f64,
    #[arg(long)]
    pub t_max: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
    /// Keep every k-th integration step in the output.
    #[arg(long, default_value_t = 1)]
    pub every: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct MapLineArgs {
    /// Slope along u: integer, p/q (exact) or decimal (floating point).
    #[arg(long, allow_negative_numbers = true)]
    pub a: String,
    /// Slope along v, same forms as --a.
    #[arg(long, allow_negative_numbers = true)]
    pub b: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub u0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub v0: f64,
    #[arg(long = "R", default_value_t = 2.0)]
    pub major: f64,
    #[arg(long = "r", default_value_t = 1.0)]
    pub minor: f64,
    /// Parameter range; defaults to one closure period.
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long, default_value_t = 2001)]
    pub samples: usize,
    /// Embedding for obj output.
    #[arg(long, value_enum, default_value_t = Surface::Torus)]
    pub surface: Surface,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub a: String,
    #[arg(long, allow_negative_numbers = true)]
    pub b: String,
    /// Horizons, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub t_max: Vec<f64>,
    /// Cells per side of the coverage grid.
    #[arg(long, default_value_t = 100)]
    pub grid: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub max_den: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct TriplesArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub max_z: u64,
    /// Also list the non-primitive multiples up to --max-z.
    #[arg(long)]
    pub expand_multiples: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct IntersectArgs {
    #[arg(long)]
    pub n: u32,
    /// Run of the line (exact rational, non-negative).
    #[arg(long)]
    pub a: String,
    /// Rise of the line (exact rational, non-negative).
    #[arg(long)]
    pub b: String,
    /// Denominator cap for labelling crossings as rational.
    #[arg(long, default_value_t = 1_000_000)]
    pub max_den: u64,
    #[arg(long, default_value_t = 1e-13)]
    pub tol: f64,
    #[command(flatten)]
    pub output: Output,
}
