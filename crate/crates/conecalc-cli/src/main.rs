//! `conecalc`: cone-calculus computations behind one binary.
//!
//! Every subcommand emits a single payload, JSON by default, to stdout
//! or to `--output`.  JSON reports embed the resolved configuration
//! under `"config"`, keyed by flag name, so a saved report doubles as a
//! source for `--config` defaults and identical configuration yields
//! byte-identical output.
//!
//! Exit codes: 0 on success, 2 for parameter problems (bad flags,
//! conflicting actions, unreadable inputs), 1 when the requested
//! computation itself fails (a contour through a pole, a weight line
//! with no admissible interval, missing decay).

mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "conecalc",
    version,
    about = "Mellin analysis on manifolds with conical points"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Singular exponents of a geometry and the admissible weights around them.
    Exponents(ExponentsArgs),
    /// Homogeneous wedge solutions: raster, residuals, square-integrability.
    Wedge(WedgeArgs),
    /// Forward and inverse transforms, or a named round-trip check.
    Mellin(MellinArgs),
    /// Weighted-space membership and the integrability shift.
    Sobolev(SobolevArgs),
    /// Residue terms picked up by a contour shift between two weight lines.
    Asymptotics(AsymptoticsArgs),
    /// Symbol values and weight-line ellipticity of the cone Laplacian.
    Symbol(SymbolArgs),
}

/// Flags shared by every subcommand.  Each resolves as flag, then
/// config-file entry under the same name, then built-in default.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Defaults file, one key=value per line, '#' starts a comment.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Payload encoding: json (reports) or csv (tabular payloads only).
    #[arg(long, value_name = "FMT")]
    pub format: Option<String>,

    /// Write the payload to this file instead of stdout; "-" forces
    /// stdout (overriding a config-file entry).
    #[arg(long, value_name = "FILE")]
    pub output: Option<PathBuf>,

    /// Radial grid: lower end in s = ln t.
    #[arg(long, allow_negative_numbers = true, value_name = "S")]
    pub s_min: Option<f64>,

    /// Radial grid: upper end in s = ln t.
    #[arg(long, allow_negative_numbers = true, value_name = "S")]
    pub s_max: Option<f64>,

    /// Radial grid: number of sample points.
    #[arg(long, value_name = "N")]
    pub grid_points: Option<usize>,

    /// Positive decision tolerance where a check needs one.
    #[arg(long, value_name = "TOL")]
    pub tol: Option<f64>,
}

/// Cross-section selection shared by `exponents` and `symbol`.
/// Exactly one geometry must be chosen.
#[derive(Args, Debug, Clone)]
pub struct GeometryArgs {
    /// Wedge of this opening in (0, 2 pi), interval cross-section with fixed ends.
    #[arg(long, value_name = "ALPHA")]
    pub wedge_angle: Option<f64>,

    /// Unit-circle cross-section.
    #[arg(long)]
    pub circle: bool,

    /// Round sphere cross-section of this dimension.
    #[arg(long, value_name = "DIM")]
    pub sphere: Option<usize>,

    /// Eigenvalue data (spectrum JSON) instead of a named geometry.
    #[arg(long, value_name = "FILE", conflicts_with = "modes")]
    pub spectrum_file: Option<PathBuf>,

    /// Mode truncation: sine modes 1..=M on the wedge, frequencies or
    /// degrees 0..=M on the circle and sphere.
    #[arg(long, value_name = "M")]
    pub modes: Option<usize>,
}

#[derive(Args, Debug)]
#[command(after_help = "CSV columns: q,j,sign,order (sign is plus | minus | double).")]
pub struct ExponentsArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,

    /// Report admissible weight intervals with gamma above this.
    #[arg(long, allow_negative_numbers = true, value_name = "G")]
    pub gamma_lo: Option<f64>,

    /// Report admissible weight intervals with gamma below this.
    #[arg(long, allow_negative_numbers = true, value_name = "G")]
    pub gamma_hi: Option<f64>,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
#[command(
    after_help = "CSV columns: t,theta,value,residual. Rows sweep the log-spaced radii \
                  of --t-min..--t-max for each interior angle; residual is the wedge \
                  Laplacian at the point, relative to the size of the solution term."
)]
pub struct WedgeArgs {
    /// Wedge opening alpha in (0, 2 pi).
    #[arg(long, value_name = "ALPHA")]
    pub angle: Option<f64>,

    /// Mode index of the solution; negative j grows toward the tip.
    #[arg(long, allow_negative_numbers = true, value_name = "J")]
    pub j: Option<i32>,

    /// Raster: smallest radius.
    #[arg(long, value_name = "T")]
    pub t_min: Option<f64>,

    /// Raster: largest radius.
    #[arg(long, value_name = "T")]
    pub t_max: Option<f64>,

    /// Raster: number of radii, log-spaced.
    #[arg(long, value_name = "N")]
    pub raster_points: Option<usize>,

    /// Raster: number of interior angles across the opening.
    #[arg(long, value_name = "N")]
    pub raster_angles: Option<usize>,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
#[command(
    after_help = "Exactly one action: --roundtrip NAME | --forward FILE | --inverse FILE.\n\
                  CSV columns: tau,re,im for --forward, s,t,re,im for --inverse."
)]
pub struct MellinArgs {
    /// Round-trip a named datum (gaussian | modulated | two-bump)
    /// across the lines beta = -1, 0, 1/2, 2.
    #[arg(long, value_name = "DATUM")]
    pub roundtrip: Option<String>,

    /// Transform samples (sampled JSON) along Re z = --beta.
    #[arg(long, value_name = "FILE")]
    pub forward: Option<PathBuf>,

    /// Invert a transform (transform JSON) onto the configured grid.
    #[arg(long, value_name = "FILE")]
    pub inverse: Option<PathBuf>,

    /// Weight line for --forward.
    #[arg(long, allow_negative_numbers = true, value_name = "BETA")]
    pub beta: Option<f64>,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
#[command(after_help = "Exactly one action: --gamma-p | --p-exp E.")]
pub struct SobolevArgs {
    /// Print the integrability shift gamma_p(n, p) and stop.
    #[arg(long)]
    pub gamma_p: bool,

    /// Membership check: exponent of the model function t^(-E) ln^k t.
    #[arg(long, allow_negative_numbers = true, value_name = "E")]
    pub p_exp: Option<f64>,

    /// Membership check: log power of the model function.
    #[arg(long, value_name = "K")]
    pub k: Option<u32>,

    /// Smoothness order of the space.
    #[arg(long, value_name = "S")]
    pub s: Option<u32>,

    /// Weight of the space; required for a membership check.
    #[arg(long, allow_negative_numbers = true, value_name = "G")]
    pub gamma: Option<f64>,

    /// Integrability of the space.
    #[arg(long, value_name = "P")]
    pub p: Option<f64>,

    /// Cross-section dimension.
    #[arg(long, value_name = "N")]
    pub n: Option<usize>,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct AsymptoticsArgs {
    /// Eigenvalue of the mode pencil z^2 - (n - 1) z + lambda.
    #[arg(long, allow_negative_numbers = true, value_name = "L")]
    pub lambda: Option<f64>,

    /// Cone dimension.
    #[arg(long, value_name = "N")]
    pub n: Option<usize>,

    /// Weight line the contour shift starts on.
    #[arg(long, allow_negative_numbers = true, value_name = "BETA")]
    pub from: Option<f64>,

    /// Weight line the contour shift ends on.
    #[arg(long, allow_negative_numbers = true, value_name = "BETA")]
    pub to: Option<f64>,

    /// Datum samples (sampled JSON); default is a unit bump at ln t = -3.
    #[arg(long, value_name = "FILE")]
    pub datum: Option<PathBuf>,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct SymbolArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,

    /// Evaluation radius for the principal and rescaled symbols.
    #[arg(long, value_name = "T")]
    pub t: Option<f64>,

    /// Fuchs covariable.
    #[arg(long, allow_negative_numbers = true, value_name = "TAU")]
    pub tau: Option<f64>,

    /// Cross-section covariable magnitude.
    #[arg(long, allow_negative_numbers = true, value_name = "XI")]
    pub xi: Option<f64>,

    /// Conormal evaluation point, real part.
    #[arg(long, allow_negative_numbers = true, value_name = "RE")]
    pub z_re: Option<f64>,

    /// Conormal evaluation point, imaginary part.
    #[arg(long, allow_negative_numbers = true, value_name = "IM")]
    pub z_im: Option<f64>,

    /// Check ellipticity along Re z = --beta instead of evaluating.
    #[arg(long)]
    pub elliptic: bool,

    /// Weight line for --elliptic.
    #[arg(long, allow_negative_numbers = true, value_name = "BETA")]
    pub beta: Option<f64>,

    #[command(flatten)]
    pub common: Common,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::dispatch(cli) {
        Ok(out) => match out.path.filter(|p| p.as_os_str() != "-") {
            Some(path) => match std::fs::write(&path, &out.payload) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    ExitCode::from(2)
                }
            },
            None => {
                print!("{}", out.payload);
                ExitCode::SUCCESS
            }
        },
        Err(run::Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(run::Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
