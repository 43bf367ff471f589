//! `faddeev-point`: field tables, contour reports, identity checks and
//! convergence studies for the two-dimensional point potential.
//!
//! Exit codes: 0 success, 1 failed check or numerical failure, 2 singular
//! input, 3 I/O failure, 4 usage error.

mod commands;
mod config;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::{CliError, Outcome};
use crate::suites::Suite;

#[derive(Parser, Debug)]
#[command(
    name = "faddeev-point",
    version,
    about = "Point-potential Faddeev scattering in two dimensions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate psi, psi+ or psi+- on a grid of points.
    Field(FieldArgs),
    /// Classify contour singularities at one energy and scan |a| across them.
    Contours(ContoursArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Convergence of the finite-N regularization.
    Converge(ConvergeArgs),
    /// Tabulate the bound state.
    BoundState(BoundStateArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// Faddeev eigenfunction at k_E(lambda).
    Faddeev,
    /// Classical outgoing solution at real k.
    Classical,
    /// Boundary values of the Faddeev function at real k.
    Boundary,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Plus,
    Minus,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Coupling alpha.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Output file; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Absolute and relative quadrature tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Args, Debug)]
pub struct FieldArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, allow_hyphen_values = true)]
    pub energy: Option<f64>,
    /// Spectral parameter as `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Real momentum as `k1,k2` (classical and boundary kinds).
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    /// Sheet at zero energy.
    #[arg(long, value_enum)]
    pub sheet: Option<SideArg>,
    /// Boundary side on real momenta.
    #[arg(long, value_enum)]
    pub side: Option<SideArg>,
    #[arg(long, value_enum, default_value = "faddeev")]
    pub kind: Kind,
    /// `xmin:xmax:nx,ymin:ymax:ny`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,
}

#[derive(Args, Debug)]
pub struct ContoursArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, allow_hyphen_values = true)]
    pub energy: Option<f64>,
    /// Samples per approach in the blow-up scan.
    #[arg(long, default_value_t = 12)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[command(flatten)]
    pub common: Common,
    /// Restrict energy-dependent suites to one energy.
    #[arg(long, allow_hyphen_values = true)]
    pub energy: Option<f64>,
    /// Quadrature nodes on the unit circle.
    #[arg(long)]
    pub nquad: Option<usize>,
    /// Smallest finite-difference step of the dbar sequence (4h, 2h, h).
    #[arg(long)]
    pub fd_step: Option<f64>,
}

#[derive(Args, Debug)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, allow_hyphen_values = true)]
    pub energy: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Real momentum `k1,k2`; uses the +i0 k limit.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    /// Evaluation point `x1,x2`.
    #[arg(long, allow_hyphen_values = true, default_value = "1,0")]
    pub x: String,
    /// Cutoffs 2^nmin ..= 2^nmax.
    #[arg(long, default_value_t = 6)]
    pub nmin: i32,
    #[arg(long, default_value_t = 14)]
    pub nmax: i32,
}

#[derive(Args, Debug)]
pub struct BoundStateArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = config::FileDefaults::from_env()
        .map_err(|e| CliError::Usage(e.to_string()))
        .and_then(|defaults| match &cli.command {
            Command::Field(a) => commands::field(a, &defaults),
            Command::Contours(a) => commands::contours(a, &defaults),
            Command::Verify(a) => commands::verify(a, &defaults),
            Command::Converge(a) => commands::converge(a, &defaults),
            Command::BoundState(a) => commands::bound_state(a, &defaults),
        });
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("faddeev-point: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
