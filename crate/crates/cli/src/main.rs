mod commands;
mod error;
mod io;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qradius_core::AscentConfig;

use error::{CliError, CliResult};

/// q-numerical radii, range boundaries and structured-matrix bounds.
#[derive(Parser, Debug)]
#[command(name = "qradius", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct AscentArgs {
    /// Random restarts of the sphere optimizer.
    #[arg(long, default_value_t = AscentConfig::default().restarts)]
    restarts: usize,
    /// Relative improvement below which a run stops.
    #[arg(long, default_value_t = AscentConfig::default().tol)]
    tol: f64,
    #[arg(long, default_value_t = AscentConfig::default().max_iters)]
    max_iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl AscentArgs {
    fn config(&self) -> CliResult<AscentConfig> {
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(CliError::Usage("--restarts and --max-iters must be positive".into()));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(CliError::Usage("--tol must be a positive number".into()));
        }
        Ok(AscentConfig {
            restarts: self.restarts,
            max_iters: self.max_iters,
            tol: self.tol,
            seed: self.seed,
        })
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate w_q of a matrix.
    Radius {
        matrix: PathBuf,
        /// `q` in (0, 1], or complex `re,im` (reduced to its modulus).
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[command(flatten)]
        ascent: AscentArgs,
        /// Print the full estimate as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Trace the boundary of the q-numerical range.
    Range {
        matrix: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, default_value_t = 360)]
        thetas: usize,
        /// CSV with columns theta,support,re,im.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        ascent: AscentArgs,
    },
    /// Build a structured matrix from a spec and check its block reduction.
    Build {
        spec: PathBuf,
        /// Matrix JSON; printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        unitary: Option<PathBuf>,
        /// Reduced diagonal blocks with their k labels.
        #[arg(long)]
        blocks: Option<PathBuf>,
    },
    /// Lower and upper bounds from the diagonal blocks of the reduction.
    Bounds {
        /// A structured family, or `direct_sum`.
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        /// Tridiagonal special case built from a single base block:
        /// t_zero, s_zero, t_equals_s or s_equals_i_t.
        #[arg(long)]
        special: Option<String>,
        /// Block matrix files: (T, S) for tridiagonal families, S_1..S_n
        /// for circulant ones and direct sums, one base block with --special.
        #[arg(required = true)]
        blocks: Vec<PathBuf>,
        #[command(flatten)]
        ascent: AscentArgs,
        #[arg(long)]
        json: bool,
    },
    /// Run a verification suite and write its report.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Override every per-property trial count.
        #[arg(long)]
        trials: Option<usize>,
        /// Report JSON; printed to stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Regenerate the worked examples: bound comparison and boundary at q = 0.5.
    Reproduce {
        #[arg(long)]
        example: String,
        #[arg(long, default_value = "0.01:1:0.01")]
        q_grid: String,
        /// Output prefix; files are `<prefix>_bounds.csv`, `<prefix>_bounds.svg`,
        /// `<prefix>_boundary.csv` and `<prefix>_boundary.svg`.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 360)]
        thetas: usize,
        #[command(flatten)]
        ascent: AscentArgs,
    },
}

/// `RADIUS_THREADS` caps the worker pool; unset means all cores.
fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("RADIUS_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("RADIUS_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size thread pool: {e}")))
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    match cli.command {
        Command::Radius { matrix, q, ascent, json } => commands::radius(&matrix, &q, &ascent.config()?, json),
        Command::Range {
            matrix,
            q,
            thetas,
            out,
            svg,
            ascent,
        } => commands::range(&matrix, &q, thetas, &out, svg.as_deref(), &ascent.config()?),
        Command::Build {
            spec,
            out,
            unitary,
            blocks,
        } => commands::build(&spec, out.as_deref(), unitary.as_deref(), blocks.as_deref()),
        Command::Bounds {
            family,
            n,
            q,
            special,
            blocks,
            ascent,
            json,
        } => commands::bounds(&family, n, &q, special.as_deref(), &blocks, &ascent.config()?, json),
        Command::Verify {
            suite,
            seed,
            trials,
            report,
        } => commands::verify(&suite, seed, trials, report.as_deref()),
        Command::Reproduce {
            example,
            q_grid,
            out,
            thetas,
            ascent,
        } => commands::reproduce(&example, &q_grid, &out, thetas, &ascent.config()?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qradius: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
