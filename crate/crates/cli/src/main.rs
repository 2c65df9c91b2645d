mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Report;

/// Seed used by every randomized suite unless `--seed` is given.
pub const DEFAULT_SEED: u64 = 20_240_611;

const EXIT_CHECK: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;

#[derive(Parser, Debug)]
#[command(name = "cayley", version, about = "Exact and discrete checks for T²-invariant Spin(7)-structures")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct Opts {
    /// Arithmetic backend for pointwise checks.
    #[arg(long, value_enum, default_value_t = Backend::Exact, global = true)]
    pub backend: Backend,
    /// Absolute tolerance for float checks; must be positive.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Grid points per axis.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Seed for randomized suites.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    pub seed: u64,
    /// Shipped input by name.
    #[arg(long, global = true)]
    pub preset: Option<String>,
    /// Input file in the shared JSON schema.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    /// Exit with status 2 when a table row disagrees with its expected value.
    #[arg(long, global = true)]
    pub check: bool,
    /// Include the slower checks and the finest grid level.
    #[arg(long, global = true)]
    pub full: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Float,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Record,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MutateSign {
    #[value(name = "omega")]
    Omega,
    #[value(name = "re_omega")]
    ReOmega,
    #[value(name = "im_omega")]
    ImOmega,
}

impl MutateSign {
    pub fn name(self) -> &'static str {
        match self {
            MutateSign::Omega => "omega",
            MutateSign::ReOmega => "re_omega",
            MutateSign::ImOmega => "im_omega",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Dirac,
    Closure,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Contraction, Hodge-star, torsion-class and Hitchin identities on random SU(3)-structures.
    VerifyIdentities {
        /// Number of structures, the standard one included.
        #[arg(long, default_value_t = 200)]
        structures: usize,
        /// Flip the sign of one defining form before running the battery.
        #[arg(long, value_enum)]
        mutate_sign: Option<MutateSign>,
    },
    /// Residuals of the torsion-free system at one jet.
    Torsion,
    /// Integral Chern-class candidates orthogonal to a Kähler class.
    Scan {
        /// Kähler vector as comma-separated integers, replacing the preset's.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        kahler: Option<Vec<i64>>,
        /// Largest absolute coefficient in the candidate search.
        #[arg(long)]
        max_coeff: Option<i64>,
        #[command(flatten)]
        param: Param,
    },
    /// Betti numbers of iterated circle bundles from cup-rank tables.
    Betti {
        #[command(flatten)]
        param: Param,
    },
    /// Convergence and closure checks on periodic grids.
    Grid {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Side length of the periodic torus.
        #[arg(long, default_value_t = 1.0)]
        period: f64,
    },
}

/// Value of a preset's integer parameter.
#[derive(Args, Clone, Debug)]
pub struct Param {
    #[arg(long)]
    pub p: Option<i64>,
    #[arg(long)]
    pub k: Option<i64>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl From<cayley_core::Error> for CliError {
    fn from(e: cayley_core::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// A finished command: its report and whether failed checks decide the exit
/// status.
pub struct Outcome {
    pub report: Report,
    pub gate: bool,
}

fn run(cli: Cli) -> CliResult<Outcome> {
    let opts = &cli.opts;
    if let Some(t) = opts.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be a positive number, got {t}")));
        }
    }
    match cli.command {
        Command::VerifyIdentities { structures, mutate_sign } => commands::verify::run(opts, structures, mutate_sign),
        Command::Torsion => commands::torsion::run(opts),
        Command::Scan { kahler, max_coeff, param } => commands::topology::scan(opts, kahler, max_coeff, &param),
        Command::Betti { param } => commands::topology::betti(opts, &param),
        Command::Grid { suite, period } => commands::grid::run(opts, suite, period),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let start = Instant::now();
    let format = cli.opts.format;
    let output = cli.opts.output.clone();
    let outcome = match run(cli) {
        Ok(o) => o,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(CliError::Data(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(EXIT_DATA);
        }
    };
    let text = match format {
        Format::Table => outcome.report.render_table(),
        Format::Record => outcome.report.render_record(),
    };
    match output {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_DATA);
            }
        }
        None => print!("{text}"),
    }
    eprintln!("wall time: {:.2} s", start.elapsed().as_secs_f64());
    if outcome.gate && outcome.report.failures() > 0 {
        ExitCode::from(EXIT_CHECK)
    } else {
        ExitCode::SUCCESS
    }
}
