//! `rcf`: the command-line front end.
//!
//! [`run`] parses an argument vector, executes one subcommand and returns the
//! process exit code. Reports go to `out`, diagnostics to `err`, so the whole
//! tool can be driven in-process.

mod commands;
mod presets;
mod render;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rcf_invariants::{InvariantsError, LADDER_MAX, LADDER_START};

pub use commands::execute;
pub use presets::{preset, Preset};

#[derive(Debug, Parser)]
#[command(name = "rcf", version, about = "Class invariants of imaginary biquadratic fields from Siegel-function values")]
pub struct Cli {
    /// Emit JSON on stdout instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Cap on worker threads (default: one per core).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

/// `K = Q(√-d1, √-d2)`.
#[derive(Debug, Clone, Args)]
pub struct TowerArgs {
    #[arg(long = "d1")]
    pub d1: i64,
    #[arg(long = "d2")]
    pub d2: i64,
    /// Class number of `Q(√(d1 d2))` when it is not tabulated.
    #[arg(long = "h3")]
    pub h3: Option<u64>,
    /// Unit index `Q(K)` when it is not tabulated.
    #[arg(long = "Q")]
    pub q: Option<u8>,
}

#[derive(Debug, Clone, Args)]
pub struct LevelArgs {
    #[arg(long = "N", default_value_t = 1)]
    pub level: u64,
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 0)]
    pub mu: u32,
}

#[derive(Debug, Clone, Args)]
pub struct SpecArgs {
    #[command(flatten)]
    pub tower: TowerArgs,
    #[command(flatten)]
    pub level: LevelArgs,
    /// Imaginary subfield supplying the CM point.
    #[arg(long = "I", default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub field: u8,
    /// Exponent multiple.
    #[arg(long = "n", default_value_t = 1)]
    pub power: u64,
    /// First rung of the precision ladder.
    #[arg(long = "prec-bits", default_value_t = LADDER_START)]
    pub prec_bits: usize,
    #[arg(long = "max-prec-bits", default_value_t = LADDER_MAX)]
    pub max_prec_bits: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long)]
    pub degrees: bool,
    #[arg(long = "norm-gen")]
    pub norm_generator: bool,
    #[arg(long)]
    pub conjugates: bool,
    #[arg(long)]
    pub minpoly: bool,
    #[arg(long = "normal-basis")]
    pub normal_basis: bool,
    /// Also write the report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExampleId {
    #[value(name = "6-14a")]
    E614a,
    #[value(name = "6-14b")]
    E614b,
    #[value(name = "7-9")]
    E79,
    #[value(name = "8-8")]
    E88,
    #[value(name = "9-6")]
    E96,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fundamental unit of the real subfield and its orders modulo N p^μ.
    Unit {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long = "N", default_value_t = 1)]
        level: u64,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Points of x^2 - Δy^2 = 1 over F_p and the norm map onto F_p^×.
    Pell {
        #[arg(long)]
        delta: i64,
        #[arg(long)]
        p: u64,
    },
    /// Extension degrees of the class-field diagram.
    Degrees {
        #[command(flatten)]
        tower: TowerArgs,
        #[command(flatten)]
        level: LevelArgs,
    },
    /// g_(r1,r2)^(12 M n) at θ1 = (-1+√-d)/2 or θ2 = √-d.
    SiegelEval {
        /// First index entry as a/M.
        #[arg(long, allow_hyphen_values = true)]
        r1: String,
        #[arg(long, allow_hyphen_values = true)]
        r2: String,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        field: u8,
        #[arg(long)]
        d: i64,
        #[arg(long = "pow-mult", default_value_t = 1)]
        pow_mult: u64,
        #[arg(long = "prec-bits", default_value_t = LADDER_START)]
        prec_bits: usize,
    },
    /// The seed value γ = g_(0, 1/(N p^(μ+1)))^(12 N p^(μ+1) n)(θ_I).
    Gamma(SpecArgs),
    /// Norm of γ down to the fixed field of the real subfield's class field.
    NormGen(SpecArgs),
    /// The p - 1 conjugates γ_k over the Hilbert class field.
    Conjugates(SpecArgs),
    /// Integer minimal polynomial of γ_0 from its conjugates.
    Minpoly(SpecArgs),
    /// Normal-basis generator β with its Frobenius certificate.
    NormalBasis(SpecArgs),
    /// Full JSON report for the selected sections.
    Report(ReportArgs),
    /// Checks a JSON report file against the schema.
    Validate { path: PathBuf },
    /// Runs a preset with every flag fixed.
    Reproduce {
        #[arg(long)]
        example: ExampleId,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Invariants(#[from] InvariantsError),
    #[error(transparent)]
    Fields(#[from] rcf_fields::FieldsError),
    #[error(transparent)]
    Residue(#[from] rcf_residue::ResidueError),
    #[error(transparent)]
    Siegel(#[from] rcf_siegel::SiegelError),
    #[error("{0}")]
    Usage(String),
    #[error("invalid report: {0}")]
    Report(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 1 hypothesis violation, 2 precision exhausted, 3 usage, 4 internal.
    pub fn exit_code(&self) -> i32 {
        use rcf_fields::FieldsError as F;
        use rcf_residue::ResidueError as R;
        use rcf_siegel::SiegelError as S;
        let fields = |e: &F| match e {
            F::Hypothesis(_) => 1,
            F::Input(_) => 3,
            F::Internal(_) => 4,
        };
        let residue = |e: &R| match e {
            R::Hypothesis(_) => 1,
            R::Input(_) => 3,
            R::Internal(_) => 4,
        };
        let siegel = |e: &S| match e {
            S::Numerics(_) => 4,
            _ => 3,
        };
        match self {
            CliError::Invariants(e) => match e {
                InvariantsError::Hypothesis(_) | InvariantsError::OutOfScope(_) => 1,
                InvariantsError::Uncertified(..) | InvariantsError::Certification(..) => 2,
                InvariantsError::Input(_) => 3,
                InvariantsError::Fields(e) => fields(e),
                InvariantsError::Residue(e) => residue(e),
                InvariantsError::Siegel(e) => siegel(e),
                InvariantsError::Numerics(_) => 4,
            },
            CliError::Fields(e) => fields(e),
            CliError::Residue(e) => residue(e),
            CliError::Siegel(e) => siegel(e),
            CliError::Usage(_) | CliError::Report(_) | CliError::Json(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: thread pool: {e}");
            return 4;
        }
    };
    let (result, buf) = pool.install(|| {
        let mut buf = Vec::new();
        (execute(&cli, &mut buf), buf)
    });
    if let Err(e) = out.write_all(&buf).and_then(|_| out.flush()) {
        let _ = writeln!(err, "error: {e}");
        return 4;
    }
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
