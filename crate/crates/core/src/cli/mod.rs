//! The `gml` experiment runner.
//!
//! A run resolves its configuration completely (config file, flag
//! overrides, windows, symbols, matrices) before computing anything, so an
//! invalid configuration leaves the output directory untouched.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | I/O failure while writing results |
//! | 2 | invalid configuration or non-symplectic input |
//! | 3 | operator or sequence not invertible |
//! | 4 | Fourier series vanishes on the grid |
//! | 5 | numerical tolerance failure |

pub mod config;
pub mod report;
pub mod run;
pub mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{Command, ConfigFile, ExperimentConfig, Overrides};
pub use report::{emit_report, Dataset, DatasetData, Report, Status};
pub use run::run_experiment;

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NOT_INVERTIBLE: i32 = 3;
pub const EXIT_VANISHING: i32 = 4;
pub const EXIT_TOLERANCE: i32 = 5;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotInvertible { .. } | Error::SingularMatrix | Error::ContractionViolation { .. } => {
            EXIT_NOT_INVERTIBLE
        }
        Error::VanishingFourierSeries { .. } => EXIT_VANISHING,
        Error::NotUnitary { .. } => EXIT_TOLERANCE,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_CONFIG,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match exit_code(e) {
        EXIT_NOT_INVERTIBLE => "not-invertible",
        EXIT_VANISHING => "vanishing-fourier-series",
        EXIT_TOLERANCE => "tolerance",
        EXIT_IO => "io",
        _ => "config",
    }
}

#[derive(Debug, Parser)]
#[command(name = "gml", version, about = "Finite phase-space experiments: Gabor matrices, FIO envelopes, amalgam norms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Gabor matrix and diagonal envelope of a Weyl operator.
    GaborMatrix(Common),
    /// Envelope of Op_w(σ)μ(χ) with respect to χ.
    Envelope(Common),
    /// Envelope of a product of two generalized metaplectic operators.
    Compose(Common),
    /// Inverse and its envelope with respect to χ⁻¹.
    Invert(Common),
    /// Both symbol factorizations and the Egorov defect.
    Factorize(Common),
    /// Amalgam norm, convolution embedding and GL-invariance of a field.
    Amalgam(Common),
    /// Invert a sequence in the convolution algebra.
    SeqInvert(Common),
    /// Run the property suite.
    Verify(Common),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Modulus N.
    #[arg(long = "N", alias = "n")]
    pub n: Option<usize>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub s: Option<f64>,
    /// Symplectic matrix as "a,b,c,d".
    #[arg(long, allow_hyphen_values = true)]
    pub chi: Option<String>,
    /// Window preset (gaussian[:c], delta, random) or JSON file.
    #[arg(long)]
    pub window: Option<String>,
    /// Symbol preset (identity, bump[:amp], plane-wave:a:b, random) or JSON file.
    #[arg(long)]
    pub symbol: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl Sub {
    fn split(self) -> (Command, Common) {
        match self {
            Sub::GaborMatrix(c) => (Command::GaborMatrix, c),
            Sub::Envelope(c) => (Command::Envelope, c),
            Sub::Compose(c) => (Command::Compose, c),
            Sub::Invert(c) => (Command::Invert, c),
            Sub::Factorize(c) => (Command::Factorize, c),
            Sub::Amalgam(c) => (Command::Amalgam, c),
            Sub::SeqInvert(c) => (Command::SeqInvert, c),
            Sub::Verify(c) => (Command::Verify, c),
        }
    }
}

/// Resolves, runs and writes; returns the process exit code.
pub fn execute(command: Command, common: Common) -> i32 {
    let result = (|| {
        let file = match &common.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let over = Overrides {
            n: common.n,
            q: common.q,
            s: common.s,
            chi: common.chi,
            window: common.window,
            symbol: common.symbol,
            out: common.out,
            seed: common.seed,
        };
        let cfg = ExperimentConfig::resolve(command, file, over)?;
        let report = run_experiment(&cfg)?;
        let path = emit_report(&cfg.out, &report)?;
        Ok::<_, Error>((report.status, path))
    })();
    match result {
        Ok((status, path)) => {
            println!("{}", path.display());
            match status {
                Status::Ok => EXIT_OK,
                Status::ToleranceFailure => {
                    eprintln!("{}", serde_json::json!({ "error": "tolerance", "report": path }));
                    EXIT_TOLERANCE
                }
            }
        }
        Err(e) => {
            let code = exit_code(&e);
            eprintln!(
                "{}",
                serde_json::json!({ "error": error_kind(&e), "message": e.to_string(), "exit_code": code })
            );
            code
        }
    }
}

/// Entry point shared by the binary and the tests.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (command, common) = cli.command.split();
    execute(command, common)
}
