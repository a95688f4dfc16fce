//! `quatgeom` command-line driver.
//!
//! Data goes to standard output (or `--output`), diagnostics to standard error.
//! Exit status: 0 on success, 1 when a verification fails, 2 on errors.

mod commands;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "quatgeom",
    version,
    about = "Sp(2)Sp(1)-orbits of real Grassmannians in H^2 and their invariant valuations"
)]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct ConfigArgs {
    /// Seed for all random sampling.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    /// Monte Carlo sample count.
    #[arg(long, global = true, default_value_t = 100_000)]
    samples: usize,
    /// Tolerance override (each command has its own default).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Finite-difference step.
    #[arg(long, global = true, default_value_t = quatgeom::spectral::DEFAULT_H)]
    h: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write data here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table {
    Dims,
    Multipliers,
    Eigenvalues,
    Laplacian,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Laplacian,
    Cosine,
    Orbit,
    Crofton,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Orbit invariants of the plane spanned by a frame file {"k", "columns"}.
    Classify { frame: PathBuf },
    /// A frame realizing the invariants in a file {"k", "lambda": {"12": ..}}.
    Reconstruct { lambda: PathBuf },
    /// Frame and invariants of the torus point with the given angles.
    Angles {
        #[arg(value_delimiter = ',', allow_negative_numbers = true, required = true)]
        theta: Vec<f64>,
    },
    /// Moore spectrum of a hyperhermitian matrix file {"matrix": [[[a, b, c, d], ..], ..]}.
    Moore { matrix: PathBuf },
    /// Print a table computed from the library.
    Tables {
        #[arg(value_enum)]
        which: Table,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Monte Carlo value of the basis valuation with Klain function f_{degree,index} on a body file.
    CroftonEval {
        body: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        index: usize,
    },
}

/// Validated run settings shared by all commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: usize,
    pub tol: Option<f64>,
    pub h: f64,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    fn new(a: ConfigArgs) -> Result<Self> {
        if a.samples < 1 {
            bail!("--samples must be at least 1");
        }
        if let Some(t) = a.tol {
            if !(t > 0.0 && t.is_finite()) {
                bail!("--tol must be positive, got {t}");
            }
        }
        let (lo, hi) = quatgeom::spectral::H_RANGE;
        if !(lo..=hi).contains(&a.h) {
            bail!("--h must lie in [{lo}, {hi}], got {}", a.h);
        }
        Ok(Self {
            seed: a.seed,
            samples: a.samples,
            tol: a.tol,
            h: a.h,
            format: a.format,
            output: a.output,
        })
    }

    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

/// Result of a command: both renderings plus the verdict for `verify`.
pub struct Output {
    pub json: serde_json::Value,
    pub tsv: String,
    pub success: bool,
}

fn emit(config: &RunConfig, out: &Output) -> Result<()> {
    let text = match config.format {
        Format::Json => serde_json::to_string_pretty(&out.json)? + "\n",
        Format::Tsv => out.tsv.clone(),
    };
    match &config.output {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn dispatch(command: Command, config: &RunConfig) -> Result<Output> {
    match command {
        Command::Classify { frame } => commands::classify(&frame, config),
        Command::Reconstruct { lambda } => commands::reconstruct(&lambda, config),
        Command::Angles { theta } => commands::angles(&theta),
        Command::Moore { matrix } => commands::moore(&matrix, config),
        Command::Tables { which } => commands::tables(which),
        Command::Verify { suite } => verify::run(suite, config),
        Command::CroftonEval {
            body,
            degree,
            index,
        } => commands::crofton_eval(&body, degree, index, config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = RunConfig::new(cli.config).and_then(|config| {
        let out = dispatch(cli.command, &config)?;
        emit(&config, &out)?;
        Ok(out.success)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
