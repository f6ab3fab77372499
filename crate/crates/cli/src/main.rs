//! `rotsym` command-line front end.

mod commands;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::CliError;

#[derive(Debug, Parser)]
#[command(name = "rotsym")]
#[command(about = "Rotationally symmetric manifolds compared with appended Schwarzschild space")]
pub struct Cli {
    /// Profile document (JSON) to read.
    #[arg(long, global = true)]
    pub profile: Option<PathBuf>,

    /// Dimension of the generated manifold.
    #[arg(long, global = true, default_value_t = 3)]
    pub n: usize,

    /// Penrose ratio of the generated deep well.
    #[arg(long, global = true)]
    pub delta: Option<f64>,

    /// Boundary area. Defaults to the profile's own boundary area, or 16π for generators.
    #[arg(long = "A0", global = true)]
    pub a0: Option<f64>,

    /// Area of the sphere the tube is centred on.
    #[arg(long = "A1", global = true)]
    pub a1: Option<f64>,

    /// Tube radius; tube bounds are only computed when given (sweeps default to 2).
    #[arg(long = "D", global = true)]
    pub d: Option<f64>,

    /// Requested depth of a generated deep well.
    #[arg(long = "L", global = true, default_value_t = 10.0)]
    pub l: f64,

    /// Comma-separated grid of δ values.
    #[arg(long, global = true, default_value = "")]
    pub sweep: String,

    /// Output path (JSON report, sweep CSV or generated profile).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Embedding table of M; the appended model goes to the `_appended` sibling.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,

    /// Relative quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,

    /// Seed of the mixed-direction sampler.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Exponent p in r_δ^{n−2} = (1+δ^p) r₀^{n−2}.
    #[arg(long = "rdelta-exponent", global = true, default_value_t = 0.5)]
    pub rdelta_exponent: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a profile document against the admissibility invariants.
    Validate,
    /// Full comparison report for a profile file or a generated deep well.
    Compare,
    /// One CSV row per δ on the deep-well family.
    Sweep,
    /// Generate an example profile and print a summary.
    Example {
        kind: ExampleKind,
        /// Sharp-turn indices j; slope 10·j, m_j = m₀(1 + 0.1/j).
        #[arg(long, default_value = "1,10,100")]
        j: String,
        /// Horizon mass m₀ of the sharp-turn sequence.
        #[arg(long, default_value_t = 1.0)]
        m0: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExampleKind {
    DeepWell,
    SharpTurn,
}

impl Cli {
    pub fn a0_or_default(&self) -> f64 {
        self.a0.unwrap_or(16.0 * PI)
    }

    pub fn a1_or_default(&self) -> f64 {
        self.a1.unwrap_or(64.0 * PI)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate => commands::validate(&cli),
        Command::Compare => commands::compare(&cli),
        Command::Sweep => commands::sweep(&cli),
        Command::Example { kind, j, m0 } => commands::example(&cli, *kind, j, *m0),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                CliError::Domain(_) => ExitCode::from(1),
                CliError::Input(_) => ExitCode::from(2),
            }
        }
    }
}
