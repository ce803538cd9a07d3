//! Command-line front end for the elastic spectral geometry toolkit.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 verification
//! threshold violated, 3 solver failure.

mod commands;
mod config;

use clap::{Parser, Subcommand};
use config::RunConfig;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "nlspec",
    version,
    about = "Elastic spectra, heat-trace coefficients, and shape recovery"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the randomized symbol-inverse suite and parametrix-defect checks.
    SymbolVerify {
        #[arg(long)]
        config: PathBuf,
        /// Override the seed recorded in the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the closed-form heat-trace coefficients of the configured domain.
    Predict {
        #[arg(long)]
        config: PathBuf,
    },
    /// Solve the configured eigenvalue problem and write the spectrum file.
    Eigs {
        #[arg(long)]
        config: PathBuf,
    },
    /// Fit the heat-trace coefficients of a spectrum and compare to the prediction.
    TraceFit {
        #[arg(long)]
        config: PathBuf,
        /// Read this spectrum file instead of solving the configured domain.
        #[arg(long)]
        spectrum: Option<PathBuf>,
    },
    /// Recover volume and boundary area from a spectrum file and judge ball rigidity.
    Hear {
        #[arg(long)]
        spectrum: PathBuf,
        /// Shear modulus; defaults to the spectrum metadata.
        #[arg(long)]
        mu: Option<f64>,
        /// Second parameter; defaults to the spectrum metadata.
        #[arg(long)]
        lambda: Option<f64>,
        /// Relative tolerance of the rigidity verdict.
        #[arg(long, default_value_t = 0.05)]
        tolerance: f64,
    },
}

/// Process environment relevant to a run; echoed in every report.
pub struct Environment {
    pub out_dir_override: Option<String>,
    pub threads: Option<usize>,
}

impl Environment {
    fn capture() -> Self {
        let out_dir_override = std::env::var("NLSPEC_OUT_DIR").ok();
        let threads = std::env::var("NLSPEC_THREADS").ok().and_then(|v| v.parse().ok());
        Self { out_dir_override, threads }
    }
}

/// Command failures carrying their exit code class.
#[derive(Debug)]
pub enum CommandError {
    /// Exit 1: bad usage, bad config, bad input files, preconditions.
    Config(String),
    /// Exit 2: a verification threshold was violated.
    Threshold(String),
    /// Exit 3: a solver did not produce a usable result.
    Solver(String),
}

impl CommandError {
    fn exit_code(&self) -> i32 {
        match self {
            CommandError::Config(_) => 1,
            CommandError::Threshold(_) => 2,
            CommandError::Solver(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CommandError::Config(m) | CommandError::Threshold(m) | CommandError::Solver(m) => m,
        }
    }
}

/// Writes a file through a temp-plus-rename so partial output never lands
/// under the final name.
pub fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)
}

fn load_config(path: &Path) -> Result<RunConfig, CommandError> {
    RunConfig::load(path).map_err(|e| CommandError::Config(format!("{e:#}")))
}

fn run(cli: Cli, env: &Environment) -> Result<(), CommandError> {
    match cli.command {
        Command::SymbolVerify { config, seed } => {
            let mut cfg = load_config(&config)?;
            if let Some(seed) = seed {
                cfg.symbol_verify.get_or_insert_with(Default::default).seed = Some(seed);
            }
            commands::cmd_symbol_verify(&cfg, env)
        }
        Command::Predict { config } => commands::cmd_predict(&load_config(&config)?, env),
        Command::Eigs { config } => commands::cmd_eigs(&load_config(&config)?, env),
        Command::TraceFit { config, spectrum } => {
            commands::cmd_trace_fit(&load_config(&config)?, spectrum.as_deref(), env)
        }
        Command::Hear { spectrum, mu, lambda, tolerance } => {
            commands::cmd_hear(&spectrum, mu, lambda, tolerance, env)
        }
    }
}

fn main() {
    // clap's own parse failure would exit 2; usage errors are exit 1 here.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let env = Environment::capture();
    if let Some(threads) = env.threads {
        // The dense eigensolves schedule over the global pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match run(cli, &env) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.exit_code());
        }
    }
}
