//! The `algforge` command line: a DSL for almost Lie algebroids and checks
//! that emit deterministic reports.

pub mod commands;
pub mod corpus;
pub mod dsl;
pub mod suite;
pub mod report;

use std::ffi::OsString;

use clap::{Parser, Subcommand};

use commands::{CliError, Options, DEFAULT_MAX_DEGREE};
use report::Report;

#[derive(Debug, Parser)]
#[command(name = "algforge", version, about = "Symbolic verification for almost Lie algebroids")]
pub struct Cli {
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Coefficient degree bound for witness searches (default: $ALGFORGE_MAX_DEGREE or 3).
    #[arg(long, global = true)]
    pub max_degree: Option<u32>,
    /// Emit the JSON report.
    #[arg(long, global = true)]
    pub json: bool,
    /// Bundle to use when a document declares several (default: the first).
    #[arg(long, global = true)]
    pub bundle: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Anchor compatibility on all generator pairs.
    Check { file: String },
    /// Jacobiators of generator triples.
    Jacobiator {
        file: String,
        /// `all`, or `i,j,k` triples separated by `;` (names or 1-based indices).
        #[arg(long, default_value = "all")]
        triples: String,
    },
    /// Anchor compatibility and the Jacobi identity.
    Lie { file: String },
    /// Torsion, curvature and Bianchi identities of a connection.
    ConnectionReport {
        file: String,
        #[arg(long)]
        connection: String,
    },
    /// Builds the derived bundle of a torsion-free connection.
    Derive {
        file: String,
        #[arg(long)]
        connection: String,
        #[arg(short = 'o', long = "output")]
        out: std::path::PathBuf,
    },
    /// Closedness and exactness decisions for a form.
    Cohomology {
        file: String,
        #[arg(long)]
        form: String,
    },
    /// Characteristic forms Tr R^k of a connection.
    Charclass {
        file: String,
        #[arg(long)]
        connection: String,
        #[arg(long, default_value_t = 2)]
        max_k: usize,
    },
    /// Weak exactness of the difference of two characteristic forms.
    Transgression {
        file: String,
        #[arg(long)]
        c1: String,
        #[arg(long)]
        c2: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Symmetric cometrics G with rho G rho^T = 0.
    Courant { file: String },
    /// Nijenhuis tensor of an endomorphism.
    Nijenhuis {
        file: String,
        #[arg(long)]
        endo: String,
    },
    /// Degree obstruction to making a triple's Jacobiator vanish.
    Obstruction {
        file: String,
        #[arg(long)]
        triple: String,
        /// Kernel sections by name (default: declared anchor-killed sections).
        #[arg(long)]
        kernel: Option<String>,
        /// Random kernel-valued modifiers to sample.
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Runs the built-in verification suite.
    VerifyPaper,
}

/// Process result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn max_degree(flag: Option<u32>) -> Result<u32, CliError> {
    if let Some(d) = flag {
        return Ok(d);
    }
    match std::env::var("ALGFORGE_MAX_DEGREE") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("ALGFORGE_MAX_DEGREE must be a non-negative integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_MAX_DEGREE),
    }
}

fn execute(cli: &Cli) -> Result<(Report, Option<(std::path::PathBuf, String)>), CliError> {
    let opts = Options { seed: cli.seed, max_degree: max_degree(cli.max_degree)?, bundle: cli.bundle.clone() };
    use Command::*;
    let report = match &cli.command {
        Check { file } => commands::check(&commands::load(file)?, &opts)?,
        Jacobiator { file, triples } => commands::jacobiator(&commands::load(file)?, &opts, triples)?,
        Lie { file } => commands::lie(&commands::load(file)?, &opts)?,
        ConnectionReport { file, connection } => {
            commands::connection_report(&commands::load(file)?, &opts, connection)?
        }
        Derive { file, connection, out } => {
            let (r, text) = commands::derive(&commands::load(file)?, &opts, connection)?;
            return Ok((r, Some((out.clone(), text))));
        }
        Cohomology { file, form } => commands::cohomology(&commands::load(file)?, &opts, form)?,
        Charclass { file, connection, max_k } => {
            commands::charclass(&commands::load(file)?, &opts, connection, *max_k)?
        }
        Transgression { file, c1, c2, k } => commands::transgression(&commands::load(file)?, &opts, c1, c2, *k)?,
        Courant { file } => commands::courant(&commands::load(file)?, &opts)?,
        Nijenhuis { file, endo } => commands::nijenhuis(&commands::load(file)?, &opts, endo)?,
        Obstruction { file, triple, kernel, samples } => {
            commands::obstruction(&commands::load(file)?, &opts, triple, kernel.as_deref(), *samples)?
        }
        VerifyPaper => suite::verify(opts.seed),
    };
    Ok((report, None))
}

/// Runs one invocation; `args[0]` is the program name.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok((report, file)) => {
            if let Some((path, text)) = file {
                if let Err(err) = std::fs::write(&path, text) {
                    let e = CliError::Io { path: path.display().to_string(), err };
                    return Output { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") };
                }
            }
            let stdout = if cli.json { report.to_json() + "\n" } else { report.render() };
            Output { code: report.exit_code(), stdout, stderr: String::new() }
        }
        Err(e) => Output { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
