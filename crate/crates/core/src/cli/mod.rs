//! Command-line front end.
//!
//! Exit codes: 0 pass, 1 a check failed, 2 usage, parse or schema error,
//! 3 I/O error, 4 non-convergence or inconclusive result.

mod commands;
mod output;
mod suite;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::ftvn::Status;

pub use commands::{cmd_axioms, cmd_commute, cmd_hyperbolic, cmd_principles};
pub use output::Record;
pub use suite::{cmd_suite, run_suite, SuiteEntry};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: String,
    pub system: Option<String>,
    pub generators: Option<String>,
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub jobs: Option<usize>,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: String::new(),
            system: None,
            generators: None,
            seed: 42,
            samples: 500,
            tol: 1e-8,
            jobs: None,
            output_path: None,
            format: Format::Text,
        }
    }
}

impl RunConfig {
    pub(crate) fn require_system(&self) -> Result<&str, Error> {
        self.system
            .as_deref()
            .ok_or_else(|| Error::Parse(format!("`{}` requires --system", self.command)))
    }
}

fn positive_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a positive tolerance")),
    }
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Registered system name, e.g. rn_sort:4, sym_eja:3, spin:2:scale=2.
    #[arg(long, global = true)]
    system: Option<String>,
    /// Generator set name, e.g. perm:4, deriv:sym_eja:3. Defaults to the
    /// system's automorphism generators.
    #[arg(long, global = true)]
    generators: Option<String>,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[arg(long, global = true, default_value_t = 1e-8, value_parser = positive_tol)]
    tol: f64,
    /// Worker threads for sampled checks and the suite.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write reports to a file; JSON output becomes a single array.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(
    name = "semiftvn",
    version,
    about = "Checks for semi-FTvN systems, commutativity and commutation principles"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Axiom and eigenvalue-map property battery for --system.
    Axioms,
    /// Strong and group-relative commutativity of a pair.
    Commute {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Probes of a hyperbolic polynomial given as a file or a hyp_* system.
    Hyperbolic {
        /// Polynomial JSON file.
        #[arg(long)]
        poly: Option<PathBuf>,
        #[command(subcommand)]
        probe: HyperbolicCommand,
    },
    /// Solve a problem-spec file and certify the commutation principle.
    Principles { problem: PathBuf },
    /// Full acceptance battery.
    Suite,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum HyperbolicCommand {
    /// Eigenvalues of x.
    Eig {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Hyperbolicity cone membership of x.
    Cone {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Search for a nonzero x with vanishing eigenvalues.
    Complete,
    /// Polarization inner product of x and y.
    Inner {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Majorization of eigenvalue differences on sampled pairs.
    Lidskii,
    /// Strong commutativity against the eigenvalue characterization,
    /// for a given pair or on sampled pairs.
    Char {
        #[arg(long, allow_hyphen_values = true, requires = "b")]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "a")]
        b: Option<String>,
    },
    /// Search for x in the orbit of z with λ(x + y) = λ(x) + λ(y).
    Isometric {
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
    },
}

impl HyperbolicCommand {
    fn name(&self) -> &'static str {
        match self {
            HyperbolicCommand::Eig { .. } => "eig",
            HyperbolicCommand::Cone { .. } => "cone",
            HyperbolicCommand::Complete => "complete",
            HyperbolicCommand::Inner { .. } => "inner",
            HyperbolicCommand::Lidskii => "lidskii",
            HyperbolicCommand::Char { .. } => "char",
            HyperbolicCommand::Isometric { .. } => "isometric",
        }
    }
}

/// Maps a library error to its exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoConvergence { .. } => EXIT_INCONCLUSIVE,
        Error::RootCountMismatch { .. } => EXIT_FAIL,
        _ => EXIT_USAGE,
    }
}

/// 0 when every status passes; fail beats inconclusive.
pub fn exit_for(statuses: impl IntoIterator<Item = Status>, count_inconclusive: bool) -> i32 {
    let mut code = EXIT_PASS;
    for s in statuses {
        match s {
            Status::Fail => return EXIT_FAIL,
            Status::Inconclusive if count_inconclusive => code = EXIT_INCONCLUSIVE,
            _ => {}
        }
    }
    code
}

/// Parses arguments and runs the selected command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let _ = e.print();
            return code;
        }
    };
    let g = cli.global;
    let mut config = RunConfig {
        command: String::new(),
        system: g.system,
        generators: g.generators,
        seed: g.seed,
        samples: g.samples as usize,
        tol: g.tol,
        jobs: g.jobs.map(|j| j as usize),
        output_path: g.output,
        format: g.format,
    };
    match cli.command {
        Command::Axioms => {
            config.command = "axioms".into();
            with_pool(&config, || cmd_axioms(&config))
        }
        Command::Commute { a, b } => {
            config.command = "commute".into();
            cmd_commute(&config, &a, &b)
        }
        Command::Hyperbolic { poly, probe } => {
            config.command = format!("hyperbolic {}", probe.name());
            with_pool(&config, || cmd_hyperbolic(&config, poly.as_deref(), &probe))
        }
        Command::Principles { problem } => {
            config.command = "principles".into();
            cmd_principles(&config, &problem)
        }
        Command::Suite => {
            config.command = "suite".into();
            cmd_suite(&config)
        }
    }
}

/// Runs `f` inside a thread pool sized by `--jobs`.
fn with_pool(config: &RunConfig, f: impl FnOnce() -> i32 + Send) -> i32 {
    match config.jobs {
        None => f(),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_USAGE
            }
        },
    }
}

pub fn main() -> i32 {
    run(std::env::args_os())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_precedence() {
        assert_eq!(exit_for([Status::Pass, Status::Pass], true), EXIT_PASS);
        assert_eq!(
            exit_for([Status::Inconclusive, Status::Pass], true),
            EXIT_INCONCLUSIVE
        );
        assert_eq!(
            exit_for([Status::Inconclusive, Status::Fail], true),
            EXIT_FAIL
        );
        assert_eq!(exit_for([Status::Inconclusive], false), EXIT_PASS);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(["semiftvn", "bogus"]), EXIT_USAGE);
        assert_eq!(run(["semiftvn", "axioms", "--tol", "0"]), EXIT_USAGE);
        assert_eq!(run(["semiftvn", "axioms", "--samples", "0"]), EXIT_USAGE);
        assert_eq!(run(["semiftvn", "axioms"]), EXIT_USAGE);
        assert_eq!(run(["semiftvn", "axioms", "--system", "bogus"]), EXIT_USAGE);
    }

    #[test]
    fn negative_vector_arguments_parse() {
        let cli = Cli::try_parse_from([
            "semiftvn",
            "commute",
            "--system",
            "rn_sort:2",
            "--a",
            "-1,2",
            "--b",
            "0,-3",
        ])
        .unwrap();
        match cli.command {
            Command::Commute { a, b } => assert_eq!((a.as_str(), b.as_str()), ("-1,2", "0,-3")),
            _ => panic!(),
        }
    }
}
