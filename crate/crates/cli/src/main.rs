//! `polyform`: formulate, assign, decide, verify circuits, build splitters
//! and run the construct-verify-evaluate pipeline from the shell.
//!
//! Exit codes: 0 ok, 1 selftest failure, 2 parameter error, 3 verification
//! reject, 64 usage, 65 malformed input, 66 unreadable file, 70 internal
//! invariant, 73 unwritable output.

mod args;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use polyform::pipeline::PrimePolicy;

#[derive(Parser, Debug)]
#[command(
    name = "polyform",
    version,
    about = "Polynomial formulations and circuit verification at desk scale"
)]
struct Cli {
    /// Worker threads; 1 forces the sequential path.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a formulation bundle (meta, legend, polynomial) to a directory.
    Formulate {
        problem: String,
        /// Size parameters as key=value (n, m, k, t, w, theta).
        params: Vec<String>,
        #[arg(long)]
        theta: Option<usize>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Map an instance to its 0/1 point.
    ///
    /// Either `assign <problem> <instance> [key=value...]` or
    /// `assign --bundle DIR <instance> [key=value...]`. Steiner instances
    /// also take `terminals=a,b,c` and the budget `t=`.
    Assign {
        /// Read problem and parameters from a bundle's meta file.
        #[arg(long)]
        bundle: Option<PathBuf>,
        items: Vec<String>,
        #[arg(long)]
        theta: Option<usize>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a bundle's polynomial at an assignment.
    Decide {
        bundle: PathBuf,
        assignment: PathBuf,
    },
    /// Circuit tools.
    #[command(subcommand)]
    Circuit(CircuitCommand),
    /// Splitter tools.
    #[command(subcommand)]
    Splitter(SplitterCommand),
    /// Formulate once, verify a circuit for it, then decide every instance.
    Pipeline {
        problem: String,
        /// Leading key=value parameters, then instance files.
        items: Vec<String>,
        #[arg(long)]
        theta: Option<usize>,
        #[arg(long)]
        delta: Option<u32>,
        #[arg(long, default_value = "count")]
        prime_policy: PrimePolicy,
        /// Netlist to verify instead of the canonical sum of products.
        #[arg(long)]
        candidate: Option<PathBuf>,
        /// Print per-stage wall-clock times to stderr.
        #[arg(long)]
        times: bool,
    },
    /// Run the acceptance checks of one area (or `all`).
    Selftest {
        #[arg(default_value = "all")]
        scope: String,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct ModulusArg {
    /// Prime modulus; defaults to the one recorded in the input files.
    #[arg(long)]
    modulus: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum CircuitCommand {
    /// Sum-of-products netlist for a polynomial.
    BuildSop {
        poly: PathBuf,
        #[command(flatten)]
        modulus: ModulusArg,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compare a circuit's truncated expansion with a polynomial.
    Verify {
        circuit: PathBuf,
        poly: PathBuf,
        /// Truncation degree; defaults to the polynomial's degree bound.
        #[arg(long)]
        delta: Option<u32>,
        #[command(flatten)]
        modulus: ModulusArg,
    },
    /// Homogeneous components of degree 0..=delta as a multi-output netlist.
    Homogenize {
        circuit: PathBuf,
        #[arg(long)]
        delta: u32,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Evaluate at a point given as integers.
    Eval {
        circuit: PathBuf,
        #[arg(allow_hyphen_values = true)]
        point: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
enum SplitterCommand {
    /// Build a family: `code n= k=`, `interval n= k= l=`, `greedy n= k= c=`
    /// or `compose n= k= c=`.
    Build {
        kind: String,
        params: Vec<String>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Check a family, reporting an unsplit subset if there is one.
    Verify {
        file: PathBuf,
        /// `injective` or `even`; defaults to the kind in the file.
        #[arg(long)]
        mode: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(commands::EXIT_USAGE),
            };
        }
    };
    let run = || commands::dispatch(cli.command);
    let result = match cli.jobs {
        Some(0) => Err(commands::CliError::Usage("--jobs must be positive".into())),
        Some(1) => polyform::par::sequential(run),
        Some(n) => {
            commands::configure_threads(n);
            run()
        }
        None => run(),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("polyform: {e}");
            ExitCode::from(e.code())
        }
    }
}
