//! `z2pell`: U polynomials, Pell checks, Z2 harmonic functions and their
//! zero loci from the command line.

// `!(x > y)` is deliberate: NaN has to fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;
mod problem;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

#[derive(Parser, Debug)]
#[command(
    name = "z2pell",
    version,
    about = "Z2 harmonic functions and the polynomial Pell equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Problem file (JSON)
    pub problem: PathBuf,
    /// Quadrature tolerance; overrides the problem file
    #[arg(long)]
    pub tol: Option<f64>,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Include per-stage wall-clock times in the report
    #[arg(long)]
    pub timings: bool,
}

#[derive(Args, Debug, Clone)]
pub struct Function {
    /// Growth "c0,c1,...,cK" of the function (c_k may be complex, e.g. 1+2i);
    /// default is the Green's function
    #[arg(long, conflicts_with = "u")]
    pub growth: Option<String>,
    /// Coefficients "u0,u1,..." of an admissible u, ascending
    #[arg(long)]
    pub u: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct Sampling {
    /// CSV file of points x,y
    #[arg(long, conflicts_with = "grid")]
    pub points: Option<PathBuf>,
    /// Evaluate on the (N+1)×(N+1) nodes of an N×N grid over --bbox
    #[arg(long)]
    pub grid: Option<usize>,
    /// "re_min,re_max,im_min,im_max"; default: a square around the roots
    #[arg(long)]
    pub bbox: Option<String>,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The distinguished polynomial U
    Upoly {
        #[command(flatten)]
        common: Common,
    },
    /// Pellian test: the period criterion, and the continued fraction for exact input
    PellCheck {
        #[command(flatten)]
        common: Common,
        /// Largest denominator tried when reading period ratios as rationals
        #[arg(long, default_value_t = 64)]
        qmax: u64,
        /// Continued-fraction steps before the exact search gives up
        #[arg(long, default_value_t = 200)]
        max_steps: usize,
        /// Exit with status 4 on an inconclusive verdict
        #[arg(long)]
        strict: bool,
    },
    /// Values of a Z2 harmonic function
    Eval {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        function: Function,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Values of the Green's function
    Green {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sampling: Sampling,
        /// "auto" (ln|p + q√D| when the period test finds D Pellian), "monic", or a number
        #[arg(long, default_value = "auto")]
        scale: String,
        /// Largest denominator tried by the period test behind `--scale auto`
        #[arg(long, default_value_t = 64)]
        qmax: u64,
    },
    /// The function with prescribed growth at infinity
    Construct {
        #[command(flatten)]
        common: Common,
        /// "c0,c1,...,cK"
        #[arg(long)]
        growth: String,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Trace the zero locus
    Zeros {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        function: Function,
        /// "re_min,re_max,im_min,im_max"; default: a square around the roots
        #[arg(long)]
        bbox: Option<String>,
        /// Cells per side of the tracing lattice
        #[arg(long, default_value_t = 400)]
        grid: usize,
        /// Write the curves CSV here instead of stdout
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also draw the curves, roots and junctions as SVG
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Angle tolerance for the structure check, degrees
        #[arg(long, default_value_t = 2.0)]
        angle_tol: f64,
    },
}

/// Why a run stopped.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Numerical(String),
}

impl From<z2pell::Error> for Failure {
    fn from(e: z2pell::Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

/// What a successful run reports back to `main`.
pub struct Outcome {
    pub inconclusive: bool,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("Z2PELL_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Input(format!("Z2PELL_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Numerical(format!("thread pool: {e}")))
}

fn run(cli: Cli, argv: Vec<String>) -> Result<Outcome, Failure> {
    configure_threads()?;
    match cli.command {
        Command::Upoly { common } => commands::upoly(&common, argv),
        Command::PellCheck {
            common,
            qmax,
            max_steps,
            strict,
        } => commands::pell_check(&common, argv, qmax, max_steps, strict),
        Command::Eval {
            common,
            function,
            sampling,
        } => commands::eval(&common, argv, &function, &sampling),
        Command::Green {
            common,
            sampling,
            scale,
            qmax,
        } => commands::green(&common, argv, &sampling, &scale, qmax),
        Command::Construct {
            common,
            growth,
            sampling,
        } => commands::construct(&common, argv, &growth, &sampling),
        Command::Zeros {
            common,
            function,
            bbox,
            grid,
            csv,
            svg,
            angle_tol,
        } => commands::zeros(
            &common,
            argv,
            &function,
            commands::ZerosArgs {
                bbox: bbox.as_deref(),
                grid,
                csv: csv.as_deref(),
                svg: svg.as_deref(),
                angle_tol,
            },
        ),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli, argv) {
        Ok(Outcome { inconclusive: true }) => ExitCode::from(4),
        Ok(_) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}
