//! `ri`: norms, rearrangements, convolutions, K-functionals, and the
//! verification suites, from the command line.
//!
//! Exit codes: 0 when everything passed, 2 when any suite verdict is
//! Violated, 3 on configuration errors (bad flags, unparsable grammar,
//! unknown suites, unreadable inputs).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;

#[derive(Parser)]
#[command(name = "ri", version, about = "rearrangement-invariant analysis toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a space norm of a step function
    Norm(NormArgs),
    /// Decreasing rearrangement of a step function
    Rearrange(RearrangeArgs),
    /// Exact convolution of two step functions
    Conv(ConvArgs),
    /// K- or J-functional of a couple at given t
    Kfun(KfunArgs),
    /// Run a verification suite and write its reports
    Verify(VerifyArgs),
    /// Run a bilinear multiplier suite against a symbol
    Multiplier(MultiplierArgs),
    /// List the suite catalogue
    List,
}

#[derive(Args)]
pub struct NormArgs {
    /// Space in the config grammar, e.g. lebesgue(2), lorentz(2,1), llogl
    #[arg(long)]
    pub space: String,
    /// Step function file in `stepfn v1` text format; `-` for stdin
    #[arg(long)]
    pub input: PathBuf,
    /// Domain tag for the space; defaults to the function's own domain
    #[arg(long)]
    pub domain: Option<String>,
}

#[derive(Args)]
pub struct RearrangeArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Output file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct ConvArgs {
    #[arg(long)]
    pub f: PathBuf,
    #[arg(long)]
    pub g: PathBuf,
    /// Cells per linear piece when projecting back to a step function
    #[arg(long, default_value_t = 4)]
    pub refine: usize,
    /// Print the exact L^p norm of the convolution (repeatable)
    #[arg(long)]
    pub norm: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct KfunArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Couple in the config grammar; spaces share the function's domain
    #[arg(long, default_value = "couple(L1, Linf)")]
    pub couple: String,
    /// Evaluation points (repeatable); defaults to t = 1
    #[arg(long)]
    pub t: Vec<String>,
    /// Evaluate the J-functional instead of K
    #[arg(long)]
    pub j: bool,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Suite id from `ri list`
    #[arg(long)]
    pub suite: Option<String>,
    /// key = value file supplying any of the flags below
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub domain: Option<String>,
    /// Corpus size
    #[arg(long)]
    pub pairs: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub r: Option<String>,
    /// Asserted constant override (planted-failure runs)
    #[arg(long)]
    pub claimed: Option<String>,
    #[arg(long)]
    pub space: Option<String>,
    /// Full params(...) block; overrides theta/b/E/T/h
    #[arg(long)]
    pub params: Option<String>,
    #[arg(long)]
    pub phi0: Option<String>,
    #[arg(long)]
    pub theta: Option<String>,
    #[arg(long)]
    pub rho: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    /// Slowly varying weight for the bilinear suites
    #[arg(long)]
    pub phi: Option<String>,
    #[arg(long = "E")]
    pub e_space: Option<String>,
    #[arg(long = "F")]
    pub f_space: Option<String>,
    /// Bilinear operator instance: conv-torus or product-sup
    #[arg(long)]
    pub op: Option<String>,
    /// Log-window half-width
    #[arg(long = "T")]
    pub window: Option<String>,
    /// Grid step
    #[arg(long)]
    pub h: Option<String>,
    /// J-representation term budget
    #[arg(long)]
    pub terms: Option<String>,
    /// Relative slack for the bilinear constants
    #[arg(long)]
    pub slack: Option<String>,
    /// Trig-polynomial degree for the multiplier-backed suites
    #[arg(long = "N")]
    pub degree: Option<String>,
    /// Multiplier symbol CSV (rows k,k',re,im)
    #[arg(long)]
    pub m: Option<PathBuf>,
    /// Re-run at doubled window / halved step and record the drift
    #[arg(long)]
    pub drift: bool,
    /// JSON report path; defaults to <out-dir>/<suite>.json
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV case table path; defaults to <out-dir>/<suite>.csv
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args)]
pub struct MultiplierArgs {
    /// Symbol CSV (rows k,k',re,im); a seeded decaying symbol when absent
    #[arg(long)]
    pub m: Option<PathBuf>,
    #[arg(long)]
    pub p: Option<String>,
    /// blasco-endpoints or grand-chain
    #[arg(long)]
    pub suite: Option<String>,
    /// Trig-polynomial degree
    #[arg(long = "N")]
    pub degree: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub pairs: Option<String>,
    #[arg(long = "T")]
    pub window: Option<String>,
    #[arg(long)]
    pub h: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

fn dispatch(cmd: &Cmd) -> ri_core::Result<bool> {
    match cmd {
        Cmd::Norm(args) => commands::run_norm(args).map(|_| false),
        Cmd::Rearrange(args) => commands::run_rearrange(args).map(|_| false),
        Cmd::Conv(args) => commands::run_conv(args).map(|_| false),
        Cmd::Kfun(args) => commands::run_kfun(args).map(|_| false),
        Cmd::Verify(args) => commands::run_verify(args),
        Cmd::Multiplier(args) => commands::run_multiplier(args),
        Cmd::List => {
            commands::run_list();
            Ok(false)
        }
    }
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprint!("{e}");
            return 3;
        }
    };
    if let Err(e) = config::init_threads() {
        eprintln!("error: {e}");
        return 3;
    }
    match dispatch(&cli.cmd) {
        Ok(false) => 0,
        Ok(true) => 2,
        Err(e) => {
            eprintln!("error: {e}");
            3
        }
    }
}

fn main() {
    std::process::exit(real_main());
}
