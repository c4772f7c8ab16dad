use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use randlab_core::cexp::{Algorithm, BasisFn, Response};
use randlab_core::kolmolab::{BitString, ToyProgram};

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "randlab",
    version,
    about = "Pseudo-random generators, randomness tests, toy Kolmogorov complexity and computer experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write results here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads for parallel sections. Never changes output bytes.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Seed for anything drawn at random. Chosen from entropy and echoed when absent.
    #[arg(long, global = true, env = "RANDLAB_SEED")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Linear congruential and shift-register generators.
    #[command(subcommand)]
    Prng(PrngCmd),
    /// Empirical randomness tests.
    #[command(subcommand)]
    Tests(TestsCmd),
    /// TOYVM-1 programs, halting catalogs and complexity bounds.
    #[command(subcommand)]
    Kolm(KolmCmd),
    /// Instrumented computer experiments.
    #[command(subcommand)]
    Cexp(CexpCmd),
}

#[derive(Debug, Args, Serialize)]
pub struct LcgArgs {
    #[arg(long)]
    pub a: u64,
    #[arg(long)]
    pub b: u64,
    #[arg(long)]
    pub m: u64,
    /// Initial state. Defaults to the seed reduced mod m.
    #[arg(long)]
    pub r0: Option<u64>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PrngCmd {
    /// Emit the first `count` iterates r1, r2, ...
    Gen {
        #[command(flatten)]
        #[serde(flatten)]
        lcg: LcgArgs,
        #[arg(long)]
        count: usize,
        /// Emit r/m in [0, 1) instead of residues.
        #[arg(long)]
        normalize: bool,
    },
    /// Measure period and tail by cycle detection.
    Period {
        #[command(flatten)]
        #[serde(flatten)]
        lcg: LcgArgs,
    },
    /// Evaluate the full-period conditions.
    Check {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        m: u64,
    },
    /// Fibonacci LFSR output bits.
    Lfsr {
        #[arg(long, default_value_t = 31)]
        width: u32,
        #[arg(long, value_delimiter = ',', default_values_t = [28, 31])]
        taps: Vec<u32>,
        /// Nonzero initial register contents.
        #[arg(long, default_value_t = 1)]
        fill: u64,
        #[arg(long)]
        count: usize,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct InputArgs {
    /// Sequence file: JSON array or one value per line. `-` reads stdin.
    #[arg(long)]
    pub input: PathBuf,
    /// Treat the input as residues mod M and normalize them.
    #[arg(long)]
    pub modulus: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TestName {
    Frequency,
    Serial,
    Gap,
    Poker,
    Runs,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TestsCmd {
    /// Run a single test.
    Run {
        #[arg(long, value_enum)]
        test: TestName,
        #[command(flatten)]
        #[serde(flatten)]
        input: InputArgs,
        /// Categories (frequency, serial) or digit base (poker).
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        /// Longest gap class before lumping.
        #[arg(long, default_value_t = 7)]
        t: usize,
    },
    /// Run the whole battery.
    Battery {
        #[command(flatten)]
        #[serde(flatten)]
        input: InputArgs,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KolmCmd {
    /// Execute one program.
    Run {
        #[arg(long)]
        program: ToyProgram,
        #[arg(long)]
        fuel: u64,
    },
    /// Catalog every valid halting program up to a length.
    Dovetail {
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        max_steps: u64,
    },
    /// Bounded complexity of a target string.
    K {
        #[arg(long)]
        target: BitString,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        max_steps: u64,
    },
    /// Count length-n strings with short programs.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        max_steps: u64,
    },
    /// Exact lower bound on the halting probability.
    Omega {
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        max_steps: u64,
    },
    /// Repeat-program compression of a pattern.
    Demo {
        #[arg(long)]
        pattern: BitString,
        #[arg(long)]
        doublings: usize,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CexpCmd {
    /// Run a seeded design and emit the trial table.
    Run {
        #[arg(long)]
        algorithm: Algorithm,
        #[arg(long, value_delimiter = ',', required = true)]
        points: Vec<u64>,
        #[arg(long)]
        reps: u32,
        /// Record wall time per trial.
        #[arg(long)]
        timed: bool,
    },
    /// Label a response deterministic or noisy.
    Classify {
        /// Trial table as CSV or JSON.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        response: Response,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Least-squares surrogate over a basis.
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        response: Response,
        #[arg(long, value_delimiter = ',', default_values_t = [BasisFn::One, BasisFn::N, BasisFn::NSquared])]
        basis: Vec<BasisFn>,
    },
    /// Evaluate a saved fit at n.
    Predict {
        /// Fit JSON as written by `cexp fit`.
        #[arg(long)]
        fit: PathBuf,
        #[arg(long)]
        n: u64,
    },
}

impl Command {
    /// Whether the command draws on the global seed.
    pub fn uses_seed(&self) -> bool {
        match self {
            Command::Prng(PrngCmd::Gen { lcg, .. } | PrngCmd::Period { lcg }) => lcg.r0.is_none(),
            Command::Cexp(CexpCmd::Run { .. }) => true,
            _ => false,
        }
    }

    /// Fills seed-derived defaults so the echoed config is fully resolved.
    pub fn resolve(&mut self, seed: u64) {
        if let Command::Prng(PrngCmd::Gen { lcg, .. } | PrngCmd::Period { lcg }) = self {
            if lcg.r0.is_none() && lcg.m > 0 {
                lcg.r0 = Some(seed % lcg.m);
            }
        }
    }

    pub fn path(&self) -> &'static str {
        match self {
            Command::Prng(c) => match c {
                PrngCmd::Gen { .. } => "prng gen",
                PrngCmd::Period { .. } => "prng period",
                PrngCmd::Check { .. } => "prng check",
                PrngCmd::Lfsr { .. } => "prng lfsr",
            },
            Command::Tests(c) => match c {
                TestsCmd::Run { .. } => "tests run",
                TestsCmd::Battery { .. } => "tests battery",
            },
            Command::Kolm(c) => match c {
                KolmCmd::Run { .. } => "kolm run",
                KolmCmd::Dovetail { .. } => "kolm dovetail",
                KolmCmd::K { .. } => "kolm k",
                KolmCmd::Census { .. } => "kolm census",
                KolmCmd::Omega { .. } => "kolm omega",
                KolmCmd::Demo { .. } => "kolm demo",
            },
            Command::Cexp(c) => match c {
                CexpCmd::Run { .. } => "cexp run",
                CexpCmd::Classify { .. } => "cexp classify",
                CexpCmd::Fit { .. } => "cexp fit",
                CexpCmd::Predict { .. } => "cexp predict",
            },
        }
    }
}
