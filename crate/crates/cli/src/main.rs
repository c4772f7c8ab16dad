mod args;
mod render;

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;

use args::{CexpCmd, Cli, Command, KolmCmd, LcgArgs, PrngCmd, TestName, TestsCmd};
use randlab_core::cexp::{self, Design, SurrogateFit, TrialTable};
use randlab_core::{io as rio, kolmolab, prng, randtests, Error};
use render::Rendered;

enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(e) if e.is_resource_bound() => 4,
            Failure::Core(e) if e.is_precondition() => 3,
            Failure::Core(_) => 2,
            Failure::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => e.fmt(f),
            Failure::Io(s) => f.write_str(s),
        }
    }
}

type Outcome = Result<Rendered, Failure>;

#[derive(Serialize)]
struct ResolvedConfig<'a> {
    subcommand: &'static str,
    parameters: serde_json::Value,
    seed: Option<u64>,
    format: args::Format,
    output: Option<&'a Path>,
    jobs: Option<usize>,
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Io(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("reading {}: {e}", path.display())))
}

fn lcg_params(lcg: &LcgArgs) -> Result<prng::LcgParams, Error> {
    prng::LcgParams::new(lcg.a, lcg.b, lcg.m, lcg.r0.unwrap_or(0))
}

fn run_prng(cmd: &PrngCmd) -> Outcome {
    Ok(match cmd {
        PrngCmd::Gen {
            lcg,
            count,
            normalize,
        } => {
            let p = lcg_params(lcg)?;
            let xs = prng::generate(&p, *count)?;
            if *normalize {
                let u = prng::normalize(&xs, p.m())?;
                let csv = rio::reals_to_csv(&u);
                Rendered::new(&u).with_csv(csv)
            } else {
                let csv = rio::integers_to_csv(&xs);
                Rendered::new(&xs).with_csv(csv)
            }
        }
        PrngCmd::Period { lcg } => Rendered::new(&prng::find_period(&lcg_params(lcg)?)),
        PrngCmd::Check { a, b, m } => {
            let p = prng::LcgParams::new(*a, *b, *m, 0)?;
            Rendered::new(&prng::check_full_period_conditions(&p))
        }
        PrngCmd::Lfsr {
            width,
            taps,
            fill,
            count,
        } => {
            let p = prng::LfsrParams::new(*width, taps, *fill)?;
            let bits = prng::lfsr_generate(&p, *count)?;
            Rendered::new(&bits)
        }
    })
}

fn load_sequence(input: &args::InputArgs) -> Result<randtests::SampleSeq, Failure> {
    let text = read_text(&input.input)?;
    let values = match input.modulus {
        Some(m) => rio::parse_residues(&text, m)?,
        None => rio::parse_sequence(&text)?,
    };
    Ok(randtests::SampleSeq::new(values)?)
}

fn run_tests(cmd: &TestsCmd) -> Outcome {
    Ok(match cmd {
        TestsCmd::Run {
            test,
            input,
            d,
            alpha,
            beta,
            t,
        } => {
            let seq = load_sequence(input)?;
            let report = match test {
                TestName::Frequency => randtests::frequency_test(&seq, d.unwrap_or(16))?,
                TestName::Serial => randtests::serial_test(&seq, d.unwrap_or(4))?,
                TestName::Gap => randtests::gap_test(&seq, *alpha, *beta, *t)?,
                TestName::Poker => randtests::poker_test(&seq, d.unwrap_or(10))?,
                TestName::Runs => randtests::runs_test(&seq)?,
            };
            let csv = rio::reports_to_csv(std::slice::from_ref(&report));
            Rendered::new(&report).with_csv(csv)
        }
        TestsCmd::Battery { input } => {
            let report = randtests::battery(&load_sequence(input)?)?;
            let csv = rio::reports_to_csv(&report.reports);
            Rendered::new(&report).with_csv(csv)
        }
    })
}

fn run_kolm(cmd: &KolmCmd) -> Outcome {
    Ok(match cmd {
        KolmCmd::Run { program, fuel } => Rendered::new(&kolmolab::vm_run(program, *fuel)?),
        KolmCmd::Dovetail { max_len, max_steps } => {
            Rendered::new(&kolmolab::dovetail(*max_len, *max_steps)?)
        }
        KolmCmd::K {
            target,
            max_len,
            max_steps,
        } => Rendered::new(&kolmolab::k_upper(target, *max_len, *max_steps)?),
        KolmCmd::Census { n, max_steps } => Rendered::new(&kolmolab::census(*n, *max_steps)?),
        KolmCmd::Omega { max_len, max_steps } => {
            Rendered::new(&kolmolab::omega_lower(*max_len, *max_steps)?)
        }
        KolmCmd::Demo { pattern, doublings } => {
            Rendered::new(&kolmolab::compress_demo(pattern, *doublings)?)
        }
    })
}

fn load_table(path: &Path) -> Result<TrialTable, Failure> {
    let text = read_text(path)?;
    if text.trim_start().starts_with('{') {
        serde_json::from_str(&text).map_err(|e| Failure::Core(Error::Parse(e.to_string())))
    } else {
        Ok(TrialTable::read_csv(text.as_bytes())?)
    }
}

fn run_cexp(cmd: &CexpCmd, seed: u64) -> Outcome {
    Ok(match cmd {
        CexpCmd::Run {
            algorithm,
            points,
            reps,
            timed,
        } => {
            let design = Design::new(points.clone(), *reps, seed)?;
            let table = cexp::run_experiment(*algorithm, &design, *timed)?;
            let csv = table.to_csv_string();
            Rendered::new(&table).with_csv(csv)
        }
        CexpCmd::Classify {
            input,
            response,
            epsilon,
        } => Rendered::new(&cexp::classify(&load_table(input)?, *response, *epsilon)?),
        CexpCmd::Fit {
            input,
            response,
            basis,
        } => Rendered::new(&cexp::fit_surrogate(&load_table(input)?, *response, basis)?),
        CexpCmd::Predict { fit, n } => {
            let fit: SurrogateFit = serde_json::from_str(&read_text(fit)?)
                .map_err(|e| Failure::Core(Error::Parse(e.to_string())))?;
            fit.validate()?;
            Rendered::new(&cexp::predict(&fit, *n)?)
        }
    })
}

fn dispatch(command: &Command, seed: u64) -> Outcome {
    match command {
        Command::Prng(c) => run_prng(c),
        Command::Tests(c) => run_tests(c),
        Command::Kolm(c) => run_kolm(c),
        Command::Cexp(c) => run_cexp(c, seed),
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => {
            fs::write(p, text).map_err(|e| Failure::Io(format!("writing {}: {e}", p.display())))
        }
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("writing stdout: {e}"))),
    }
}

/// The arguments of the leaf subcommand, without the enum nesting.
fn leaf_parameters(command: &Command) -> serde_json::Value {
    let mut v = serde_json::to_value(command).expect("arguments serialize");
    for _ in 0..2 {
        v = match v {
            serde_json::Value::Object(map) if map.len() == 1 => map.into_iter().next().unwrap().1,
            other => other,
        };
    }
    v
}

fn main() -> ExitCode {
    let mut cli = Cli::parse();

    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .expect("global pool is configured once");
    }

    let seed = if cli.command.uses_seed() {
        Some(cli.seed.unwrap_or_else(rand::random))
    } else {
        cli.seed
    };
    if let Some(s) = seed {
        cli.command.resolve(s);
    }
    let config = ResolvedConfig {
        subcommand: cli.command.path(),
        parameters: leaf_parameters(&cli.command),
        seed,
        format: cli.format,
        output: cli.output.as_deref(),
        jobs: cli.jobs,
    };
    eprintln!(
        "{}",
        serde_json::to_string(&config).expect("config serializes")
    );

    let result = dispatch(&cli.command, seed.unwrap_or(0))
        .and_then(|r| write_output(cli.output.as_deref(), &r.into_string(cli.format)));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
