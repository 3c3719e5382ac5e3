mod commands;
mod fraction;
mod output;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hspsim_core::bounds::BoundOptions;
use hspsim_core::repr::FrameKind;
use hspsim_core::Error;

use commands::{BoundInput, SimulateInput, VerifyInput};
use fraction::Fraction;
use output::{emit, header, render, Format, Report};

const GROUP_HELP: &str = "Group spec: sN | symmetric:N, wreath:N (S_N wr S_2), dN | dihedral:N (order 2N), \
zN | cyclic:N, psl2:Q, sl2:Q, power:<spec>^K";

#[derive(Parser)]
#[command(name = "hspsim", version, about = "Coset-state Fourier sampling: exact simulation, bounds and checks")]
#[command(after_help = GROUP_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// worker threads (default: all cores)
    #[arg(long, env = "HSPSIM_THREADS", global = true)]
    threads: Option<usize>,
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Lower bound on the entanglement needed for a group family
    Bound(BoundCmd),
    /// Exact total-variation distances for random k-register measurements
    Simulate(SimulateCmd),
    /// Run named verification suites
    Verify(VerifyCmd),
    /// Export a character table
    Chartable(ChartableCmd),
}

#[derive(Args)]
struct BoundCmd {
    #[command(flatten)]
    common: Common,
    /// wreath | psl2 | gl | power
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// wreath cutoff exponent, eps = n^(-alpha n)
    #[arg(long, default_value = "1/4")]
    alpha: Fraction,
    /// base group for --family power
    #[arg(long)]
    group: Option<String>,
    /// hidden involution (default: a canonical one)
    #[arg(long)]
    h: Option<String>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
    #[arg(long, default_value_t = 10)]
    k_max: u64,
    /// number of coset states in the corollary
    #[arg(long, default_value_t = 1)]
    t: u64,
    /// total-variation threshold
    #[arg(long, default_value = "1/3")]
    threshold: Fraction,
}

#[derive(Args)]
struct SimulateCmd {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "wreath:3")]
    group: String,
    #[arg(long)]
    h: Option<String>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// number of random frame seeds, starting at --seed
    #[arg(long, default_value_t = 1)]
    frames: usize,
    #[arg(long, default_value = "basis")]
    frame_kind: FrameKind,
    #[arg(long, default_value = "1/5")]
    epsilon: Fraction,
    /// export the outcome distribution (first seed) as CSV: `trivial` or a conjugate index
    #[arg(long)]
    distribution: Option<String>,
}

#[derive(Args)]
struct VerifyCmd {
    #[command(flatten)]
    common: Common,
    /// repr | facts | lemmas | tables | transfer | gallagher | trace-norm | all
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value = "s3")]
    group: String,
    #[arg(long)]
    h: Option<String>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// largest register count for the trace-norm suite
    #[arg(long, default_value_t = 2)]
    t: usize,
    #[arg(long, default_value_t = 1)]
    frames: usize,
    /// random vectors for the facts suite
    #[arg(long, default_value_t = 20)]
    vectors: usize,
    #[arg(long, default_value = "basis")]
    frame_kind: FrameKind,
    #[arg(long, default_value = "1/5")]
    epsilon: Fraction,
}

#[derive(Args)]
struct ChartableCmd {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    group: String,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::OutOfRange(_) | Error::InvalidElement(_) | Error::NotSubgroup(_) => 64,
        Error::ResourceCap(_) | Error::OrderOverflow(_) => 69,
        _ => 70,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    let (common, default_format) = match &cli.command {
        Command::Bound(c) => (&c.common, Format::Json),
        Command::Simulate(c) => (&c.common, Format::Json),
        Command::Verify(c) => (&c.common, Format::Json),
        Command::Chartable(c) => (&c.common, Format::Csv),
    };
    if let Some(n) = common.threads {
        if n == 0 {
            return Err(Error::OutOfRange("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::ResourceCap(format!("thread pool: {e}")))?;
    }
    let format = common.format.unwrap_or(default_format);
    let seed = common.seed;
    let (report, spec): (Report, String) = match &cli.command {
        Command::Bound(c) => {
            if c.threshold.num <= 0 {
                return Err(Error::OutOfRange("--threshold must be positive".into()));
            }
            let input = BoundInput {
                family: c.family.clone(),
                n: c.n,
                q: c.q,
                p: c.p,
                m: c.m,
                alpha: c.alpha,
                group: c.group.clone(),
                h: c.h.clone(),
                c: c.c,
                kappa: c.kappa,
                options: BoundOptions { threshold: c.threshold.value(), t: c.t, k_max: c.k_max },
            };
            commands::bound(&input)?
        }
        Command::Simulate(c) => {
            let input = SimulateInput {
                group: c.group.clone(),
                h: c.h.clone(),
                k: c.k,
                frames: c.frames,
                frame_kind: c.frame_kind,
                seed,
                epsilon: c.epsilon,
                distribution: c.distribution.clone(),
            };
            (commands::simulate(&input)?, c.group.clone())
        }
        Command::Verify(c) => {
            let input = VerifyInput {
                suite: c.suite.clone(),
                group: c.group.clone(),
                h: c.h.clone(),
                k: c.k,
                t: c.t,
                frames: c.frames,
                vectors: c.vectors,
                frame_kind: c.frame_kind,
                seed,
                epsilon: c.epsilon,
            };
            (commands::verify(&input)?, c.group.clone())
        }
        Command::Chartable(c) => (commands::chartable(&c.group)?, c.group.clone()),
    };
    let text = render(&report, header(seed, &spec), format)?;
    emit(&text, common.out.as_deref())?;
    Ok(report.exit)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
