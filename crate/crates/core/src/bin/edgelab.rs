use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use edgelab::experiment::{run, RunOutput};
use edgelab::report::ExperimentConfig;
use edgelab::Error;

/// Edge counts of random vertex subsets: sampling, exact enumeration and
/// limit-theorem diagnostics.
#[derive(Parser, Debug)]
#[command(name = "edgelab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Generate G(n,M) or G(n,p) and write it as an edge list.
    Gen,
    /// Degree statistics of a graph.
    Stats,
    /// Sampled distribution of e(S) as z,count CSV.
    Sample,
    /// Exact distribution of e(S) by enumeration.
    Exact,
    /// Kolmogorov and interval distances to the normal model.
    Clt,
    /// Pointwise deviation from the normal density and smoothing defect.
    Llt,
    /// Exchangeable-pair identities and error terms.
    Stein,
    /// Smoothing schedule, and window-vs-binomial deviations given k.
    Smooth,
    /// Metric over a grid of n with a log-log slope fit.
    Sweep,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Gen => "gen",
            Command::Stats => "stats",
            Command::Sample => "sample",
            Command::Exact => "exact",
            Command::Clt => "clt",
            Command::Llt => "llt",
            Command::Stein => "stein",
            Command::Smooth => "smooth",
            Command::Sweep => "sweep",
        }
    }
}

#[derive(Args, Debug)]
struct Opts {
    /// Input graph file (edge list); otherwise generated from n, M/p, seed.
    #[arg(long, global = true)]
    graph: Option<String>,
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Subset size (default n/2).
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Edge count of G(n,M) (default floor(N/2)).
    #[arg(long = "M", global = true)]
    m: Option<u64>,
    /// Edge probability of G(n,p).
    #[arg(long, global = true)]
    p: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, global = true, env = "EDGELAB_WORKERS", default_value_t = 1)]
    workers: usize,
    #[arg(long, global = true, default_value_t = 1.0 / 14.0)]
    beta: f64,
    #[arg(long, global = true, default_value_t = 0.05)]
    eps: f64,
    /// Half-width of the pointwise window in standard deviations.
    #[arg(long, global = true, default_value_t = 2.0)]
    window: f64,
    /// Maximum number of subsets to enumerate.
    #[arg(long, global = true, default_value_t = edgelab::exact::DEFAULT_BUDGET)]
    budget: u64,
    /// Dense-band margin for parameter warnings.
    #[arg(long, global = true, default_value_t = 0.1)]
    delta: f64,
    /// Enumerate all subsets instead of sampling.
    #[arg(long, global = true)]
    exact: bool,
    /// Outer subsets for the Stein estimates.
    #[arg(long, global = true, default_value_t = 200)]
    outer: u64,
    #[arg(long, global = true)]
    t: Option<usize>,
    #[arg(long, global = true)]
    r: Option<u64>,
    /// Constant in the C·r/n interval bound.
    #[arg(long, global = true, default_value_t = 4.0)]
    c: f64,
    /// Comma-separated n values for sweep.
    #[arg(long, global = true, value_delimiter = ',')]
    grid: Vec<usize>,
    /// Replicates per grid point for sweep.
    #[arg(long, global = true, default_value_t = 5)]
    seeds: u32,
    /// Sweep metric: ks or mean_abs_dev.
    #[arg(long, global = true, default_value = "ks")]
    metric: String,
    /// Directory for records and CSV artifacts.
    #[arg(long, global = true, env = "EDGELAB_OUT_DIR")]
    out_dir: Option<String>,
    /// Destination of the primary output (graph or histogram).
    #[arg(long, short, global = true)]
    output: Option<String>,
}

fn config(cli: Cli) -> ExperimentConfig {
    let o = cli.opts;
    ExperimentConfig {
        command: cli.command.name().into(),
        graph: o.graph,
        n: o.n,
        k: o.k,
        m: o.m,
        p: o.p,
        seed: o.seed,
        samples: o.samples,
        workers: o.workers,
        beta: o.beta,
        eps: o.eps,
        window: o.window,
        budget: o.budget,
        delta: o.delta,
        exact: o.exact,
        outer: o.outer,
        t: o.t,
        r: o.r,
        c: o.c,
        grid: o.grid,
        seeds: o.seeds,
        metric: o.metric,
        out_dir: o.out_dir,
        output: o.output,
    }
}

fn emit(cfg: &ExperimentConfig, out: &RunOutput) -> edgelab::Result<()> {
    let stdout = std::io::stdout();
    let mut stdout = stdout.lock();
    let primary = out.artifacts.iter().find(|a| a.primary);
    if let Some(dir) = &cfg.out_dir {
        let dir = Path::new(dir);
        std::fs::create_dir_all(dir)?;
        for a in &out.artifacts {
            std::fs::write(dir.join(&a.name), &a.bytes)?;
        }
        std::fs::write(dir.join(format!("{}.jsonl", cfg.command)), out.records_text())?;
    }
    match (primary, &cfg.output) {
        (Some(a), Some(path)) => std::fs::write(path, &a.bytes)?,
        (Some(a), None) if cfg.out_dir.is_none() => {
            stdout.write_all(&a.bytes)?;
            return Ok(stdout.flush()?);
        }
        _ => {}
    }
    stdout.write_all(out.records_text().as_bytes())?;
    Ok(stdout.flush()?)
}

fn main() -> ExitCode {
    let cfg = config(Cli::parse());
    let result = run(&cfg, |msg| eprintln!("edgelab: {msg}")).and_then(|out| {
        for w in &out.warnings {
            eprintln!("warning: {w}");
        }
        emit(&cfg, &out)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    e.exit_code() as u8
}
