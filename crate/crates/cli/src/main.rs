//! `relmass`: reproducible experiments on the relative mass of continuous-time
//! random walks. Each command writes its data as CSV under `--out-dir` and
//! prints a short report. Exit status is 0 when the searched-for object was
//! found, 2 when the search completed without finding it, and 1 on error.

mod commands;
mod csv;
mod graphspec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use relmass::montecarlo::{DEFAULT_CHUNKS, DEFAULT_SEED};

use crate::graphspec::GraphSpec;

#[derive(Debug, Parser)]
#[command(name = "relmass", version, about = "Relative mass of continuous-time random walks")]
struct Cli {
    /// Directory for CSV output.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate C_d(t) for several dimensions (figure1.csv).
    Figure1(Figure1Args),
    /// Search for t1 < t2 with C_d(t1) > C_d(t2).
    Witness(WitnessArgs),
    /// The cube with two pyramids, where r_{u,v} rises above one (appendix_r.csv).
    Appendix(AppendixArgs),
    /// Compare exact lamplighter probabilities with their first-order forms (verify_claim.csv).
    VerifyClaim(VerifyClaimArgs),
    /// Monte Carlo estimates.
    Mc {
        #[command(subcommand)]
        which: McCommand,
    },
    /// Compare a weighted Cayley graph with its clique blowups (blowup.csv).
    Blowup(BlowupArgs),
    /// Scan r_{u,v} on a graph for decreases and values above one (scan.csv).
    Scan(ScanArgs),
    /// Print a graph as an edge list.
    Graph(GraphArgs),
}

#[derive(Debug, Args)]
struct Figure1Args {
    #[arg(long, value_delimiter = ',', default_value = "4,5,6,7")]
    dims: Vec<u32>,
    #[arg(long, default_value_t = 0.0)]
    start: f64,
    #[arg(long, default_value_t = 30.0)]
    end: f64,
    #[arg(long, default_value_t = 0.05)]
    step: f64,
}

#[derive(Debug, Args)]
struct WitnessArgs {
    #[arg(long)]
    d: u32,
    #[arg(long, default_value_t = 0.0)]
    start: f64,
    #[arg(long, default_value_t = 30.0)]
    end: f64,
    #[arg(long, default_value_t = 0.05)]
    step: f64,
    #[arg(long, default_value_t = relmass::hypercube::DEFAULT_WITNESS_MARGIN)]
    margin: f64,
}

#[derive(Debug, Args)]
struct AppendixArgs {
    /// Right end of the time grid (0, END].
    #[arg(long, default_value_t = relmass::lab::DEFAULT_SCAN_END)]
    end: f64,
    #[arg(long, default_value_t = relmass::lab::DEFAULT_SCAN_POINTS)]
    points: usize,
}

#[derive(Debug, Args)]
struct VerifyClaimArgs {
    #[arg(long, value_delimiter = ',', default_value = "2")]
    d: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.001")]
    epsilon: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,4")]
    t: Vec<f64>,
}

#[derive(Debug, Args)]
struct McOptions {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_CHUNKS)]
    chunks: u32,
}

#[derive(Debug, Subcommand)]
enum McCommand {
    /// Conditioned origin time C_d(t) (mc_c_d.csv).
    #[command(name = "c-d")]
    CD {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        t: f64,
        #[command(flatten)]
        opts: McOptions,
    },
    /// Resolve C_d(t1) > C_d(t2) by simulation (mc_theorem.csv). Without
    /// --t1/--t2 the pair comes from the witness search.
    Theorem {
        #[arg(long, default_value_t = 5)]
        d: u32,
        #[arg(long, default_value_t = relmass::lamplighter::DEFAULT_EPSILON)]
        epsilon: f64,
        #[arg(long, requires = "t2")]
        t1: Option<f64>,
        #[arg(long, requires = "t1")]
        t2: Option<f64>,
        #[command(flatten)]
        opts: McOptions,
    },
    /// Lamplighter p_{u,u}(t) or p_{u,v}(t) (mc_p_uv.csv).
    #[command(name = "p-uv")]
    PUv {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = relmass::lamplighter::DEFAULT_EPSILON)]
        epsilon: f64,
        #[arg(long)]
        t: f64,
        #[arg(long, value_enum, default_value_t = commands::Target::V)]
        target: commands::Target,
        #[command(flatten)]
        opts: McOptions,
    },
}

#[derive(Debug, Args)]
struct BlowupArgs {
    /// Order n of the cyclic group Z_n.
    #[arg(long, default_value_t = 6)]
    order: usize,
    /// Generators as ELEMENT:WEIGHT pairs.
    #[arg(long, value_delimiter = ',', default_value = "1:2,5:2,2:1,4:1")]
    gens: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    u: usize,
    #[arg(long, default_value_t = 1)]
    v: usize,
    #[arg(long, default_value_t = 0.0)]
    start: f64,
    #[arg(long, default_value_t = 5.0)]
    end: f64,
    #[arg(long, default_value_t = 0.05)]
    step: f64,
}

#[derive(Debug, Args)]
struct ScanArgs {
    /// hypercube:D, cycle:N, complete:N, pyramid-cube, lamplighter:D:EPS or file:PATH
    #[arg(long)]
    graph: GraphSpec,
    #[arg(long, default_value_t = 0)]
    u: usize,
    /// Target vertex; defaults to the graph's natural pair, or every v != u.
    #[arg(long)]
    v: Option<usize>,
    #[arg(long, default_value_t = relmass::lab::DEFAULT_SCAN_END)]
    end: f64,
    #[arg(long, default_value_t = relmass::lab::DEFAULT_SCAN_POINTS)]
    points: usize,
    #[arg(long, default_value_t = 1e-6)]
    margin: f64,
}

#[derive(Debug, Args)]
struct GraphArgs {
    #[arg(long)]
    graph: GraphSpec,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let args: Vec<String> = std::env::args().skip(1).collect();
    let ctx = commands::Context { out_dir: cli.out_dir, header: csv::invocation(&args) };
    match commands::run(&ctx, cli.command) {
        Ok(commands::Outcome::Found) => ExitCode::SUCCESS,
        Ok(commands::Outcome::NotFound) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
