mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::UsageError;

#[derive(Parser, Debug)]
#[command(name = "recliff", version, about = "Near-Clifford circuit simulation by recompilation and sparse sampling")]
struct Cli {
    /// Report format on standard output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Kv)]
    format: Format,
    /// Worker threads for sampling (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Kv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Default)]
pub enum GroupingArg {
    #[default]
    PerGate,
    Xyz,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rewrite a circuit as rotations on a stabilizer state.
    Recompile {
        circuit: PathBuf,
        /// Write the canonical form here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One-norm of the Clifford decomposition of a circuit.
    Extent {
        circuit: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        grouping: GroupingArg,
    },
    /// Estimate ⟨x|ψ⟩.
    Amplitude(EstimateArgs),
    /// Estimate |⟨x|ψ⟩|².
    Probability(EstimateArgs),
    /// Draw k = ⌈(2‖a‖₁/ε)²⌉ samples and write them out.
    Sparsify {
        circuit: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        adaptive: bool,
        #[arg(long, value_enum, default_value_t)]
        grouping: GroupingArg,
    },
    /// Mean and spread of adaptive trajectory norms.
    DeltaStats {
        circuit: PathBuf,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t)]
        grouping: GroupingArg,
    },
    /// Exact amplitude and probability from a dense simulation.
    Exact {
        circuit: PathBuf,
        #[arg(long)]
        x: String,
    },
    /// CSV of the single-rotation and three-rotation one-norm curves.
    NormCurves {
        #[arg(long, default_value_t = 64)]
        points: usize,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    pub circuit: PathBuf,
    /// Output bit string, qubit 0 first.
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Merge collinear branches while sampling.
    #[arg(long)]
    pub adaptive: bool,
    /// Size k from mean + 3·std of adaptive trajectory norms.
    #[arg(long, requires = "adaptive")]
    pub heuristic_k: bool,
    #[arg(long, value_enum, default_value_t)]
    pub grouping: GroupingArg,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let threads = cli
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if threads == 0 {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(1);
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return ExitCode::from(2);
        }
    };
    let start = Instant::now();
    let result = pool.install(|| commands::run(&cli.command));
    match result {
        Ok(Some(report)) => {
            let text = match cli.format {
                Format::Kv => report.to_key_value(),
                Format::Json => report.to_json(),
            };
            print!("{text}");
            eprintln!("wall_time_s={:.6} threads={threads}", start.elapsed().as_secs_f64());
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
