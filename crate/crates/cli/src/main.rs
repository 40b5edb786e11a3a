//! `hyperspectra` command-line front end.
//!
//! Exit status: 0 on success, 2 on usage errors, 1 on runtime errors.

mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;

#[derive(Debug, Parser)]
#[command(name = "hyperspectra", version, about = "Random uniform hypergraphs and first-order zero-one laws")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Base seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json, alias = "emit")]
    pub format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Cap overrides: an integer (enumeration cap) or `key=value,...`.
    /// Applied after HYPERSPECTRA_BUDGET.
    #[arg(long, global = true)]
    pub budget: Option<String>,
    /// Maximum worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw one hypergraph from G^s(n, p).
    Sample(commands::SampleArgs),
    /// Density and maximum density of a hypergraph.
    Density(commands::InArgs),
    /// Whether a hypergraph is (strictly) balanced.
    Balance(commands::InArgs),
    /// Classify a rooted pair as safe, rigid, neutral or none.
    ClassifyPair(commands::ClassifyArgs),
    /// Extensions of a rooted pair inside a host.
    Extend(commands::ExtendArgs),
    /// Decompose a hypergraph into cyclic m-extensions.
    Decompose(commands::DecomposeArgs),
    /// Solve the k-round Ehrenfeucht game on two boards.
    Game(commands::GameArgs),
    /// Evaluate a first-order formula on a hypergraph.
    Eval(commands::EvalArgs),
    /// Exact bound calculators and witness constructions.
    #[command(after_long_help = commands::BOUNDS_HELP)]
    Bounds(commands::BoundsArgs),
    /// Monte Carlo probability estimates over an alpha or p grid.
    Sweep(commands::SweepArgs),
    /// Copy-count distributions against their Poisson limit.
    Poisson(commands::PoissonArgs),
    /// Number of copies of a pattern in a host.
    CountCopies(commands::CountArgs),
    /// Copies of H not covered by any copy of G.
    Unextendable(commands::UnextendableArgs),
    /// Print every JSON and CSV schema.
    SchemaDump,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.global.jobs {
        // only fails if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let report = match commands::run(&cli) {
        Ok(r) => r,
        Err(commands::Failure::Usage(e)) => e.exit(),
        Err(commands::Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let written = match &cli.global.out {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            output::render(report, cli.global.format, &mut w)?;
            w.flush()
        }),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            output::render(report, cli.global.format, &mut lock)
        }
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: writing output: {e}");
            ExitCode::from(1)
        }
    }
}
