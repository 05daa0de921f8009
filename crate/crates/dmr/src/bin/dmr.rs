//! Thin command-line front end over the library's `cli` module.

use clap::{Args, Parser, Subcommand, ValueEnum};
use dmr::cli::{self, CmdError, GenKind};
use dmr::experiment::ExperimentConfig;
use dmr::sim::ProtocolKind;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dmr", about = "Distributed matching protocols in the coordinator model", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProtocolArg {
    Greedy,
    Twostep,
    Luby,
}

impl From<ProtocolArg> for ProtocolKind {
    fn from(p: ProtocolArg) -> Self {
        match p {
            ProtocolArg::Greedy => ProtocolKind::Greedy,
            ProtocolArg::Twostep => ProtocolKind::TwoStep,
            ProtocolArg::Luby => ProtocolKind::Luby,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKindArg {
    Hard,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file (hard distribution or uniform random).
    Gen(GenArgs),
    /// Run one protocol on an instance file.
    Run(RunArgs),
    /// Sweep a (n, k, alpha) grid of hard instances and emit CSV.
    Experiment(ExperimentArgs),
    /// Check the structural and statistical invariants of an instance file.
    Verify(VerifyArgs),
    /// Run the set-disjointness extraction demonstration.
    Reduce(ReduceArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Instance family.
    #[arg(value_enum)]
    kind: GenKindArg,
    /// Total vertex count (split evenly between the two sides).
    #[arg(long)]
    n: usize,
    /// Number of sites.
    #[arg(long)]
    k: usize,
    /// Approximation parameter in (0, 1/2]; required for hard instances.
    #[arg(long)]
    alpha: Option<f64>,
    /// Edge probability in [0, 1]; required for random instances.
    #[arg(long)]
    density: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    /// Which protocol to run.
    #[arg(value_enum)]
    protocol: ProtocolArg,
    /// Instance file.
    input: PathBuf,
    /// Approximation parameter; required for twostep.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the result row as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Dump the message transcript (one line per message).
    #[arg(long)]
    transcript: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_enum)]
    protocol: ProtocolArg,
    /// Comma-separated list of total vertex counts.
    #[arg(long, value_delimiter = ',', required = true)]
    ns: Vec<usize>,
    /// Comma-separated list of site counts.
    #[arg(long, value_delimiter = ',', required = true)]
    ks: Vec<usize>,
    /// Comma-separated list of alpha values.
    #[arg(long, value_delimiter = ',', required = true)]
    alphas: Vec<f64>,
    /// Runs per grid cell.
    #[arg(long, default_value_t = 1)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output path.
    #[arg(long)]
    out: PathBuf,
    /// Print per-cell aggregates and cost-model fits.
    #[arg(long)]
    summary: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance file.
    input: PathBuf,
}

#[derive(Args)]
struct ReduceArgs {
    /// Total vertex count of the embedded instances.
    #[arg(long)]
    n: usize,
    /// Number of sites (also the disjointness universe size).
    #[arg(long)]
    k: usize,
    /// Approximation parameter in (0, 1/2].
    #[arg(long)]
    alpha: f64,
    /// Number of reduction trials.
    #[arg(long)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version exits are not usage errors
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(cli::EXIT_USAGE as u8);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };

    let result: Result<(), CmdError> = match cli.command {
        Command::Gen(a) => {
            let kind = match a.kind {
                GenKindArg::Hard => GenKind::Hard,
                GenKindArg::Random => GenKind::Random,
            };
            cli::cmd_gen(kind, a.n, a.k, a.alpha, a.density, a.seed, &a.out)
        }
        Command::Run(a) => cli::cmd_run(
            a.protocol.into(),
            &a.input,
            a.alpha,
            a.seed,
            a.csv.as_deref(),
            a.transcript.as_deref(),
        )
        .map(|_| ()),
        Command::Experiment(a) => {
            let config = ExperimentConfig {
                protocol: a.protocol.into(),
                ns: a.ns,
                ks: a.ks,
                alphas: a.alphas,
                trials: a.trials,
                master_seed: a.seed,
            };
            cli::cmd_experiment(&config, &a.out, a.summary)
        }
        Command::Verify(a) => cli::cmd_verify(&a.input),
        Command::Reduce(a) => cli::cmd_reduce(a.n, a.k, a.alpha, a.trials, a.seed),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
