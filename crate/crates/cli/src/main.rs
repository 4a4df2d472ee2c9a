//! `renyi`: Rényi entropies, divergences and their bounds from the command line.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "renyi", version, about = "Rényi entropies, divergences and bound checks")]
struct Cli {
    /// Print a structured JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rényi entropy of a distribution or a density matrix.
    #[command(subcommand)]
    Entropy(EntropyCommand),
    /// Entropy of type beta, with its chain form and the order-beta value it maps to.
    TypeBeta {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
    },
    /// Rényi relative entropy D_alpha(rho || sigma), in nats by default.
    Divergence {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = UnitsArg::Nats)]
        units: UnitsArg,
    },
    /// Rényi conditional entropy H_alpha(A|B), minimised over sigma_B.
    Conditional(Bipartite),
    /// Rényi mutual information I_alpha(A;B), minimised over sigma_B.
    MutualInfo(Bipartite),
    /// Evaluate one inequality on concrete inputs.
    Bounds(BoundsArgs),
    /// Run a randomized property suite.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Write a random density matrix, positive definite matrix or distribution.
    Gen(GenArgs),
}

#[derive(Debug, Subcommand)]
enum EntropyCommand {
    /// Classical Rényi entropy of order beta (bits by default).
    Classical {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, value_enum, default_value_t = UnitsArg::Bits)]
        units: UnitsArg,
    },
    /// Quantum Rényi entropy of order alpha (nats by default).
    Quantum {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = UnitsArg::Nats)]
        units: UnitsArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum UnitsArg {
    Bits,
    Nats,
}

impl From<UnitsArg> for renyi_core::Units {
    fn from(u: UnitsArg) -> Self {
        match u {
            UnitsArg::Bits => renyi_core::Units::Bits,
            UnitsArg::Nats => renyi_core::Units::Nats,
        }
    }
}

#[derive(Debug, Args)]
struct Bipartite {
    #[arg(long)]
    state: PathBuf,
    /// Subsystem split `dA,dB`; defaults to the `dims` field of the file.
    #[arg(long, value_parser = parse_dims)]
    dims: Option<(usize, usize)>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    /// Seed for the optimizer's random restarts.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Theorem {
    Lemma2,
    Lemma3,
    Lemma4,
    T1,
    #[value(name = "t2_2")]
    T2_2,
    T3,
    T4,
    T5,
    T6,
    Triangle,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(value_enum)]
    theorem: Theorem,
    /// First matrix (lemma2, lemma3, lemma4).
    #[arg(long)]
    a: Option<PathBuf>,
    /// Second matrix (lemma2, lemma3).
    #[arg(long)]
    b: Option<PathBuf>,
    /// Distribution (t1, t2_2).
    #[arg(long)]
    dist: Option<PathBuf>,
    /// Density matrix (t3, t4, t5, t6, triangle).
    #[arg(long)]
    state: Option<PathBuf>,
    /// Reference matrix (t4, triangle).
    #[arg(long)]
    sigma: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, value_parser = parse_dims)]
    dims: Option<(usize, usize)>,
    #[arg(long, value_enum, default_value_t = UnitsArg::Nats)]
    units: UnitsArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Density,
    Pd,
    Simplex,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    /// Matrix dimension, or distribution length for `simplex`.
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Rank of a generated density matrix.
    #[arg(long)]
    rank: Option<usize>,
    /// Condition-number cap of a generated positive definite matrix.
    #[arg(long, default_value_t = 100.0)]
    cap: f64,
    /// Forced zero entries of a generated distribution.
    #[arg(long, default_value_t = 0)]
    zeros: usize,
    /// Bipartite split recorded in a generated density matrix file.
    #[arg(long, value_parser = parse_dims)]
    dims: Option<(usize, usize)>,
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected dA,dB, got `{s}`"))?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad dimension `{t}`: {e}"));
    let (a, b) = (parse(a)?, parse(b)?);
    if a == 0 || b == 0 {
        return Err("dimensions must be positive".to_string());
    }
    Ok((a, b))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.render(cli.json));
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(if err.usage { 2 } else { 1 })
        }
    }
}
