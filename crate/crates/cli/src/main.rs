use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod config;

#[derive(Parser)]
#[command(name = "rasa-verify")]
#[command(about = "Exact verification of Bernstein-polynomial inequalities via the convex order")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep one inequality family over a rational grid
    Verify {
        #[arg(value_enum)]
        family: Family,
        #[command(flatten)]
        opts: SweepArgs,
    },
    /// Decide the convex order between two distribution files
    Check {
        #[arg(value_enum)]
        relation: Relation,
        a: PathBuf,
        b: PathBuf,
        /// Random convex functions tried by the falsification oracle
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Whether the first vector majorizes the second
    Majorize { p: PathBuf, q: PathBuf },
    /// Elementary-symmetric criterion for ordering Bernoulli convolutions
    Sigma { p: PathBuf, q: PathBuf },
    /// Pinch chain from the first vector to the second
    Pinch { p: PathBuf, q: PathBuf },
    /// Replay the two golden counterexamples with exact values
    Examples,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Family {
    Rasa,
    Split,
    General,
    Chains,
    Hlp,
}

#[derive(Clone, Copy, ValueEnum)]
enum Relation {
    Cx,
}

#[derive(Clone, Copy, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Args)]
pub struct SweepArgs {
    /// Degree range, `a..b` or a single `n`
    #[arg(long = "n")]
    pub n: Option<String>,
    #[arg(long, default_value_t = 8)]
    pub grid_denominator: u32,
    /// Block counts for `verify general`, comma-separated
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    pub k: Vec<usize>,
    /// Fixed block degrees, comma-separated
    #[arg(long, value_delimiter = ',')]
    pub ns: Option<Vec<u32>>,
    /// Fixed block arguments as rationals, comma-separated
    #[arg(long, value_delimiter = ',')]
    pub xs: Option<Vec<String>>,
    /// battery | hinge:t | abs:t | square | path to a JSON function (or array)
    #[arg(long = "f", default_value = "battery")]
    pub f: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random vector pairs for `verify hlp`
    #[arg(long, default_value_t = 300)]
    pub trials: usize,
    /// Worker threads (default: all cores)
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify { family, opts } => commands::verify(family, &opts),
        Command::Check { relation: Relation::Cx, a, b, trials, seed } => commands::check_cx(&a, &b, trials, seed),
        Command::Majorize { p, q } => commands::majorize(&p, &q),
        Command::Sigma { p, q } => commands::sigma(&p, &q),
        Command::Pinch { p, q } => commands::pinch(&p, &q),
        Command::Examples => commands::examples(),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
