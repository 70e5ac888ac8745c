mod commands;
mod experiments;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "latinlab", version, about = "Latin square substructure workbench")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Clone)]
pub struct Global {
    /// Master seed.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file or directory, depending on the verb.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for parallel experiments; results do not depend on it.
    #[arg(long, global = true, env = "LATINLAB_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Verb {
    /// Substructure counts of squares, rectangles or partial squares.
    #[command(subcommand)]
    Count(commands::CountCmd),
    /// Random Latin squares and rectangles.
    #[command(subcommand)]
    Sample(commands::SampleCmd),
    /// Triangle removal process.
    #[command(subcommand)]
    Process(commands::ProcessCmd),
    /// Bounds on the minimum size of a partial square with N intercalates.
    Phi(commands::PhiArgs),
    /// Fractional triangle decomposition booster.
    Boost(commands::BoostArgs),
    /// Absorber constructions.
    #[command(subcommand)]
    Absorb(commands::AbsorbCmd),
    /// Seeded experiments with CSV data and a JSON summary.
    #[command(subcommand)]
    Experiment(experiments::ExperimentCmd),
    /// PASS/FAIL table over the JSON summaries in a directory.
    Report { dir: PathBuf },
}

/// What went wrong, and which exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, unknown ids, unreadable or malformed inputs: exit 2.
    Usage(String),
    /// The computation itself failed: exit 1.
    Run(String),
}

impl From<latinlab::Error> for Failure {
    fn from(e: latinlab::Error) -> Self {
        use latinlab::Error::*;
        match e {
            SearchFailed(_) | Diverged(_) | RetryBudgetExhausted(_) | Incomplete(_) => Failure::Run(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// `Ok(true)` when every check passed.
pub type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let g = &cli.global;
    let result = match cli.verb {
        Verb::Count(c) => commands::count(c, g),
        Verb::Sample(c) => commands::sample(c, g),
        Verb::Process(c) => commands::process(c, g),
        Verb::Phi(a) => commands::phi(a, g),
        Verb::Boost(a) => commands::boost(a, g),
        Verb::Absorb(c) => commands::absorb(c, g),
        Verb::Experiment(c) => experiments::command(c, g),
        Verb::Report { dir } => report::report(&dir),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Run(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
