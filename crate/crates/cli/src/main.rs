mod commands;
mod cyclo;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cycloperfect::{Error, RingId};

use output::{OutputArgs, Rendered};

/// Perfect and norm-perfect numbers in Z[i], Z[ω] and the cyclotomic integers.
#[derive(Parser)]
#[command(name = "cycloperfect", version, about)]
struct Cli {
    #[command(flatten)]
    output: OutputArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor an element into a unit and sector-canonical primes.
    Factor {
        #[arg(long)]
        ring: RingId,
        #[arg(allow_hyphen_values = true)]
        element: String,
    },
    /// Divisor sum of an element.
    Sigma {
        #[arg(long)]
        ring: RingId,
        #[arg(allow_hyphen_values = true)]
        element: String,
    },
    /// Deficient, norm-perfect or abundant; perfect when applicable.
    Classify {
        #[arg(long)]
        ring: RingId,
        #[arg(allow_hyphen_values = true)]
        element: String,
        /// Also decide primitivity of a norm-perfect element.
        #[arg(long)]
        primitive: bool,
        /// Largest divisor lattice the primitivity check will walk.
        #[arg(long, default_value_t = cycloperfect::divisor::DEFAULT_DIVISOR_BUDGET)]
        budget: u128,
    },
    /// Mersenne numbers π^k − 1 for prime exponents up to a bound.
    Mersenne {
        #[arg(long)]
        ring: RingId,
        #[arg(long)]
        max_k: u64,
        /// Comma-separated exponent residues, e.g. `±1,0` (mod 12 or mod 8).
        #[arg(long, allow_hyphen_values = true)]
        residue_filter: Option<String>,
        /// JSON-lines record cache.
        #[arg(long)]
        cache: Option<std::path::PathBuf>,
        /// Reuse records already in the cache.
        #[arg(long, requires = "cache")]
        resume: bool,
        /// Also list the cofactor witness for every composite exponent.
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Exhaustive scan of even sector elements up to a norm bound.
    SearchEven(commands::SearchArgs),
    /// Exhaustive scan of odd sector elements up to a norm bound.
    SearchOdd(commands::SearchArgs),
    /// Primes ψ with N(1 + ψ) equal to the minimal norm times N(ψ).
    FindNormperfectPrimes {
        #[arg(long)]
        ring: RingId,
        #[arg(long)]
        max_norm: u64,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Classify 2^{k−1}(2^k − 1) in Z[ω] for every prime 2 < k ≤ max-k.
    CheckRemark {
        #[arg(long, default_value_t = 61)]
        max_k: u64,
    },
    /// Arithmetic in Z[ζ_p].
    Cyclo(cyclo::CycloArgs),
    /// Run an invariant suite at its default bounds.
    Verify {
        /// core, lemmas, mersenne, search, cyclo or all.
        suite: String,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Domain(_) => 65,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Malformed(_) | Error::Json(_) => CliError::Usage(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

/// Printed result plus the exit status it implies.
pub struct Outcome {
    pub rendered: Rendered,
    pub code: u8,
}

impl From<Rendered> for Outcome {
    fn from(rendered: Rendered) -> Self {
        Outcome { rendered, code: 0 }
    }
}

/// Sizes the global rayon pool; later calls are ignored by rayon.
pub fn set_jobs(jobs: Option<usize>) -> Result<(), CliError> {
    if let Some(n) = jobs {
        if n == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Domain(e.to_string()))?;
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let progress = cli.output.progress;
    match &cli.command {
        Command::Factor { ring, element } => commands::factor(*ring, element).map(Into::into),
        Command::Sigma { ring, element } => commands::sigma(*ring, element).map(Into::into),
        Command::Classify {
            ring,
            element,
            primitive,
            budget,
        } => commands::classify(*ring, element, *primitive, *budget).map(Into::into),
        Command::Mersenne {
            ring,
            max_k,
            residue_filter,
            cache,
            resume,
            witness,
            jobs,
        } => {
            set_jobs(*jobs)?;
            commands::mersenne(commands::MersenneRequest {
                ring: *ring,
                max_k: *max_k,
                residue_filter: residue_filter.as_deref(),
                cache: cache.as_deref(),
                resume: *resume,
                witness: *witness,
                progress,
            })
            .map(Into::into)
        }
        Command::SearchEven(args) => commands::search(args, cycloperfect::search::Parity::Even, progress),
        Command::SearchOdd(args) => commands::search(args, cycloperfect::search::Parity::Odd, progress),
        Command::FindNormperfectPrimes { ring, max_norm, jobs } => {
            set_jobs(*jobs)?;
            commands::find_normperfect_primes(*ring, *max_norm).map(Into::into)
        }
        Command::CheckRemark { max_k } => commands::check_remark(*max_k),
        Command::Cyclo(args) => cyclo::run(args).map(Into::into),
        Command::Verify { suite } => commands::verify(suite),
    }
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
    let result = dispatch(&cli).and_then(|outcome| {
        outcome.rendered.emit(cli.output.format())?;
        Ok(outcome.code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
