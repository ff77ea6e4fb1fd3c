mod classify_cmd;
mod config;
mod export;
mod hurwitz_cmd;
mod verify;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{Format, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "monodromy", version, about = "Exact SL(2,Z) monodromy factorization toolkit")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Number of singular fibers.
    #[arg(long, global = true, default_value_t = 12)]
    n: i64,
    /// Entry bound for searches.
    #[arg(long = "box", global = true, default_value_t = 5)]
    bound: i64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Worker threads for parallel searches.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rotation-invariant factorizations, structured and brute force.
    Classify,
    /// Run verification suites.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
        /// Print reference-vs-computed discrepancies.
        #[arg(long)]
        log_discrepancies: bool,
    },
    /// Write figure data.
    Export {
        #[arg(value_enum)]
        what: ExportKind,
        /// Rotation case for slices: 3, 4 or 6.
        #[arg(long, default_value = "6")]
        case: String,
        /// Fixed coordinate such as `w2=0`; repeatable.
        #[arg(long)]
        fix: Vec<String>,
        /// Half-width of the slice grid.
        #[arg(long, default_value_t = 8)]
        range: i64,
    },
    /// Apply a braid word or named action to a factorization file.
    Hurwitz {
        #[arg(long)]
        input: std::path::PathBuf,
        #[arg(long, conflicts_with = "action")]
        moves: Option<String>,
        #[arg(long, value_enum)]
        action: Option<hurwitz_cmd::Action>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportKind {
    Conics,
    Slices,
    TracePolys,
}

/// Failure classes and their exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Verification(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Verification(m) | CliError::Io(m) => m,
        }
    }
}

impl From<monodromy::Error> for CliError {
    fn from(e: monodromy::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let g = cli.global;
    if let Some(jobs) = g.jobs {
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    if g.bound < 1 {
        return Err(CliError::Usage("--box must be at least 1".into()));
    }
    let name = match &cli.command {
        Command::Classify => "classify",
        Command::Verify { .. } => "verify",
        Command::Export { .. } => "export",
        Command::Hurwitz { .. } => "hurwitz",
    };
    let cfg = RunConfig {
        command: name.to_string(),
        n: g.n,
        bound: g.bound,
        format: g.format,
        out: g.out,
        jobs: g.jobs.unwrap_or_else(rayon::current_num_threads),
    };
    match cli.command {
        Command::Classify => classify_cmd::run(&cfg),
        Command::Verify {
            suite,
            log_discrepancies,
        } => verify::run(&cfg, suite, log_discrepancies),
        Command::Export {
            what,
            case,
            fix,
            range,
        } => export::run(&cfg, what, &case, &fix, range),
        Command::Hurwitz {
            input,
            moves,
            action,
        } => hurwitz_cmd::run(&cfg, &input, moves.as_deref(), action),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
