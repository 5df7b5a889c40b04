//! `msgame` command line: simulate, solve, families, density, verify, replay.

mod commands;
mod game;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use game::{GameArgs, StrategyArgs};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(msgame::Error),
    Io(String),
    /// A `verify` check that ran and failed.
    CheckFailed,
}

impl From<msgame::Error> for CliError {
    fn from(e: msgame::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use msgame::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 1,
            CliError::CheckFailed => 1,
            CliError::Core(e) => match e {
                E::FamilyTooLarge { .. } | E::SizeLimit { .. } => 3,
                E::InvariantViolation(_) => 4,
                E::InvalidArgument(_)
                | E::DegenerateParameters(_)
                | E::Infeasible(_)
                | E::NoBunch(_) => 2,
                E::IllegalMove { .. } | E::InvalidState(_) => 4,
            },
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "msgame",
    version,
    about = "Multistage (1:b) Maker-Breaker games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Play repeated games and write traces plus a CSV summary.
    Simulate {
        #[command(flatten)]
        game: GameArgs,
        #[command(flatten)]
        strategies: StrategyArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        /// Directory for `traces/` and `summary.csv`; the summary goes to stdout without it.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        /// Run games on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Exact winner of one stage and exact tau.
    Solve {
        #[command(flatten)]
        game: GameArgs,
        /// Branch over every Breaker subset of size 1..=b instead of maximal claims.
        #[arg(long)]
        all_subsets: bool,
    },
    /// Emit a winning family as JSON, or per-size statistics.
    Families {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        stats: bool,
        /// H-game: list bunches of this many copies instead of copies of H.
        #[arg(long)]
        bunches: Option<usize>,
        /// Bunch slack; `p/q` or a decimal.
        #[arg(long, default_value = "3/4")]
        delta: String,
    },
    /// Densities m(H), m2(H) and the chosen subgraph K.
    Density {
        /// Graph JSON file or a name like K4, C5, P4, K4-e.
        #[arg(long = "graph-h")]
        graph_h: String,
    },
    /// Check a graph against a predicate or a sufficient condition.
    Verify {
        #[arg(long)]
        graph: String,
        #[arg(long, value_enum)]
        check: commands::Check,
        /// Expansion factor; defaults to ln ln n.
        #[arg(long)]
        exp_factor: Option<f64>,
        /// Set size bound; defaults to ceil(n / ln n).
        #[arg(long)]
        cut_size: Option<usize>,
        /// Connectivity constant for the pancyclicity conditions.
        #[arg(long, default_value_t = 600.0)]
        c: f64,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long = "graph-h")]
        graph_h: Option<String>,
    },
    /// Re-validate a trace file against the game recorded in it.
    Replay { trace: std::path::PathBuf },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate {
            game,
            strategies,
            seed,
            reps,
            out,
            sequential,
        } => commands::simulate(&game, &strategies, seed, reps, out.as_deref(), sequential),
        Command::Solve { game, all_subsets } => commands::solve(&game, all_subsets),
        Command::Families {
            game,
            stats,
            bunches,
            delta,
        } => commands::families(&game, stats, bunches, &delta),
        Command::Density { graph_h } => commands::density(&graph_h),
        Command::Verify {
            graph,
            check,
            exp_factor,
            cut_size,
            c,
            k,
            graph_h,
        } => commands::verify(&commands::VerifyArgs {
            graph,
            check,
            exp_factor,
            cut_size,
            c,
            k,
            graph_h,
        }),
        Command::Replay { trace } => commands::replay(&trace),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Config(m) => eprintln!("config error: {m}"),
                CliError::Core(c) => eprintln!("error: {c}"),
                CliError::Io(m) => eprintln!("io error: {m}"),
                CliError::CheckFailed => {}
            }
            ExitCode::from(e.exit_code())
        }
    }
}
