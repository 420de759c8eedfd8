mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Cover-boundedness games on multicovered spaces: solve, play, check and verify.
///
/// Reports are JSON on stdout. Exit status: 0 II wins or verified, 1 I wins
/// or refuted, 2 unknown, 3 invalid input or other error.
#[derive(Parser, Debug)]
#[command(name = "mcover", version)]
pub struct Cli {
    /// Emit JSON (always on; accepted for scripts).
    #[arg(long, global = true)]
    pub json: bool,
    /// Memo entries the exact solver may create before giving up.
    #[arg(long, global = true)]
    pub limit_states: Option<usize>,
    /// Half-width of lattice probe boxes, overriding the file.
    #[arg(long, global = true, value_name = "M")]
    pub probe_box: Option<u64>,
    /// Seed for randomized play.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GameArgs {
    /// Number of rounds; overrides the file's game.
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Members II may name per round; overrides the file's game.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Win condition; overrides the file's game.
    #[arg(long, value_enum)]
    pub win: Option<Win>,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub f: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Win {
    Cover,
    Omega,
    Gamma,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Principle {
    /// II wins the cover game.
    Menger,
    /// II wins the γ-game.
    Hurewicz,
    /// II wins the ω-game.
    Scheepers,
    /// Every sequence of covers admits a winning selection.
    Selection,
    /// Every cover bounds the probe within the budget.
    TotallyBounded,
    /// Every pair of covers has an upper bound.
    Centered,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combinator {
    Union,
    GammaUpgrade,
    Product,
    Pullback,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve a finite game exactly.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        game: GameArgs,
        /// Write II's winning policy table here.
        #[arg(long)]
        policy_out: Option<PathBuf>,
    },
    /// Play one game and print each round as a JSON line.
    Play {
        file: PathBuf,
        #[command(flatten)]
        game: GameArgs,
        /// I's covers, comma separated. Defaults to the solver's I-policy, or random covers with --random.
        #[arg(long, value_delimiter = ',')]
        covers: Option<Vec<usize>>,
        /// I picks covers uniformly at random from --seed.
        #[arg(long)]
        random: bool,
        /// II's policy table (as written by `solve --policy-out`). Defaults to the solver's II-policy, else greedy.
        #[arg(long)]
        policy: Option<PathBuf>,
    },
    /// Decide a selection principle on a space.
    CheckPrinciple {
        file: PathBuf,
        #[arg(long, value_enum)]
        principle: Principle,
        #[command(flatten)]
        game: GameArgs,
        /// Certificate size bound for coarseness searches.
        #[arg(long, default_value_t = 32)]
        search_bound: usize,
    },
    /// Check a combinator's precondition, build it and verify its output.
    VerifyCombinator {
        #[arg(value_enum)]
        name: Combinator,
        #[arg(long)]
        instance: PathBuf,
        /// Second factor (product) or target space (pullback).
        #[arg(long)]
        other: Option<PathBuf>,
        /// Map file for pullback: {"image": [...], "assign": [...]}.
        #[arg(long)]
        map: Option<PathBuf>,
        /// Union pieces as point lists, e.g. "0,1|2,3". Defaults to two halves.
        #[arg(long)]
        pieces: Option<String>,
        /// Also solve the output's game and compare.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        game: GameArgs,
    },
    /// Decide whether cover `u` is coarser than cover `v`.
    CompareCovers {
        file: PathBuf,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
        #[arg(long, default_value_t = 32)]
        search_bound: usize,
    },
    /// Normalize a space file.
    MakeSpace {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Enumerate the small-instance corpus.
    Corpus {
        /// Write one instance file per entry here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        max_points: usize,
        #[arg(long, default_value_t = 2)]
        max_covers: usize,
        #[arg(long, default_value_t = 5)]
        max_members: usize,
        /// Spaces with more points get a single cover.
        #[arg(long, default_value_t = 4)]
        multi_cover_points: usize,
        #[arg(long, default_value_t = 4)]
        max_horizon: usize,
        #[arg(long, default_value_t = 1)]
        budget: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(commands::run(&cli))
}
