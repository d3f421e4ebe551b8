//! `indep`: command-line access to ordinals, the Hardy hierarchy, Goodstein
//! sequences, Ramsey-type arrows, the worm game and tree embeddings.
//!
//! Exit status: 0 for any computed answer (including false and truncated
//! runs), 2 when a search budget ran out, 64 for usage errors, 1 for
//! computations that hit a hard resource limit or I/O failure.

use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use indep::goodstein::BaseFunction;
use indep::ramsey::DEFAULT_BUDGET;
use indep::trees::{FiniteTree, SizeBound, DEFAULT_CAP};
use indep::worm::Worm;
use indep::{Nat, Ordinal};

mod commands;
mod output;

use output::{Emitter, Format};

#[derive(Debug, Parser)]
#[command(name = "indep", version, about = "Executable combinatorics of independence results for PA")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Step limit for evaluations and simulations.
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub fuel: u64,
    /// Limit on functions, trees or search nodes examined by a search.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..1025))]
    pub jobs: Option<u64>,
    /// Emit intermediate states as stream rows before the summary.
    #[arg(long, global = true)]
    pub trace: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ordinals below and at ε₀ in Cantor normal form.
    #[command(subcommand)]
    Ordinal(OrdinalCmd),
    /// Evaluate H_α(n) or tabulate growth.
    Hardy(HardyArgs),
    /// Run a Goodstein sequence.
    Goodstein(GoodsteinArgs),
    /// Decide [a1, a2] →* (b)^c_d.
    PhArrow {
        #[arg(long)]
        a1: u64,
        #[arg(long)]
        a2: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        d: u64,
    },
    /// Least a2 with [a1, a2] →* (b)^c_d.
    PhWitness {
        #[arg(long)]
        a1: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        d: u64,
    },
    /// σ(n), the least m with [0, m] →* (n+1)^n_n.
    Sigma {
        #[arg(long)]
        n: u64,
    },
    /// Y(x, y), the largest z with [x, y] →* (z+1)^z_z.
    PhIndicator {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        y: u64,
    },
    /// g_n(x), the least y with Y(x, y) > n.
    IndG {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        n: u64,
    },
    /// Decide [a, b] →* (k)^n for regressive functions.
    KmArrow {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n: u64,
    },
    /// Least b with [a, b] →* (k)^n.
    KmWitness {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n: u64,
    },
    /// The worm game.
    #[command(subcommand)]
    Worm(WormCmd),
    /// Counting rooted trees and estimating Otter's constant.
    #[command(subcommand)]
    Trees(TreesCmd),
    /// Bad sequences of trees under a size bound K + f(i).
    #[command(subcommand)]
    Fkt(FktCmd),
    /// Regal sets: a k-check or the indicator Z(a, b).
    Regal(SetArgs),
    /// Kiralic sets: a k-check or the indicator W(a, b).
    Kiralic(SetArgs),
}

#[derive(Debug, Subcommand)]
pub enum OrdinalCmd {
    /// Compare two ordinals.
    Cmp { a: Ordinal, b: Ordinal },
    /// The n-th member of the fundamental sequence.
    Fund {
        ordinal: Ordinal,
        #[arg(long)]
        n: u64,
    },
    /// Replace ω by a base b.
    ToInt {
        ordinal: Ordinal,
        #[arg(long)]
        base: u64,
    },
    /// Hereditary base-b representation with ω for b.
    FromInt {
        value: Nat,
        #[arg(long)]
        base: u64,
    },
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct HardyArgs {
    #[command(subcommand)]
    pub table: Option<HardyCmd>,
    #[arg(long)]
    pub ordinal: Option<Ordinal>,
    #[arg(long)]
    pub n: Option<Nat>,
}

#[derive(Debug, Subcommand)]
pub enum HardyCmd {
    /// H_α(n) for each listed α and n in [0, n_max], as CSV.
    Table {
        /// Comma-separated ordinals; empty for none.
        #[arg(long, value_parser = parse_ordinal_list)]
        ordinals: OrdinalList,
        #[arg(long)]
        n_max: u64,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone)]
pub struct OrdinalList(pub Vec<Ordinal>);

fn parse_ordinal_list(s: &str) -> Result<OrdinalList, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<Ordinal>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(OrdinalList)
}

#[derive(Debug, Args)]
pub struct GoodsteinArgs {
    #[arg(long)]
    pub m: Nat,
    /// classic | const:B | affine:Q,R | table:B0,B1,…
    #[arg(long, default_value = "classic")]
    pub f: BaseFunction,
    #[arg(long, default_value_t = 1000)]
    pub max_steps: u64,
}

#[derive(Debug, Subcommand)]
pub enum WormCmd {
    /// Play the game from a worm until it dies or the fuel runs out.
    Run {
        /// Entries, e.g. "1,0,1"; "" or "()" for the empty worm.
        #[arg(long, allow_hyphen_values = true)]
        worm: Worm,
        /// Longest worm written out in full in trace rows.
        #[arg(long, default_value_t = 64)]
        trace_max_len: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum TreesCmd {
    /// t_size, the number of rooted unordered trees.
    Count {
        #[arg(long)]
        size: usize,
        /// Also list the trees (size at most the enumeration cap).
        #[arg(long)]
        list: bool,
    },
    /// Ratio-test estimate of Otter's constant and the threshold c.
    Otter {
        #[arg(long, default_value_t = 60)]
        max_i: usize,
    },
    /// Whether one tree inf-embeds into another.
    Embeds { t1: FiniteTree, t2: FiniteTree },
}

#[derive(Debug, Subcommand)]
pub enum FktCmd {
    /// Decide whether no bad sequence T_0..T_M exists.
    Check {
        #[arg(long)]
        k: u64,
        /// zero | id | log:P/Q | log:R | table:V0,V1,…
        #[arg(long)]
        f: SizeBound,
        #[arg(long)]
        m: u64,
    },
    /// Search for a long bad sequence within the budget.
    Explore {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        f: SizeBound,
        /// Largest tree size considered.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
}

#[derive(Debug, Args)]
pub struct SetArgs {
    /// Interval [a, b]; used unless --set is given.
    #[arg(long, required_unless_present = "set")]
    pub a: Option<u64>,
    #[arg(long, required_unless_present = "set")]
    pub b: Option<u64>,
    /// Explicit set, e.g. "0,1,2".
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["a", "b"], requires = "k")]
    pub set: Option<Vec<u64>>,
    /// Check k-regality (k-kiralicity) instead of computing the indicator.
    #[arg(long)]
    pub k: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => commands::EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut em = Emitter::new(cli.global.format, BufWriter::new(io::stdout()));
    let code = match cli.global.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j as usize).build() {
            Ok(pool) => pool.install(|| commands::dispatch(&cli, &mut em)),
            Err(e) => {
                eprintln!("error: cannot start {j} worker threads: {e}");
                commands::EXIT_FAILURE
            }
        },
        None => commands::dispatch(&cli, &mut em),
    };
    if let Err(e) = em.flush() {
        eprintln!("error: {e}");
        return ExitCode::from(commands::EXIT_FAILURE);
    }
    ExitCode::from(code)
}
