//! Command-line front end for the Cayley digraph CI tester.
//!
//! Subcommands: `report` decides one connection set, `sweep` decides every
//! set of given sizes on a family of groups, `fixtures` replays pinned
//! reference values, and `export`/`inspect` move digraphs through a plain
//! text format.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cayley_ci::citester::{Budget, Mode, DEFAULT_MAX_SUBSETS};
use cayley_ci::permgroup::DEFAULT_MATERIALIZATION_CAP;

mod cache;
mod commands;
mod output;
mod ranges;

use cache::FsStore;
use output::OutputFormat;
use ranges::Ranges;

const ELEMENT_GRAMMAR: &str = "\
Groups are written dihedral:N or cyclic:N. Elements of a group use:
  1        identity
  a, a^K   rotation by K (negative exponents reduce mod n)
  b, a^K*b reflection, optionally preceded by a rotation
Connection sets are comma-separated element lists, e.g. \"a,a^-1,a^2*b,b\".
Sweeps instead take --group dihedral|cyclic plus --n with ranges such as
\"3..9\" or \"3,5,7\".";

#[derive(Parser)]
#[command(name = "cayley-ci", version, about = "CI-subset tester for Cayley digraphs over dihedral and cyclic groups", after_help = ELEMENT_GRAMMAR)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether one connection set is a CI-subset of its group.
    Report(ReportArgs),
    /// Decide every connection set of the given sizes across groups.
    Sweep(SweepArgs),
    /// Re-run pinned reference digraphs and compare against known values.
    Fixtures,
    /// Write a Cayley digraph in the plain text format.
    Export(ExportArgs),
    /// Summarize a digraph read from a file or stdin.
    Inspect(InspectArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Definitional,
    Babai,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Digraph,
    Graph,
}

impl From<ModeArg> for Mode {
    fn from(arg: ModeArg) -> Mode {
        match arg {
            ModeArg::Digraph => Mode::Digraph,
            ModeArg::Graph => Mode::Graph,
        }
    }
}

#[derive(Args)]
struct BudgetArgs {
    /// Refuse sweeps enumerating more candidate sets than this.
    #[arg(long, default_value_t = DEFAULT_MAX_SUBSETS)]
    max_subsets: u128,
    /// Refuse to materialize automorphism groups larger than this.
    #[arg(long = "cap", default_value_t = DEFAULT_MATERIALIZATION_CAP)]
    materialization_cap: usize,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget {
            max_subsets: self.max_subsets,
            materialization_cap: self.materialization_cap,
        }
    }
}

#[derive(Args)]
struct CacheArgs {
    /// Directory for persisted certificates, reused across runs.
    #[arg(long, env = "CAYLEY_CI_CACHE")]
    cache: Option<PathBuf>,
    /// Ignore any configured cache directory.
    #[arg(long)]
    no_cache: bool,
    /// Recompute and compare every cache hit instead of sampling.
    #[arg(long)]
    verify_cache: bool,
}

impl CacheArgs {
    fn open_store(&self) -> std::io::Result<Option<FsStore>> {
        match &self.cache {
            Some(dir) if !self.no_cache => Ok(Some(FsStore::open(dir, self.verify_cache)?)),
            _ => Ok(None),
        }
    }
}

#[derive(Args)]
struct ReportArgs {
    /// Group, e.g. dihedral:6 or cyclic:9.
    group: String,
    /// Connection set, e.g. "a,a^-1,a*b,b".
    set: String,
    /// Decision method; both cross-checks the two against each other.
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    method: MethodArg,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Group family: dihedral or cyclic.
    #[arg(long)]
    group: String,
    /// Values of n, e.g. "3..9" or "3,5,7".
    #[arg(long, value_parser = ranges::parse_ranges)]
    n: Ranges,
    /// Connection set sizes to test, e.g. "4" or "1..4".
    #[arg(long, value_parser = ranges::parse_ranges)]
    valency: Ranges,
    /// digraph tests all sets; graph restricts to inverse-closed sets.
    #[arg(long, value_enum, default_value_t = ModeArg::Digraph)]
    mode: ModeArg,
    /// Restrict to sets that generate the whole group.
    #[arg(long)]
    connected_only: bool,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(flatten)]
    cache: CacheArgs,
}

#[derive(Args)]
struct ExportArgs {
    /// Group, e.g. dihedral:6 or cyclic:9.
    group: String,
    /// Connection set, e.g. "a,a^-1,a*b,b".
    set: String,
    /// Output file; stdout when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct InspectArgs {
    /// Input file, or - for stdin.
    #[arg(default_value = "-")]
    input: String,
    /// Also print the canonical relabeling of the digraph.
    #[arg(long)]
    canonical: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Report(args) => commands::report(args),
        Command::Sweep(args) => commands::sweep(args),
        Command::Fixtures => commands::fixtures(),
        Command::Export(args) => commands::export(args),
        Command::Inspect(args) => commands::inspect(args),
    };
    ExitCode::from(code)
}
