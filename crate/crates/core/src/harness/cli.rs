//! `parity-lab` command line: `gen`, `solve`, `verify` and `bench`.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::analyzer::{
    build_induced_tree, min_core_dominion, verify_algorithm_correspondence, verify_distinctness,
    verify_lemmas, verify_single_scc, Finding, InducedTree, Report,
};
use crate::error::Result;
use crate::families::check_core_extension;
use crate::game::{ParityGame, Player};
use crate::harness::bench::{run_bench, write_csv, Family};
use crate::harness::pgsolver::{parse_pgsolver, write_pgsolver};
use crate::solver::{solve, DominionSearch, SolverConfig, Variant};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "parity-lab",
    version,
    about = "Parity game solver and worst-case family lab"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a family game in PGSolver format.
    Gen(GenArgs),
    /// Solve a PGSolver file and print the winning regions and counters.
    Solve(SolveArgs),
    /// Run a structural check on a family game; exits 1 if it fails.
    Verify(VerifyArgs),
    /// Solve a range of family games under several variants and emit CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=64))]
    k: u32,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    memo: bool,
    #[arg(long)]
    scc: bool,
    #[arg(long)]
    dominion: bool,
    /// Write regions and counters as JSON to this file.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    TreeSize,
    Lemmas,
    Correspondence,
    SingleScc,
    MinDominion,
    CoreExtension,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=64))]
    k: u32,
    #[arg(long, value_enum)]
    check: Check,
    /// Check this labelled PGSolver file instead of the generated game.
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=64))]
    k_min: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=64))]
    k_max: u32,
    /// Comma-separated: plain, memo, scc, memo+scc, memo+scc+dom.
    #[arg(long, value_delimiter = ',', required = true)]
    variants: Vec<Variant>,
    /// Output file; stdout when absent.
    #[arg(long)]
    csv: Option<PathBuf>,
}

/// Entry point of the binary: parses `std::env::args` and returns the exit code.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return e.exit_code();
        }
    };
    if let Command::Bench(b) = &cli.command {
        if b.k_min > b.k_max {
            let e = Cli::command().error(
                clap::error::ErrorKind::ArgumentConflict,
                "--k-min must not exceed --k-max",
            );
            let _ = write!(err, "{}", e.render());
            return EXIT_USAGE;
        }
    }
    match execute(cli.command, out) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILED
        }
    }
}

/// Runs one subcommand; `Ok(false)` means a check ran and failed.
fn execute(command: Command, out: &mut dyn Write) -> Result<bool> {
    match command {
        Command::Gen(a) => {
            let text = write_pgsolver(&a.family.generate(a.k as usize)?);
            match a.out {
                Some(path) => fs::write(path, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(true)
        }
        Command::Solve(a) => solve_file(&a, out),
        Command::Verify(a) => verify(&a, out),
        Command::Bench(a) => {
            let records = run_bench(a.family, a.k_min as usize..=a.k_max as usize, &a.variants)?;
            match a.csv {
                Some(path) => write_csv(&records, BufWriter::new(File::create(path)?))?,
                None => write_csv(&records, out)?,
            }
            Ok(true)
        }
    }
}

fn solve_file(a: &SolveArgs, out: &mut dyn Write) -> Result<bool> {
    let parsed = parse_pgsolver(&fs::read_to_string(&a.input)?)?;
    let game = &parsed.game;
    let cfg = SolverConfig::plain()
        .with_memoization(a.memo)
        .with_scc(a.scc)
        .with_dominions(a.dominion);
    let (regions, stats) = solve(&game.full(), &cfg)?;
    let ids =
        |p: Player| -> Vec<usize> { regions.won_by(p).iter().map(|v| parsed.ids[v]).collect() };
    let (w0, w1) = (ids(Player::Even), ids(Player::Odd));
    let wall_time_ms = stats.wall_time.as_secs_f64() * 1e3;

    writeln!(out, "positions = {}", game.len())?;
    writeln!(out, "moves = {}", game.num_moves())?;
    writeln!(out, "won_by_0 = {}", w1.is_empty())?;
    writeln!(out, "won_by_1 = {}", w0.is_empty())?;
    writeln!(out, "W0 = {w0:?}")?;
    writeln!(out, "W1 = {w1:?}")?;
    writeln!(out, "total_calls = {}", stats.total_calls)?;
    writeln!(out, "distinct_subgames = {}", stats.distinct_subgames)?;
    writeln!(out, "memo_hits = {}", stats.memo_hits)?;
    writeln!(out, "max_depth = {}", stats.max_depth)?;
    writeln!(out, "dominion_probes = {}", stats.dominion_probes)?;
    writeln!(out, "wall_time_ms = {wall_time_ms:.3}")?;

    if let Some(path) = &a.stats {
        let doc = json!({
            "positions": game.len(),
            "moves": game.num_moves(),
            "won_by_0": w1.is_empty(),
            "w0": w0,
            "w1": w1,
            "stats": stats,
            "wall_time_ms": wall_time_ms,
        });
        fs::write(path, serde_json::to_string_pretty(&doc)? + "\n")?;
    }
    Ok(true)
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<bool> {
    let k = a.k as usize;
    let game: ParityGame = match &a.input {
        Some(path) => parse_pgsolver(&fs::read_to_string(path)?)?.game,
        None => a.family.generate(k)?,
    };
    if a.check == Check::CoreExtension {
        let report = check_core_extension(&game, k);
        write!(out, "{report}")?;
        return Ok(report.passed());
    }
    let tree = match build_induced_tree(&game, k) {
        Ok(t) => t,
        Err(e) => {
            writeln!(out, "{e}")?;
            return Ok(false);
        }
    };
    match a.check {
        Check::TreeSize => {
            let d = verify_distinctness(&tree);
            let expected = InducedTree::expected_len(k);
            writeln!(out, "tree nodes = {}", tree.len())?;
            writeln!(out, "distinct subgames = {}", d.distinct_count)?;
            writeln!(out, "expected = {expected}")?;
            Ok(tree.len() as u64 == expected && d.distinct_count as u64 == expected)
        }
        Check::Lemmas => emit(out, verify_lemmas(&tree)?),
        Check::Correspondence => emit(out, verify_algorithm_correspondence(&tree)?),
        Check::SingleScc => emit(out, verify_single_scc(&tree)),
        Check::MinDominion => emit(out, dominion_sizes(&tree)?),
        Check::CoreExtension => unreachable!("handled above"),
    }
}

fn emit(out: &mut dyn Write, report: Report) -> Result<bool> {
    write!(out, "{report}")?;
    Ok(report.passed())
}

/// Smallest player-0 dominion of the whole game is `2(k + 1)`, and no tree
/// node has a dominion of size at most `k` meeting the core.
fn dominion_sizes(tree: &InducedTree<'_>) -> Result<Report> {
    let k = tree.k;
    let mut report = Report::new(format!("dominion sizes, k = {k}"));
    let full = tree.game.full();
    let want = 2 * (k + 1);
    let found = DominionSearch::new(&full)
        .players(&[Player::Even])
        .smallest(want)?
        .map(|(d, _)| d.len());
    let witness = (found != Some(want)).then(|| match found {
        Some(size) => format!("smallest player-0 dominion has size {size}, expected {want}"),
        None => format!("no player-0 dominion of size at most {want}"),
    });
    report.push(Finding::new("G", "smallest player-0 dominion", witness));

    let core = tree.core_set();
    for (label, node) in tree.nodes() {
        let witness = min_core_dominion(node, &core, k)?
            .map(|size| format!("dominion of size {size} meets the core"));
        report.push(Finding::new(label, "core dominions exceed k", witness));
    }
    Ok(report)
}
