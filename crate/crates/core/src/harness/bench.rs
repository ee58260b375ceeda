//! Benchmark cells over (family, k, variant), emitted as CSV.

use std::fmt;
use std::io::Write;

use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;

use crate::analyzer::InducedTree;
use crate::error::Result;
use crate::families::{gen_core, gen_scc};
use crate::game::ParityGame;
use crate::solver::{solve, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Core,
    Scc,
}

impl Family {
    pub fn generate(self, k: usize) -> Result<ParityGame> {
        match self {
            Family::Core => gen_core(k),
            Family::Scc => gen_scc(k),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Core => "core",
            Family::Scc => "scc",
        })
    }
}

/// One solver run; field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub family: Family,
    pub k: usize,
    pub n: usize,
    pub m: usize,
    pub variant: String,
    pub total_calls: u64,
    pub distinct_subgames: u64,
    pub memo_hits: u64,
    #[serde(serialize_with = "millis")]
    pub wall_time_ms: f64,
    pub won_by_0: bool,
    pub bound_3_2k1: u64,
}

fn millis<S: serde::Serializer>(ms: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&format_args!("{ms:.3}"))
}

pub fn run_cell(family: Family, k: usize, variant: Variant) -> Result<BenchRecord> {
    let game = family.generate(k)?;
    let full = game.full();
    let (regions, stats) = solve(&full, &variant.config())?;
    Ok(BenchRecord {
        family,
        k,
        n: game.len(),
        m: game.num_moves(),
        variant: variant.name().to_string(),
        total_calls: stats.total_calls,
        distinct_subgames: stats.distinct_subgames,
        memo_hits: stats.memo_hits,
        wall_time_ms: stats.wall_time.as_secs_f64() * 1e3,
        won_by_0: regions.w1.is_empty(),
        bound_3_2k1: InducedTree::expected_len(k),
    })
}

/// Runs every cell in parallel; records come back ordered by k, then variant
/// in the order given.
pub fn run_bench(
    family: Family,
    ks: impl IntoIterator<Item = usize>,
    variants: &[Variant],
) -> Result<Vec<BenchRecord>> {
    let cells: Vec<(usize, Variant)> = ks
        .into_iter()
        .flat_map(|k| variants.iter().map(move |&v| (k, v)))
        .collect();
    cells
        .into_par_iter()
        .map(|(k, v)| run_cell(family, k, v))
        .collect()
}

/// Header row plus one row per record, `\n`-terminated.
pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    if records.is_empty() {
        w.write_record(HEADER)?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub const HEADER: [&str; 11] = [
    "family",
    "k",
    "n",
    "m",
    "variant",
    "total_calls",
    "distinct_subgames",
    "memo_hits",
    "wall_time_ms",
    "won_by_0",
    "bound_3_2k1",
];
