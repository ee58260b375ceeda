//! File formats, benchmark driver and command-line front end.

pub mod bench;
pub mod cli;
pub mod pgsolver;

pub use bench::{run_bench, write_csv, BenchRecord, Family};
pub use pgsolver::{parse_pgsolver, write_pgsolver, PgGame};
