//! A parity game laboratory: the recursive (McNaughton-Zielonka) solver with
//! memoization, SCC decomposition and dominion preprocessing, generators for
//! games that force it into exponentially many distinct subgames, and the
//! machinery to check those lower bounds mechanically.

pub mod analyzer;
pub mod error;
pub mod families;
pub mod game;
pub mod harness;
pub mod solver;

#[cfg(test)]
mod properties;

pub use error::{Error, Result};
pub use game::{ParityGame, Player, PositionSet, Priority, Regions, Subgame};
