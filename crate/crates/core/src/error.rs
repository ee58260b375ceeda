use thiserror::Error;

use crate::solver::SolveStats;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("the (sub)game has no positions")]
    EmptyGame,

    #[error("position set is not contained in the subgame")]
    OutOfSubgame,

    /// Removing a set left `position` without any alive successor.
    #[error("not a game: position {position} has no successor left")]
    NotAGame { position: usize },

    #[error("bad index: {0}")]
    BadIndex(String),

    /// The solver hit its configured call limit; `stats` holds the counters
    /// accumulated up to that point.
    #[error("call limit of {limit} recursive calls exceeded")]
    CallLimitExceeded { limit: u64, stats: Box<SolveStats> },

    #[error("game is not a core extension of level {k}: {reason}")]
    NotCoreExtension { k: usize, reason: String },

    #[error("game has {0} positions, the brute-force oracle handles at most 12")]
    TooLarge(usize),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("position {0} has no successors")]
    NotLeftTotal(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
