//! Heads-up all-in-or-fold poker: cards, hand evaluation, equities and the
//! game generator.

pub mod aof;
pub mod cards;
pub mod equity;
pub mod eval;
pub mod grid;
pub mod hands;


pub use aof::{gen_aof_game, gen_aof_game_with, AofConfig, Showdown};
pub use cards::{Card, Combo};
pub use grid::{grid_report, Cell, Grid};
pub use equity::EquityTable;
pub use hands::CanonicalHand;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PokerError {
    #[error("bad card text '{0}'")]
    BadCard(String),
    #[error("duplicate card {0}")]
    DuplicateCard(String),
    #[error("bad hand text '{0}'")]
    BadHand(String),
    #[error("combos {0} and {1} share a card")]
    Overlap(String, String),
    #[error("no equity class for {0}")]
    MissingClass(String),
    #[error("corrupt equity table: {0}")]
    CorruptTable(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
}
