//! Dominated actions in extensive-form games.
//!
//! Games are read from Gambit `.efg` files ([`efg`]), turned into sequence
//! form ([`seqform`]), and each action is tested for strict or weak dominance
//! with a pair of linear programs ([`dominance`]). [`reducer`] iterates the
//! removal to a fixed point. [`poker`] builds the all-in-or-fold hold'em game
//! used for benchmarks; [`oracle`] is a brute-force cross-check for small
//! games.

pub mod dominance;
pub mod efg;
pub mod game;
pub mod lp;
pub mod oracle;
pub mod poker;
pub mod reducer;
pub mod scalar;
pub mod seqform;

pub use dominance::{check_action, CheckConfig, CheckMode, DominanceVerdict, OpponentReach, Verdict};
pub use efg::{parse_efg, write_efg};
pub use game::{GameTree, InfoSetId, NodeId, PlayerId};
pub use reducer::{reduce_iteratively, ReduceConfig, ReductionLog, Schedule};
pub use scalar::{Rational, Scalar};

pub type GameF64 = GameTree<f64>;
pub type GameF32 = GameTree<f32>;
pub type GameExact = GameTree<Rational>;
