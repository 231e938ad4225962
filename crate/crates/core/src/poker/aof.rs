//! The heads-up all-in-or-fold game tree.

use serde::{Deserialize, Serialize};

use super::equity::{EquityTable, DEALS};
use super::hands::CanonicalHand;
use super::PokerError;
use crate::game::{GameTree, NodeSpec};
use crate::scalar::{Rational, Scalar};

/// Blinds and pre-blind stack in chips.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AofConfig {
    pub sb: u64,
    pub bb: u64,
    pub stack: u64,
}

impl AofConfig {
    pub fn new(sb: u64, bb: u64, stack: u64) -> Result<Self, PokerError> {
        let c = AofConfig { sb, bb, stack };
        c.validate()?;
        Ok(c)
    }

    /// Default blinds (100/200) with a stack of `bbs` big blinds.
    pub fn with_stack_bb(bbs: u64) -> Result<Self, PokerError> {
        Self::new(100, 200, 200 * bbs)
    }

    pub fn validate(&self) -> Result<(), PokerError> {
        if !(0 < self.sb && self.sb < self.bb && self.bb <= self.stack) {
            return Err(PokerError::Config(format!("need 0 < sb < bb <= stack, got {}/{}/{}", self.sb, self.bb, self.stack)));
        }
        Ok(())
    }

    /// Player 1's net result when a shove is called with equity `eq`.
    pub fn showdown(&self, eq: &Rational) -> Rational {
        let s = Rational::from_integer((self.stack as i64).into());
        eq * Rational::from_integer(2.into()) * &s - s
    }
}

/// What a called shove leads to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Showdown {
    /// One leaf paying the equity-weighted result.
    #[default]
    Equity,
    /// A chance node: win the opponent's stack with probability equal to the
    /// equity, else lose one's own. Same expected payoffs, but the leaves carry
    /// the realized ±stack outcomes.
    Outcomes,
}

pub const SHOVE: &str = "shove";
pub const FOLD: &str = "fold";
pub const CALL: &str = "call";

/// Root chance over every (P1 hand, P2 hand) pair weighted by its number of
/// concrete deals; P1 decides per hand, P2 per hand after a shove.
pub fn gen_aof_game<T: Scalar>(config: &AofConfig, table: &EquityTable) -> Result<GameTree<T>, PokerError> {
    gen_aof_game_with(config, table, Showdown::Equity)
}

pub fn gen_aof_game_with<T: Scalar>(config: &AofConfig, table: &EquityTable, showdown: Showdown) -> Result<GameTree<T>, PokerError> {
    config.validate()?;
    let (sb, bb) = (config.sb as i64, config.bb as i64);
    let int = |v: i64| T::from_ratio(v, 1);
    let mut branches = Vec::with_capacity(169 * 169);
    let mut outcome = 2;
    for pair in table.hand_pairs() {
        if pair.weight == 0 {
            continue;
        }
        let (h1, h2) = (pair.hero, pair.villain);
        outcome += 1;
        let call = match showdown {
            Showdown::Equity => {
                let v = config.showdown(&pair.equity);
                let u = T::from_big_ratio(v.numer(), v.denom());
                NodeSpec::Terminal { label: String::new(), outcome, name: format!("{} calls {}", h2, h1), payoffs: vec![u.clone(), -u] }
            }
            Showdown::Outcomes => {
                let s = config.stack as i64;
                let win = T::from_big_ratio(pair.equity.numer(), pair.equity.denom());
                let leaf = |outcome, name: &str, u: i64| NodeSpec::Terminal {
                    label: String::new(),
                    outcome,
                    name: name.to_string(),
                    payoffs: vec![int(u), int(-u)],
                };
                NodeSpec::Chance {
                    label: String::new(),
                    number: outcome,
                    name: format!("{} calls {}", h2, h1),
                    branches: vec![
                        ("win".to_string(), win.clone(), leaf(3, "win", s)),
                        ("lose".to_string(), T::one() - win, leaf(4, "lose", -s)),
                    ],
                }
            }
        };
        let steal = NodeSpec::Terminal { label: String::new(), outcome: 2, name: "steal".into(), payoffs: vec![int(bb), int(-bb)] };
        let p2 = NodeSpec::Decision {
            label: String::new(),
            player: 1,
            number: h2.index() + 1,
            name: h2.to_string(),
            branches: vec![(CALL.to_string(), call), (FOLD.to_string(), steal)],
        };
        let give_up = NodeSpec::Terminal { label: String::new(), outcome: 1, name: "fold".into(), payoffs: vec![int(-sb), int(sb)] };
        let p1 = NodeSpec::Decision {
            label: String::new(),
            player: 0,
            number: h1.index() + 1,
            name: h1.to_string(),
            branches: vec![(SHOVE.to_string(), p2), (FOLD.to_string(), give_up)],
        };
        let prob = T::from_ratio(pair.weight as i64, DEALS as i64);
        branches.push((format!("{} {}", h1, h2), prob, p1));
    }
    let root = NodeSpec::Chance { label: String::new(), number: 1, name: "deal".into(), branches };
    let title = format!("AOF {}/{} stack {}", config.sb, config.bb, config.stack);
    let game = GameTree::new(&title, vec!["Small blind".into(), "Big blind".into()], root)
        .map_err(|e| PokerError::Config(e.to_string()))?;
    Ok(game.with_comment(Some(format!("All-in-or-fold, {} big blinds deep", config.stack as f64 / config.bb as f64))))
}

/// Hand behind an AOF info-set name.
pub fn hand_of(name: &str) -> Result<CanonicalHand, PokerError> {
    name.parse()
}
