//! 13×13 shove/fold charts from a reduction log.

use std::fmt;

use serde::Serialize;

use super::aof::{CALL, FOLD, SHOVE};
use super::hands::CanonicalHand;
use super::PokerError;
use crate::reducer::ReductionLog;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Cell {
    /// Fold was removed in the given round.
    Shove(usize),
    /// The aggressive action was removed in the given round.
    Fold(usize),
    Undecided,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Shove(r) => write!(f, "S({})", r),
            Cell::Fold(r) => write!(f, "F({})", r),
            Cell::Undecided => f.write_str("?"),
        }
    }
}

/// Rows and columns run A..2; suited hands above the diagonal.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub player: usize,
    pub cells: [[Cell; 13]; 13],
}

impl Grid {
    pub fn get(&self, hand: CanonicalHand) -> Cell {
        let (r, c) = hand.grid_cell();
        self.cells[r][c]
    }

    pub fn undecided(&self) -> usize {
        self.cells.iter().flatten().filter(|c| **c == Cell::Undecided).count()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<String>> = self.cells.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect();
        serde_json::json!({ "player": self.player + 1, "cells": rows })
    }
}

const RANKS: [char; 13] = ['A', 'K', 'Q', 'J', 'T', '9', '8', '7', '6', '5', '4', '3', '2'];

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "   ")?;
        for r in RANKS {
            write!(f, "{:>5}", r)?;
        }
        writeln!(f)?;
        for (i, row) in self.cells.iter().enumerate() {
            write!(f, "{:>3}", RANKS[i])?;
            for c in row {
                write!(f, "{:>5}", c.to_string())?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// One grid per player of a two-player all-in-or-fold reduction.
pub fn grid_report(log: &ReductionLog) -> Result<[Grid; 2], PokerError> {
    let blank = [[Cell::Undecided; 13]; 13];
    let mut grids = [Grid { player: 0, cells: blank }, Grid { player: 1, cells: blank }];
    for round in &log.rounds {
        for rem in &round.removals {
            if rem.player > 1 {
                return Err(PokerError::Config(format!("player {} in an all-in-or-fold log", rem.player + 1)));
            }
            let hand: CanonicalHand = rem.infoset.parse()?;
            let cell = match rem.action.as_str() {
                FOLD => Cell::Shove(round.round),
                SHOVE | CALL => Cell::Fold(round.round),
                other => return Err(PokerError::Config(format!("unexpected action '{}' at {}", other, rem.infoset))),
            };
            let (r, c) = hand.grid_cell();
            grids[rem.player].cells[r][c] = cell;
        }
    }
    Ok(grids)
}
