use std::fmt;
use std::str::FromStr;

use super::cards::{rank_from_char, Card, Combo, RANK_CHARS};
use super::PokerError;

/// One of the 169 strategically distinct starting hands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalHand {
    pub high: u8,
    pub low: u8,
    pub suited: bool,
}

impl CanonicalHand {
    pub fn pair(rank: u8) -> Self {
        CanonicalHand { high: rank, low: rank, suited: false }
    }

    pub fn of(combo: Combo) -> Self {
        let (a, b) = (combo.0, combo.1);
        let (high, low) = if a.rank() >= b.rank() { (a.rank(), b.rank()) } else { (b.rank(), a.rank()) };
        CanonicalHand { high, low, suited: high != low && a.suit() == b.suit() }
    }

    pub fn is_pair(self) -> bool {
        self.high == self.low
    }

    /// 6 for pairs, 4 suited, 12 offsuit.
    pub fn multiplicity(self) -> u32 {
        if self.is_pair() {
            6
        } else if self.suited {
            4
        } else {
            12
        }
    }

    pub fn combos(self) -> Vec<Combo> {
        let mut out = Vec::with_capacity(self.multiplicity() as usize);
        for s1 in 0..4u8 {
            for s2 in 0..4u8 {
                let ok = if self.is_pair() {
                    s1 < s2
                } else if self.suited {
                    s1 == s2
                } else {
                    s1 != s2
                };
                if ok {
                    out.push(Combo::new(Card::new(self.high, s1), Card::new(self.low, s2)).expect("distinct cards"));
                }
            }
        }
        out
    }

    /// All 169 hands in canonical order: high rank descending, then low rank
    /// descending, suited before offsuit.
    pub fn all() -> Vec<CanonicalHand> {
        let mut out = Vec::with_capacity(169);
        for high in (0..13u8).rev() {
            for low in (0..=high).rev() {
                if high == low {
                    out.push(CanonicalHand::pair(high));
                } else {
                    out.push(CanonicalHand { high, low, suited: true });
                    out.push(CanonicalHand { high, low, suited: false });
                }
            }
        }
        out
    }

    /// Position in [`CanonicalHand::all`].
    pub fn index(self) -> usize {
        // a high rank h owns 2h + 1 hands
        let before: usize = (self.high as usize + 1..13).map(|h| 2 * h + 1).sum();
        let within = if self.is_pair() {
            0
        } else {
            let step = (self.high - self.low) as usize;
            1 + 2 * (step - 1) + usize::from(!self.suited)
        };
        before + within
    }

    /// Grid cell (row, column) with ace at 0: pairs on the diagonal, suited
    /// hands above it, offsuit below.
    pub fn grid_cell(self) -> (usize, usize) {
        let hi = 12 - self.high as usize;
        let lo = 12 - self.low as usize;
        if self.suited {
            (hi, lo)
        } else {
            (lo, hi)
        }
    }

    pub fn from_grid_cell(row: usize, col: usize) -> Self {
        let r = 12 - row as u8;
        let c = 12 - col as u8;
        if row == col {
            CanonicalHand::pair(r)
        } else if col > row {
            CanonicalHand { high: r, low: c, suited: true }
        } else {
            CanonicalHand { high: c, low: r, suited: false }
        }
    }
}

impl fmt::Display for CanonicalHand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = RANK_CHARS[self.high as usize];
        let l = RANK_CHARS[self.low as usize];
        if self.is_pair() {
            write!(f, "{}{}", h, l)
        } else {
            write!(f, "{}{}{}", h, l, if self.suited { 's' } else { 'o' })
        }
    }
}

impl FromStr for CanonicalHand {
    type Err = PokerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PokerError::BadHand(s.to_string());
        let chars: Vec<char> = s.chars().collect();
        let (a, b) = match chars.as_slice() {
            [a, b] | [a, b, _] => (rank_from_char(*a).ok_or_else(bad)?, rank_from_char(*b).ok_or_else(bad)?),
            _ => return Err(bad()),
        };
        let (high, low) = if a >= b { (a, b) } else { (b, a) };
        match (chars.len(), chars.get(2)) {
            (2, None) if high == low => Ok(CanonicalHand::pair(high)),
            (3, Some('s')) if high != low => Ok(CanonicalHand { high, low, suited: true }),
            (3, Some('o')) if high != low => Ok(CanonicalHand { high, low, suited: false }),
            _ => Err(bad()),
        }
    }
}
