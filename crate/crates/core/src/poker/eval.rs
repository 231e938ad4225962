//! Seven-card hand evaluation.
//!
//! A hand is a 64-bit mask with one 16-bit lane per suit. Strength values pack
//! `category << 26 | major << 13 | minor`, where `major` and `minor` are rank
//! bitmasks, so integer comparison of two strengths is poker comparison.

use super::cards::Card;
use super::PokerError;

const LANE: u64 = 0x1fff;

pub const HIGH_CARD: u32 = 0;
pub const PAIR: u32 = 1;
pub const TWO_PAIR: u32 = 2;
pub const TRIPS: u32 = 3;
pub const STRAIGHT: u32 = 4;
pub const FLUSH: u32 = 5;
pub const FULL_HOUSE: u32 = 6;
pub const QUADS: u32 = 7;
pub const STRAIGHT_FLUSH: u32 = 8;

/// Totally ordered strength of a best 5-of-7 hand. Equal values tie.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HandStrength(pub u32);

impl HandStrength {
    pub fn category(self) -> u32 {
        self.0 >> 26
    }

    pub fn category_name(self) -> &'static str {
        match self.category() {
            HIGH_CARD => "high card",
            PAIR => "pair",
            TWO_PAIR => "two pair",
            TRIPS => "three of a kind",
            STRAIGHT => "straight",
            FLUSH => "flush",
            FULL_HOUSE => "full house",
            QUADS => "four of a kind",
            _ => "straight flush",
        }
    }
}

#[inline]
fn pack(category: u32, major: u32, minor: u32) -> u32 {
    (category << 26) | (major << 13) | minor
}

#[inline]
fn top_bit(m: u32) -> u32 {
    1 << (31 - m.leading_zeros())
}

#[inline]
fn keep_top(mut m: u32, k: u32) -> u32 {
    while m.count_ones() > k {
        m &= m - 1;
    }
    m
}

/// Rank index of the highest card of the best straight in `ranks`, counting
/// the wheel (A-2-3-4-5) as five-high.
#[inline]
fn straight_high(ranks: u32) -> Option<u32> {
    let y = (ranks << 1) | ((ranks >> 12) & 1);
    let runs = y & (y >> 1) & (y >> 2) & (y >> 3) & (y >> 4);
    if runs == 0 {
        None
    } else {
        Some(31 - runs.leading_zeros() + 3)
    }
}

/// Evaluates a card mask holding five to seven cards.
#[inline]
pub fn eval_mask(mask: u64) -> HandStrength {
    let s = [
        (mask & LANE) as u32,
        ((mask >> 16) & LANE) as u32,
        ((mask >> 32) & LANE) as u32,
        ((mask >> 48) & LANE) as u32,
    ];
    for &suited in &s {
        if suited.count_ones() >= 5 {
            // With at most seven cards a flush excludes quads and full houses.
            if let Some(h) = straight_high(suited) {
                return HandStrength(pack(STRAIGHT_FLUSH, 1 << h, 0));
            }
            return HandStrength(pack(FLUSH, keep_top(suited, 5), 0));
        }
    }
    let any = s[0] | s[1] | s[2] | s[3];
    let two = (s[0] & s[1]) | (s[0] & s[2]) | (s[0] & s[3]) | (s[1] & s[2]) | (s[1] & s[3]) | (s[2] & s[3]);
    let three = (s[0] & s[1] & s[2]) | (s[0] & s[1] & s[3]) | (s[0] & s[2] & s[3]) | (s[1] & s[2] & s[3]);
    let four = s[0] & s[1] & s[2] & s[3];

    if four != 0 {
        let q = top_bit(four);
        return HandStrength(pack(QUADS, q, keep_top(any & !q, 1)));
    }
    if three != 0 {
        let t = top_bit(three);
        let rest = two & !t;
        if rest != 0 {
            return HandStrength(pack(FULL_HOUSE, t, top_bit(rest)));
        }
    }
    if let Some(h) = straight_high(any) {
        return HandStrength(pack(STRAIGHT, 1 << h, 0));
    }
    if three != 0 {
        let t = top_bit(three);
        return HandStrength(pack(TRIPS, t, keep_top(any & !t, 2)));
    }
    if two != 0 {
        if two.count_ones() >= 2 {
            let p = keep_top(two, 2);
            return HandStrength(pack(TWO_PAIR, p, keep_top(any & !p, 1)));
        }
        return HandStrength(pack(PAIR, two, keep_top(any & !two, 3)));
    }
    HandStrength(pack(HIGH_CARD, keep_top(any, 5), 0))
}

/// Strength of the best five-card hand among seven distinct cards.
pub fn evaluate7(cards: &[Card; 7]) -> Result<HandStrength, PokerError> {
    let mut mask = 0u64;
    for c in cards {
        if mask & c.mask() != 0 {
            return Err(PokerError::DuplicateCard(c.to_string()));
        }
        mask |= c.mask();
    }
    Ok(eval_mask(mask))
}
