use std::fmt;
use std::str::FromStr;

use super::PokerError;

pub const RANK_CHARS: [char; 13] = ['2', '3', '4', '5', '6', '7', '8', '9', 'T', 'J', 'Q', 'K', 'A'];
pub const SUIT_CHARS: [char; 4] = ['c', 'd', 'h', 's'];

/// A card from a standard 52-card deck, encoded as `rank * 4 + suit` with
/// rank 0 = deuce and rank 12 = ace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Card(u8);

impl Card {
    pub fn new(rank: u8, suit: u8) -> Self {
        assert!(rank < 13 && suit < 4, "card out of range");
        Card(rank * 4 + suit)
    }

    pub fn from_index(index: u8) -> Self {
        assert!(index < 52, "card index out of range");
        Card(index)
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn rank(self) -> u8 {
        self.0 / 4
    }

    pub fn suit(self) -> u8 {
        self.0 % 4
    }

    /// Bit in the evaluator's 4x16 layout (`suit * 16 + rank`).
    #[inline]
    pub fn mask(self) -> u64 {
        1u64 << (self.suit() as u32 * 16 + self.rank() as u32)
    }

    pub fn with_suit(self, suit: u8) -> Self {
        Card::new(self.rank(), suit)
    }

    pub fn deck() -> impl Iterator<Item = Card> {
        (0..52).map(Card)
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", RANK_CHARS[self.rank() as usize], SUIT_CHARS[self.suit() as usize])
    }
}

pub fn rank_from_char(c: char) -> Option<u8> {
    RANK_CHARS.iter().position(|&r| r == c.to_ascii_uppercase()).map(|r| r as u8)
}

impl FromStr for Card {
    type Err = PokerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        let (Some(r), Some(su), None) = (chars.next(), chars.next(), chars.next()) else {
            return Err(PokerError::BadCard(s.to_string()));
        };
        let rank = rank_from_char(r).ok_or_else(|| PokerError::BadCard(s.to_string()))?;
        let suit = SUIT_CHARS
            .iter()
            .position(|&c| c == su.to_ascii_lowercase())
            .ok_or_else(|| PokerError::BadCard(s.to_string()))?;
        Ok(Card::new(rank, suit as u8))
    }
}

/// Two hole cards, stored high card first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Combo(pub Card, pub Card);

impl Combo {
    pub fn new(a: Card, b: Card) -> Result<Self, PokerError> {
        if a == b {
            return Err(PokerError::DuplicateCard(a.to_string()));
        }
        Ok(if a > b { Combo(a, b) } else { Combo(b, a) })
    }

    pub fn mask(self) -> u64 {
        self.0.mask() | self.1.mask()
    }

    pub fn cards(self) -> [Card; 2] {
        [self.0, self.1]
    }

    pub fn overlaps(self, other: Combo) -> bool {
        self.mask() & other.mask() != 0
    }

    /// All 1326 two-card combos.
    pub fn all() -> Vec<Combo> {
        let mut out = Vec::with_capacity(1326);
        for a in 0..52u8 {
            for b in 0..a {
                out.push(Combo(Card(a), Card(b)));
            }
        }
        out
    }
}

impl fmt::Display for Combo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.0, self.1)
    }
}

impl FromStr for Combo {
    type Err = PokerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() != 4 || !s.is_ascii() {
            return Err(PokerError::BadCard(s.to_string()));
        }
        Combo::new(s[..2].parse()?, s[2..].parse()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn card_text_round_trip() {
        for c in Card::deck() {
            assert_eq!(c.to_string().parse::<Card>().unwrap(), c);
        }
        assert!("1s".parse::<Card>().is_err());
        assert!("Asx".parse::<Card>().is_err());
    }

    #[test]
    fn combos() {
        assert_eq!(Combo::all().len(), 1326);
        let c: Combo = "KdAs".parse().unwrap();
        assert_eq!(c.to_string(), "AsKd");
        assert!("AsAs".parse::<Combo>().is_err());
    }
}
