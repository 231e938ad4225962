//! Exact preflop all-in equities.
//!
//! Ordered pairs of hole-card combos are grouped into classes that are equal
//! up to a relabeling of suits. One representative per class is evaluated
//! against all C(48,5) boards; the class weight counts the concrete ordered
//! deals it stands for, so weights sum to 1326 * 1225.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use super::cards::{Card, Combo};
use super::eval::eval_mask;
use super::hands::CanonicalHand;
use super::PokerError;
use crate::scalar::Rational;

/// Number of five-card boards left once four hole cards are dealt.
pub const BOARDS: u64 = 1_712_304;
/// Ordered concrete deals of two disjoint combos.
pub const DEALS: u64 = 1326 * 1225;

const SUIT_PERMS: [[u8; 4]; 24] = {
    let mut out = [[0u8; 4]; 24];
    let mut n = 0;
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                let d = 6 - a - b - c;
                if a != b && a != c && b != c && d < 4 && d != a && d != b && d != c {
                    out[n] = [a as u8, b as u8, c as u8, d as u8];
                    n += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
};

/// Canonical key of an ordered matchup under suit relabeling.
pub fn class_key(hero: Combo, villain: Combo) -> [u8; 4] {
    let mut best = [u8::MAX; 4];
    for perm in &SUIT_PERMS {
        let map = |c: Card| c.with_suit(perm[c.suit() as usize]);
        let h = Combo::new(map(hero.0), map(hero.1)).expect("distinct");
        let v = Combo::new(map(villain.0), map(villain.1)).expect("distinct");
        let key = [h.0.index(), h.1.index(), v.0.index(), v.1.index()];
        if key < best {
            best = key;
        }
    }
    best
}

fn combos_of_key(key: [u8; 4]) -> (Combo, Combo) {
    (
        Combo(Card::from_index(key[0]), Card::from_index(key[1])),
        Combo(Card::from_index(key[2]), Card::from_index(key[3])),
    )
}

/// Wins, ties and losses of `hero` over every board.
pub fn showdown_counts(hero: Combo, villain: Combo) -> Result<(u64, u64, u64), PokerError> {
    if hero.overlaps(villain) {
        return Err(PokerError::Overlap(hero.to_string(), villain.to_string()));
    }
    let dead = hero.mask() | villain.mask();
    let rest: Vec<u64> = Card::deck().map(Card::mask).filter(|m| m & dead == 0).collect();
    let (hm, vm) = (hero.mask(), villain.mask());
    let (mut wins, mut ties, mut losses) = (0u64, 0u64, 0u64);
    let n = rest.len();
    for a in 0..n {
        let ma = rest[a];
        for b in a + 1..n {
            let mb = ma | rest[b];
            for c in b + 1..n {
                let mc = mb | rest[c];
                for d in c + 1..n {
                    let md = mc | rest[d];
                    for &me in &rest[d + 1..] {
                        let board = md | me;
                        let h = eval_mask(board | hm);
                        let v = eval_mask(board | vm);
                        match h.cmp(&v) {
                            std::cmp::Ordering::Greater => wins += 1,
                            std::cmp::Ordering::Equal => ties += 1,
                            std::cmp::Ordering::Less => losses += 1,
                        }
                    }
                }
            }
        }
    }
    Ok((wins, ties, losses))
}

/// `(wins + ties / 2) / boards` as an exact rational.
pub fn equity_exact(hero: Combo, villain: Combo) -> Result<Rational, PokerError> {
    let (w, t, _) = showdown_counts(hero, villain)?;
    Ok(Rational::new(BigInt::from(2 * w + t), BigInt::from(2 * BOARDS)))
}

/// Monte-Carlo equity estimate over `samples` random boards.
pub fn equity_monte_carlo<R: Rng>(hero: Combo, villain: Combo, samples: u64, rng: &mut R) -> Result<f64, PokerError> {
    if hero.overlaps(villain) {
        return Err(PokerError::Overlap(hero.to_string(), villain.to_string()));
    }
    let dead = hero.mask() | villain.mask();
    let mut rest: Vec<u64> = Card::deck().map(Card::mask).filter(|m| m & dead == 0).collect();
    let mut score = 0u64;
    for _ in 0..samples {
        // partial Fisher-Yates for five cards
        let mut board = 0u64;
        for i in 0..5 {
            let j = rng.gen_range(i..rest.len());
            rest.swap(i, j);
            board |= rest[i];
        }
        let h = eval_mask(board | hero.mask());
        let v = eval_mask(board | villain.mask());
        score += match h.cmp(&v) {
            std::cmp::Ordering::Greater => 2,
            std::cmp::Ordering::Equal => 1,
            std::cmp::Ordering::Less => 0,
        };
    }
    Ok(score as f64 / (2 * samples) as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatchupClass {
    pub hero: Combo,
    pub villain: Combo,
    /// Ordered concrete deals represented by this class.
    pub weight: u64,
    pub equity: Rational,
}

/// Aggregate over all concrete deals of two canonical hands.
#[derive(Clone, Debug, PartialEq)]
pub struct HandPairStats {
    pub hero: CanonicalHand,
    pub villain: CanonicalHand,
    pub weight: u64,
    pub equity: Rational,
}

#[derive(Clone, Debug)]
pub struct EquityTable {
    classes: Vec<MatchupClass>,
    index: HashMap<[u8; 4], usize>,
    exact: bool,
}

/// All matchup classes with their weights, in table order.
pub fn enumerate_classes() -> Vec<([u8; 4], u64)> {
    let combos = Combo::all();
    let mut counts: HashMap<[u8; 4], u64> = HashMap::new();
    for &h in &combos {
        for &v in &combos {
            if !h.overlaps(v) {
                *counts.entry(class_key(h, v)).or_insert(0) += 1;
            }
        }
    }
    let mut out: Vec<([u8; 4], u64)> = counts.into_iter().collect();
    out.sort_by_key(|(key, _)| {
        let (h, v) = combos_of_key(*key);
        (CanonicalHand::of(h).index(), CanonicalHand::of(v).index(), *key)
    });
    out
}

impl EquityTable {
    fn from_classes(classes: Vec<MatchupClass>, exact: bool) -> Self {
        let index = classes
            .iter()
            .enumerate()
            .map(|(i, c)| (class_key(c.hero, c.villain), i))
            .collect();
        EquityTable { classes, index, exact }
    }

    /// Solves one direction of every hero/villain pair with `solve`; the
    /// reverse class gets the complement and self-mirrors get exactly 1/2.
    fn build_symmetric<F>(solve: F, exact: bool) -> Self
    where
        F: Fn(usize, Combo, Combo) -> Rational + Sync,
    {
        let keys = enumerate_classes();
        let position: HashMap<[u8; 4], usize> = keys.iter().enumerate().map(|(i, (k, _))| (*k, i)).collect();
        let reverse: Vec<usize> = keys
            .iter()
            .map(|(k, _)| {
                let (h, v) = combos_of_key(*k);
                position[&class_key(v, h)]
            })
            .collect();
        let todo: Vec<usize> = (0..keys.len()).filter(|&i| i < reverse[i]).collect();
        let solved: Vec<(usize, Rational)> = todo
            .par_iter()
            .map(|&i| {
                let (h, v) = combos_of_key(keys[i].0);
                (i, solve(i, h, v))
            })
            .collect();
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        let mut equities: Vec<Option<Rational>> =
            (0..keys.len()).map(|i| (reverse[i] == i).then(|| half.clone())).collect();
        for (i, eq) in solved {
            equities[reverse[i]] = Some(Rational::one() - &eq);
            equities[i] = Some(eq);
        }
        let classes = keys
            .into_iter()
            .zip(equities)
            .map(|((key, weight), eq)| {
                let (hero, villain) = combos_of_key(key);
                MatchupClass { hero, villain, weight, equity: eq.expect("every class solved") }
            })
            .collect();
        Self::from_classes(classes, exact)
    }

    /// Exact enumeration of every class.
    pub fn build_exact(progress: Option<&(dyn Fn(usize, usize) + Sync)>) -> Self {
        let total = enumerate_classes().len();
        let done = std::sync::atomic::AtomicUsize::new(0);
        Self::build_symmetric(
            |_, h, v| {
                let eq = equity_exact(h, v).expect("disjoint representative");
                let n = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
                if let Some(cb) = progress {
                    cb(n, total / 2);
                }
                eq
            },
            true,
        )
    }

    /// Sampled equities; faster but can flip borderline verdicts downstream.
    pub fn build_monte_carlo(samples: u64, seed: u64) -> Self {
        Self::build_symmetric(
            |i, h, v| {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                let eq = equity_monte_carlo(h, v, samples, &mut rng).expect("disjoint");
                Rational::from_float(eq).unwrap_or_else(Rational::zero)
            },
            false,
        )
    }

    pub fn classes(&self) -> &[MatchupClass] {
        &self.classes
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn total_weight(&self) -> u64 {
        self.classes.iter().map(|c| c.weight).sum()
    }

    pub fn class_of(&self, hero: Combo, villain: Combo) -> Result<&MatchupClass, PokerError> {
        if hero.overlaps(villain) {
            return Err(PokerError::Overlap(hero.to_string(), villain.to_string()));
        }
        self.index
            .get(&class_key(hero, villain))
            .map(|&i| &self.classes[i])
            .ok_or_else(|| PokerError::MissingClass(format!("{} vs {}", hero, villain)))
    }

    pub fn equity(&self, hero: Combo, villain: Combo) -> Result<&Rational, PokerError> {
        self.class_of(hero, villain).map(|c| &c.equity)
    }

    /// Weighted aggregates for all 169 x 169 canonical hand pairs, indexed
    /// `[hero.index() * 169 + villain.index()]`.
    pub fn hand_pairs(&self) -> Vec<HandPairStats> {
        let hands = CanonicalHand::all();
        let mut weight = vec![0u64; 169 * 169];
        let mut sum = vec![Rational::zero(); 169 * 169];
        for c in &self.classes {
            let i = CanonicalHand::of(c.hero).index() * 169 + CanonicalHand::of(c.villain).index();
            weight[i] += c.weight;
            sum[i] += &c.equity * Rational::from_integer(BigInt::from(c.weight));
        }
        let mut out = Vec::with_capacity(169 * 169);
        for (i, s) in sum.into_iter().enumerate() {
            let w = weight[i];
            out.push(HandPairStats {
                hero: hands[i / 169],
                villain: hands[i % 169],
                weight: w,
                equity: if w == 0 { Rational::zero() } else { s / Rational::from_integer(BigInt::from(w)) },
            });
        }
        out
    }

    /// Checks the structural identities every table must satisfy.
    pub fn verify(&self) -> Result<(), PokerError> {
        let expected = enumerate_classes();
        if expected.len() != self.classes.len() {
            return Err(PokerError::CorruptTable(format!(
                "{} classes, expected {}",
                self.classes.len(),
                expected.len()
            )));
        }
        if self.total_weight() != DEALS {
            return Err(PokerError::CorruptTable(format!("weights sum to {}", self.total_weight())));
        }
        for c in &self.classes {
            let rev = self.class_of(c.villain, c.hero)?;
            if &c.equity + &rev.equity != Rational::one() {
                return Err(PokerError::CorruptTable(format!("{} vs {} not complementary", c.hero, c.villain)));
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("hand1,hand2,weight,equity_num,equity_den\n");
        for c in &self.classes {
            let _ = writeln!(out, "{},{},{},{},{}", c.hero, c.villain, c.weight, c.equity.numer(), c.equity.denom());
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, PokerError> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == "hand1,hand2,weight,equity_num,equity_den" => {}
            _ => return Err(PokerError::CorruptTable("missing header".into())),
        }
        let mut classes = Vec::new();
        for (n, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let bad = || PokerError::CorruptTable(format!("line {}: {}", n + 2, line));
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != 5 {
                return Err(bad());
            }
            let hero: Combo = f[0].parse().map_err(|_| bad())?;
            let villain: Combo = f[1].parse().map_err(|_| bad())?;
            let weight: u64 = f[2].parse().map_err(|_| bad())?;
            let num: BigInt = f[3].parse().map_err(|_| bad())?;
            let den: BigInt = f[4].parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            classes.push(MatchupClass { hero, villain, weight, equity: Rational::new(num, den) });
        }
        let table = Self::from_classes(classes, true);
        table.verify()?;
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self, PokerError> {
        let text = std::fs::read_to_string(path).map_err(|e| PokerError::Io(format!("{}: {}", path.display(), e)))?;
        Self::from_csv(&text)
    }

    pub fn save(&self, path: &Path) -> Result<(), PokerError> {
        std::fs::write(path, self.to_csv()).map_err(|e| PokerError::Io(format!("{}: {}", path.display(), e)))
    }

    /// Loads a cached table, recomputing (and rewriting the cache) when the
    /// file is missing or fails verification.
    pub fn load_or_build(path: &Path, progress: Option<&(dyn Fn(usize, usize) + Sync)>) -> Result<Self, PokerError> {
        if path.exists() {
            match Self::load(path) {
                Ok(t) => return Ok(t),
                Err(e) => eprintln!("warning: equity cache {} unusable ({}); recomputing", path.display(), e),
            }
        }
        let table = Self::build_exact(progress);
        table.save(path)?;
        Ok(table)
    }
}
