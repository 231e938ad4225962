//! Numeric abstraction shared by the game model, the sequence form and the
//! LP solver.
//!
//! Everything numeric in this crate is generic over [`Scalar`]. Floating point
//! (`f32`, `f64`) uses small absolute tolerances; [`Rational`] is exact and
//! every tolerance collapses to zero.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::lp::{LpProblem, LpSolution};

/// Arbitrary-precision rational.
pub type Rational = BigRational;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialOrd
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// True when arithmetic is exact; tolerances are then zero.
    const EXACT: bool;

    /// Pivot/feasibility tolerance used by the simplex solver.
    fn lp_tolerance() -> Self;

    /// Tolerance used when checking that probabilities sum to one.
    fn probability_tolerance() -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_big_ratio(num: &BigInt, den: &BigInt) -> Self;

    /// Parses a decimal (`-1.25`, `3e-2`) or a ratio (`p/q`).
    fn parse_number(text: &str) -> Option<Self>;

    /// Text written to `.efg` files. Must parse back to an identical value.
    fn to_efg_string(&self) -> String;

    /// LP backend for this scalar.
    fn solve_lp(problem: &LpProblem<Self>) -> LpSolution<Self> {
        crate::lp::simplex(problem)
    }

    /// Probability text: a ratio when one with a small denominator reproduces
    /// the value exactly, otherwise a 17 significant digit decimal.
    fn to_probability_string(&self) -> String {
        self.to_efg_string()
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("finite value")
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

fn split_ratio(text: &str) -> Option<(&str, &str)> {
    let mut parts = text.splitn(2, '/');
    let num = parts.next()?.trim();
    let den = parts.next()?.trim();
    Some((num, den))
}

/// Finds `p/q` with `q <= max_den` whose floating-point quotient is exactly `v`.
fn small_ratio(v: f64, max_den: i64) -> Option<(i64, i64)> {
    if !v.is_finite() {
        return None;
    }
    if v.fract() == 0.0 && v.abs() < 1e15 {
        return Some((v as i64, 1));
    }
    // Continued-fraction convergents.
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut x = v;
    for _ in 0..64 {
        let a = x.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        if (h2 as f64) / (k2 as f64) == v {
            return Some((h2 as i64, k2 as i64));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = x - a;
        if frac == 0.0 {
            break;
        }
        x = 1.0 / frac;
    }
    None
}

macro_rules! float_scalar {
    ($t:ty, $lp_tol:expr, $prob_tol:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn lp_tolerance() -> Self {
                $lp_tol
            }

            fn probability_tolerance() -> Self {
                $prob_tol
            }

            fn from_ratio(num: i64, den: i64) -> Self {
                num as $t / den as $t
            }

            fn from_big_ratio(num: &BigInt, den: &BigInt) -> Self {
                let r = BigRational::new(num.clone(), den.clone());
                r.to_f64().map(|v| v as $t).unwrap_or(<$t>::NAN)
            }

            fn parse_number(text: &str) -> Option<Self> {
                let text = text.trim();
                if let Some((n, d)) = split_ratio(text) {
                    let n = BigInt::from_str(n).ok()?;
                    let d = BigInt::from_str(d).ok()?;
                    if d.is_zero() {
                        return None;
                    }
                    return Some(Self::from_big_ratio(&n, &d));
                }
                text.parse::<$t>().ok().filter(|v| v.is_finite())
            }

            fn solve_lp(problem: &LpProblem<Self>) -> LpSolution<Self> {
                crate::lp::solve_microlp(problem)
            }

            fn to_efg_string(&self) -> String {
                // Rust's Display is the shortest text that round-trips; -0 is
                // written as 0.
                if *self == 0.0 {
                    "0".to_string()
                } else {
                    format!("{}", self)
                }
            }

            fn to_probability_string(&self) -> String {
                match small_ratio(*self as f64, 100_000_000) {
                    Some((n, 1)) => format!("{}", n),
                    Some((n, d)) if (n as $t) / (d as $t) == *self => format!("{}/{}", n, d),
                    _ => format!("{:.16e}", self),
                }
            }
        }
    };
}

float_scalar!(f64, 1e-9, 1e-12);
float_scalar!(f32, 1e-5, 1e-6);

impl Scalar for Rational {
    const EXACT: bool = true;

    fn lp_tolerance() -> Self {
        Rational::zero()
    }

    fn probability_tolerance() -> Self {
        Rational::zero()
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_big_ratio(num: &BigInt, den: &BigInt) -> Self {
        Rational::new(num.clone(), den.clone())
    }

    fn parse_number(text: &str) -> Option<Self> {
        let text = text.trim();
        if let Some((n, d)) = split_ratio(text) {
            let n = BigInt::from_str(n).ok()?;
            let d = BigInt::from_str(d).ok()?;
            if d.is_zero() {
                return None;
            }
            return Some(Rational::new(n, d));
        }
        parse_decimal(text)
    }

    fn to_efg_string(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

/// Exact parse of a decimal literal with optional exponent.
fn parse_decimal(text: &str) -> Option<Rational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(pos) => (&digits[..pos], &digits[pos + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{}{}", int_part, frac_part);
    let mut num = BigInt::from_str(if all.is_empty() { "0" } else { &all }).ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut den = BigInt::one();
    if scale >= 0 {
        num *= num_traits::pow(ten, scale as usize);
    } else {
        den = num_traits::pow(ten, (-scale) as usize);
    }
    if neg {
        num = -num;
    }
    Some(Rational::new(num, den))
}

/// Exact rational value of a finite float (every float is a dyadic rational).
pub fn rational_from_f64(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}

/// Greatest common divisor helper for `u64` counts.
pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_and_ratios() {
        assert_eq!(f64::parse_number("0.5"), Some(0.5));
        assert_eq!(f64::parse_number("1/4"), Some(0.25));
        assert_eq!(f64::parse_number(" -3 "), Some(-3.0));
        assert_eq!(f64::parse_number("1/0"), None);
        assert_eq!(Rational::parse_number("0.125"), Some(Rational::from_ratio(1, 8)));
        assert_eq!(Rational::parse_number("-2.5e1"), Some(Rational::from_ratio(-25, 1)));
        assert_eq!(Rational::parse_number("6/4"), Some(Rational::from_ratio(3, 2)));
        assert_eq!(Rational::parse_number("abc"), None);
    }

    #[test]
    fn probability_text_prefers_small_ratios() {
        assert_eq!((1.0f64 / 3.0).to_probability_string(), "1/3");
        assert_eq!(0.5f64.to_probability_string(), "1/2");
        assert_eq!(1.0f64.to_probability_string(), "1");
        let odd = std::f64::consts::PI / 10.0;
        let text = odd.to_probability_string();
        assert_eq!(f64::parse_number(&text), Some(odd));
    }

    #[test]
    fn float_text_round_trips() {
        for v in [0.1f64, -1e-300, 123456.789, 1.0 / 7.0] {
            assert_eq!(f64::parse_number(&v.to_efg_string()), Some(v));
        }
    }
}
