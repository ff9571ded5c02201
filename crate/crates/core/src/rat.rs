//! Exact rational scalars used everywhere in the engine.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Parses "p/q" or "p" into an exact rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: Int = num.trim().parse().ok()?;
        let d: Int = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rat::new(n, d))
    } else {
        let n: Int = s.parse().ok()?;
        Some(Rat::from_integer(n))
    }
}

/// Renders a rational as "p" or "p/q".
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// True when the rational is a (possibly negative) integer.
pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

pub fn rat_abs(r: &Rat) -> Rat {
    if r.is_negative() {
        -r.clone()
    } else {
        r.clone()
    }
}
