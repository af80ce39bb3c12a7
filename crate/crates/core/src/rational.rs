//! Exact rational arithmetic helpers.
//!
//! Durations and batteries are carried as arbitrary-precision rationals so that
//! schedule values survive normalisation and LP pivoting without rounding.  On
//! the wire they are strings of the form `"p/q"` or `"p"`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = num_rational::BigRational;

/// Parse `"p/q"` or `"p"` into a rational. Whitespace around the parts is accepted.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = |detail: &str| Error::Parse {
        what: format!("rational '{s}'"),
        detail: detail.to_string(),
    };
    let mut parts = s.splitn(2, '/');
    let num = parts
        .next()
        .unwrap()
        .trim()
        .parse::<BigInt>()
        .map_err(|e| bad(&e.to_string()))?;
    let den = match parts.next() {
        Some(d) => d
            .trim()
            .parse::<BigInt>()
            .map_err(|e| bad(&e.to_string()))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad("denominator is zero"));
    }
    Ok(Rat::new(num, den))
}

/// Render a rational as `"p/q"`, or just `"p"` when the denominator is 1.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_from_usize(v: usize) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Greatest common divisor of positive rationals:
/// gcd(p1/q1, p2/q2) = gcd(p1, p2) / lcm(q1, q2).
pub fn rat_gcd(a: &Rat, b: &Rat) -> Rat {
    debug_assert!(a.is_positive() && b.is_positive());
    Rat::new(
        a.numer().gcd(b.numer()),
        a.denom().lcm(b.denom()),
    )
}

/// Least common multiple of the denominators of `values` (1 for an empty slice).
pub fn denominator_lcm(values: &[Rat]) -> BigInt {
    values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Exact conversion from a finite f64 (every finite double is rational).
pub fn rat_from_f64(v: f64) -> Option<Rat> {
    Rat::from_float(v)
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    // Good enough for reporting; exact comparisons stay in rational space.
    let num = r.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let den = r.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    num / den
}
