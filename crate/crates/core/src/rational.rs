//! Exact rationals for thresholds such as the conductance bound.

use num_rational::Ratio;
use thiserror::Error;

pub type Rational = Ratio<u64>;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot parse {0:?} as a non-negative rational (use \"p/q\", an integer, or a decimal)")]
pub struct RationalParseError(pub String);

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"0.25"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational, RationalParseError> {
    let err = || RationalParseError(s.to_string());
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: u64 = p.trim().parse().map_err(|_| err())?;
        let q: u64 = q.trim().parse().map_err(|_| err())?;
        if q == 0 {
            return Err(err());
        }
        return Ok(Ratio::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| err())? };
        let den = 10u64.pow(frac.len() as u32);
        let num: u64 = frac.parse().map_err(|_| err())?;
        let whole = int.checked_mul(den).and_then(|x| x.checked_add(num)).ok_or_else(err)?;
        return Ok(Ratio::new(whole, den));
    }
    let p: u64 = s.parse().map_err(|_| err())?;
    Ok(Ratio::from_integer(p))
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `"p/q"` form, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Largest integer `x` with `x <= r`.
pub fn floor_u64(r: &Rational) -> u64 {
    r.numer() / r.denom()
}

pub fn ceil_u64(r: &Rational) -> u64 {
    r.numer().div_ceil(*r.denom())
}

/// Exact product, formed in `u128` and reduced before narrowing back.
/// `None` when the reduced result does not fit in `u64`.
pub fn mul(a: &Rational, b: &Rational) -> Option<Rational> {
    let num = (*a.numer() as u128) * (*b.numer() as u128);
    let den = (*a.denom() as u128) * (*b.denom() as u128);
    narrow(num, den)
}

pub fn div(a: &Rational, b: &Rational) -> Option<Rational> {
    if *b.numer() == 0 {
        return None;
    }
    let num = (*a.numer() as u128) * (*b.denom() as u128);
    let den = (*a.denom() as u128) * (*b.numer() as u128);
    narrow(num, den)
}

fn narrow(num: u128, den: u128) -> Option<Rational> {
    let g = num_integer::gcd(num, den).max(1);
    let (num, den) = (num / g, den / g);
    Some(Ratio::new(u64::try_from(num).ok()?, u64::try_from(den).ok()?))
}
