//! Exact rational scalars and small vector helpers.
//!
//! [`Rational`] is an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator, so structural equality is numeric equality.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational string")]
    Empty,
    #[error("`{0}` is not an exact rational (expected \"p\" or \"p/q\")")]
    Malformed(String),
    #[error("`{0}` has a zero denominator")]
    ZeroDenominator(String),
}

/// Parses `"p"` or `"p/q"` with optional sign. Decimal and exponent forms are
/// rejected so that no float ever enters a computation.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let digits_ok = |t: &str, allow_sign: bool| {
        let body = if allow_sign {
            t.strip_prefix(['-', '+']).unwrap_or(t)
        } else {
            t
        };
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits_ok(num, true) || !digits_ok(den, false) {
        return Err(ParseRationalError::Malformed(s.to_string()));
    }
    let n = BigInt::from_str(num.trim_start_matches('+'))
        .map_err(|_| ParseRationalError::Malformed(s.to_string()))?;
    let d = BigInt::from_str(den).map_err(|_| ParseRationalError::Malformed(s.to_string()))?;
    if d.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(s.to_string()));
    }
    Ok(Rational::new(n, d))
}

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d` in lowest terms. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn ints(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| int(v)).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn is_integral(v: &[Rational]) -> bool {
    v.iter().all(|x| x.is_integer())
}

pub fn scale(v: &[Rational], c: &Rational) -> Vec<Rational> {
    v.iter().map(|x| x * c).collect()
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Least common multiple of the denominators of `v` (1 for the empty vector).
pub fn common_denominator(v: &[Rational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// The unique primitive integer vector that is a positive multiple of `v`.
/// The zero vector maps to the zero vector.
pub fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let den = common_denominator(v);
    let scaled: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&den / x.denom()))
        .collect();
    let g = scaled.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return scaled;
    }
    scaled.into_iter().map(|x| x / &g).collect()
}

/// [`primitive_integer`] returned as rationals.
pub fn primitive_direction(v: &[Rational]) -> Vec<Rational> {
    primitive_integer(v)
        .into_iter()
        .map(Rational::from_integer)
        .collect()
}

pub fn to_rationals(v: &[BigInt]) -> Vec<Rational> {
    v.iter().cloned().map(Rational::from_integer).collect()
}

/// Sign of `x` as -1, 0 or 1.
pub fn sign(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Formats a vector as `(a, b, c)` with canonical rationals.
pub fn format_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_canonical_forms() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("+2/6").unwrap(), rat(1, 3));
        assert_eq!(parse_rational("4/-2").unwrap_err(), ParseRationalError::Malformed("4/-2".into()));
    }

    #[test]
    fn rejects_floats_and_zero_denominators() {
        assert!(matches!(parse_rational("0.5"), Err(ParseRationalError::Malformed(_))));
        assert!(matches!(parse_rational("1e3"), Err(ParseRationalError::Malformed(_))));
        assert!(matches!(parse_rational("1/0"), Err(ParseRationalError::ZeroDenominator(_))));
        assert_eq!(parse_rational(" "), Err(ParseRationalError::Empty));
    }

    #[test]
    fn canonical_display() {
        assert_eq!(rat(4, -6).to_string(), "-2/3");
        assert_eq!(rat(4, 2).to_string(), "2");
    }

    #[test]
    fn primitive_scaling_keeps_sign() {
        let v = vec![rat(-1, 2), rat(3, 4), int(0)];
        let p: Vec<i64> = primitive_integer(&v)
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect();
        assert_eq!(p, vec![-2, 3, 0]);
    }
}
