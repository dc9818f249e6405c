//! Exact rational scalar used by every predicate in this crate.
//!
//! All geometry is evaluated over arbitrary-precision rationals; there is no
//! floating point anywhere in a predicate. `Rational` is kept in canonical
//! reduced form (positive denominator, coprime numerator/denominator) by
//! construction.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from numerator and denominator; the denominator must be nonzero.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Sign of a rational as -1, 0 or +1.
pub fn sign_of(x: &Rational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Parses an exact coordinate literal.
///
/// Accepted forms: integers (`-3`), fractions (`5/7`), and finite decimals
/// (`2.125`), each converted without precision loss.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::input("empty coordinate literal"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::input(format!("bad numerator in {s:?}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::input(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::input(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::input(format!("bad decimal literal {s:?}")));
        }
        let int_part = if int_part.is_empty() || int_part == "-" || int_part == "+" {
            format!("{int_part}0")
        } else {
            int_part.to_string()
        };
        let whole: BigInt = int_part
            .parse()
            .map_err(|_| Error::input(format!("bad decimal literal {s:?}")))?;
        let frac: BigInt = frac_part
            .parse()
            .map_err(|_| Error::input(format!("bad decimal literal {s:?}")))?;
        let scale = BigInt::from(10u8).pow(frac_part.len() as u32);
        let negative = s.starts_with('-');
        let numer = if negative {
            whole * &scale - frac
        } else {
            whole * &scale + frac
        };
        return Ok(Rational::new(numer, scale));
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| Error::input(format!("bad integer literal {s:?}")))?;
    Ok(Rational::from_integer(n))
}

/// Renders a rational as `p` or `p/q`, the inverse of [`parse_rational`].
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_fractions_and_decimals() {
        assert_eq!(parse_rational("42").unwrap(), rat(42));
        assert_eq!(parse_rational("-7").unwrap(), rat(-7));
        assert_eq!(parse_rational("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("2.125").unwrap(), ratio(17, 8));
        assert_eq!(parse_rational("-0.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational(".25").unwrap(), ratio(1, 4));
    }

    #[test]
    fn rejects_malformed_literals() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1.2.3").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn format_roundtrips() {
        for s in ["5", "-3", "22/7", "-22/7"] {
            let x = parse_rational(s).unwrap();
            assert_eq!(format_rational(&x), s);
        }
        // decimals canonicalize to fractions
        assert_eq!(format_rational(&parse_rational("0.5").unwrap()), "1/2");
    }
}
