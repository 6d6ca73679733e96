//! Helpers around arbitrary-precision rationals: parsing, formatting,
//! bit sizes and continued-fraction rounding.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `7`, `-3/4`, `0.125` or `-2.5`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Format(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = parse_integer(num).ok_or_else(bad)?;
        let den: BigInt = parse_integer(den).ok_or_else(bad)?;
        if den.is_zero() {
            return Err(Error::Format(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, fraction)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = whole.trim_start_matches(['-', '+']);
        if fraction.is_empty() || !fraction.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        if !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let all: BigInt = format!("{digits}{fraction}").parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), fraction.len());
        let value = Rational::new(all, scale);
        return Ok(if negative { -value } else { value });
    }
    Ok(Rational::from_integer(parse_integer(s).ok_or_else(bad)?))
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let digits = s.trim_start_matches(['-', '+']);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || s.len() - digits.len() > 1 {
        return None;
    }
    s.parse().ok()
}

/// Serialization form: always `numerator/denominator`.
pub fn format_fraction(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Display form: integers without a denominator.
pub fn format_compact(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Bits needed for `|v|`; zero counts as one bit.
pub fn bit_length(v: &BigInt) -> u64 {
    v.bits().max(1)
}

pub fn to_f64(q: &Rational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let num = q.numer().to_f64().unwrap_or(f64::NAN);
    let den = q.denom().to_f64().unwrap_or(f64::NAN);
    num / den
}

pub fn from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::Numeric(format!("non-finite value {x}")))
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// via convergents and the last admissible semiconvergent.
pub fn best_approximation(x: f64, max_den: u64) -> Result<Rational> {
    let target = from_f64(x)?;
    Ok(best_approximation_exact(&target, &BigInt::from(max_den.max(1))))
}

pub fn best_approximation_exact(target: &Rational, max_den: &BigInt) -> Rational {
    if target.denom() <= max_den {
        return target.clone();
    }
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut rest = target.clone();
    loop {
        let a = rest.numer().div_floor(rest.denom());
        let q2 = &q0 + &a * &q1;
        if &q2 > max_den {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let frac_part = &rest - Rational::from_integer(a);
        if frac_part.is_zero() {
            break;
        }
        rest = frac_part.recip();
    }
    let convergent = Rational::new(p1.clone(), q1.clone());
    if q1.is_zero() {
        return Rational::from_integer(target.floor().to_integer());
    }
    let k = (max_den - &q0).div_floor(&q1);
    if k.is_positive() {
        let semi = Rational::new(&p0 + &k * &p1, &q0 + &k * &q1);
        if (&semi - target).abs() < (&convergent - target).abs() {
            return semi;
        }
    }
    convergent
}

pub fn sign_of(q: &Rational) -> Sign {
    if q.is_zero() {
        Sign::NoSign
    } else if q.is_positive() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational("-3/4").unwrap(), frac(-3, 4));
        assert_eq!(parse_rational("0.125").unwrap(), frac(1, 8));
        assert_eq!(parse_rational("-2.5").unwrap(), frac(-5, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("--1").is_err());
    }

    #[test]
    fn fraction_format_round_trips() {
        for q in [int(0), int(-5), frac(5, 3), frac(-7, 12)] {
            assert_eq!(parse_rational(&format_fraction(&q)).unwrap(), q);
        }
        assert_eq!(format_fraction(&int(3)), "3/1");
        assert_eq!(format_compact(&int(3)), "3");
    }

    #[test]
    fn bit_lengths() {
        assert_eq!(bit_length(&BigInt::from(0)), 1);
        assert_eq!(bit_length(&BigInt::from(1)), 1);
        assert_eq!(bit_length(&BigInt::from(3)), 2);
        assert_eq!(bit_length(&BigInt::from(-8)), 4);
    }

    #[test]
    fn continued_fraction_rounding() {
        assert_eq!(best_approximation(0.999999997, 100).unwrap(), int(1));
        assert_eq!(best_approximation(-3.9999998, 1 << 16).unwrap(), int(-4));
        assert_eq!(best_approximation(std::f64::consts::PI, 1000).unwrap(), frac(355, 113));
        assert_eq!(best_approximation(1e-10, 1 << 20).unwrap(), int(0));
        assert_eq!(best_approximation(0.5, 7).unwrap(), frac(1, 2));
    }

    #[test]
    fn semiconvergent_beats_convergent_when_closer() {
        // 0.4375 = 7/16; with denominators <= 9 the best is 4/9, a semiconvergent.
        let best = best_approximation(0.4375, 9).unwrap();
        let target = frac(7, 16);
        for den in 1..=9i64 {
            for num in 0..=den {
                let cand = frac(num, den);
                assert!((&best - &target).abs() <= (&cand - &target).abs());
            }
        }
    }
}
