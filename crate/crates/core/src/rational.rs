//! Exact rational weights.
//!
//! Weights are `num`'s arbitrary precision `BigRational`, which keeps every
//! value in lowest terms with a positive denominator. This module only adds
//! the textual `num/den` form used by files and JSON reports.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `num/den` or a bare integer.
pub fn parse(text: &str) -> Result<Rational, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| format!("bad numerator in {text:?}"))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| format!("bad denominator in {text:?}"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in {text:?}"));
    }
    Ok(Rational::new(num, den))
}

/// Always `num/den`, including integers (`1/1`).
pub fn to_exact(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if d != 0.0 => n / d,
        _ => f64::NAN,
    }
}

/// `num/den (0.xxxxxx)` for human reports.
pub fn to_human(r: &Rational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    format!("{}/{} ({:.6})", r.numer(), r.denom(), to_f64(r))
}

pub fn sum<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values.into_iter().fold(Rational::zero(), |acc, v| acc + v)
}

pub fn is_probability_vector(values: &[Rational]) -> bool {
    values.iter().all(|v| !v.is_negative()) && sum(values).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("3/4").unwrap(), frac(3, 4));
        assert_eq!(parse("6/8").unwrap(), frac(3, 4));
        assert_eq!(parse(" 2 ").unwrap(), int(2));
        assert_eq!(parse("-1/2").unwrap(), frac(-1, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("x/2").is_err());
    }

    #[test]
    fn exact_text() {
        assert_eq!(to_exact(&frac(2, 4)), "1/2");
        assert_eq!(to_exact(&int(1)), "1/1");
        assert_eq!(to_exact(&frac(3, -2)), "-3/2");
        assert_eq!(to_human(&frac(1, 4)), "1/4 (0.250000)");
    }
}
