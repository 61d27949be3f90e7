//! Exact rational helpers shared by the parsers, the LP and the serializers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `-2`, `3.3`, `.5`, `1/3` or `-7/2` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Q> {
    let t = text.trim();
    if t.is_empty() {
        return None;
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = parse_decimal(n.trim())?;
        let d = parse_decimal(d.trim())?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    parse_decimal(t)
}

fn parse_decimal(t: &str) -> Option<Q> {
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let v = Q::new(numer, denom);
    Some(if neg { -v } else { v })
}

/// `p/q` with the denominator omitted when it is one.
pub fn format_q(v: &Q) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Shortest decimal rendering when the value has a finite expansion, else `p/q`.
pub fn format_q_decimal(v: &Q) -> String {
    let mut d = v.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0usize;
    let mut fives = 0usize;
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return format_q(v);
    }
    let digits = twos.max(fives);
    if digits == 0 {
        return v.numer().to_string();
    }
    let scaled = v * Q::from_integer(num_traits::pow(BigInt::from(10), digits));
    let n = scaled.to_integer();
    let sign = if n.is_negative() { "-" } else { "" };
    let s = n.abs().to_string();
    let s = format!("{s:0>width$}", width = digits + 1);
    let (i, f) = s.split_at(s.len() - digits);
    format!("{sign}{i}.{f}")
}

pub fn to_f64(v: &Q) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_rational("3.3"), Some(ratio(33, 10)));
        assert_eq!(parse_rational("8.1"), Some(ratio(81, 10)));
        assert_eq!(parse_rational("-2"), Some(q(-2)));
        assert_eq!(parse_rational(".5"), Some(ratio(1, 2)));
        assert_eq!(parse_rational("1/3"), Some(ratio(1, 3)));
        assert_eq!(parse_rational("-7/2"), Some(ratio(-7, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("-"), None);
    }

    #[test]
    fn formatting() {
        assert_eq!(format_q(&ratio(33, 10)), "33/10");
        assert_eq!(format_q(&q(-2)), "-2");
        assert_eq!(format_q_decimal(&ratio(33, 10)), "3.3");
        assert_eq!(format_q_decimal(&ratio(-1, 4)), "-0.25");
        assert_eq!(format_q_decimal(&ratio(1, 3)), "1/3");
        assert_eq!(format_q_decimal(&q(4)), "4");
    }
}
