//! Coefficient fields.
//!
//! Every algebraic object in this crate is generic over [`Scalar`]. Two
//! backends exist: [`Rational`] (arbitrary precision, no rounding) for the
//! identity checks, and `f64` for Gaussian and spectral numerics. Nothing
//! converts between them implicitly; [`Scalar::to_f64`] is the only bridge.

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, MulAssign, Neg, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Rational = BigRational;

/// Relative tolerance used by the floating backend for "structurally equal"
/// checks (symmetry validation, unit-circle checks).
pub const F64_STRUCTURAL_TOL: f64 = 1e-12;

pub trait Scalar:
    Num
    + Clone
    + Debug
    + Display
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Send
    + Sync
    + 'static
{
    /// True for backends that perform no rounding.
    const EXACT: bool;

    fn from_i64(value: i64) -> Self;

    /// `num / den`; panics on a zero denominator.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Equality up to the backend's structural tolerance. Exact for rationals.
    fn near(&self, other: &Self) -> bool;

    fn near_zero(&self) -> bool {
        self.near(&Self::zero())
    }

    fn abs_value(&self) -> Self;

    /// Parse the textual form written by `Display`.
    fn parse_text(text: &str) -> Option<Self>;

    /// Integer power, `exp` may be negative for nonzero `self`.
    fn powi(&self, exp: i32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp.unsigned_abs() {
            acc *= self.clone();
        }
        if exp < 0 {
            Self::one() / acc
        } else {
            acc
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn near(&self, other: &Self) -> bool {
        self == other
    }

    fn abs_value(&self) -> Self {
        self.abs()
    }

    fn parse_text(text: &str) -> Option<Self> {
        parse_rational(text)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(value: i64) -> Self {
        value as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn near(&self, other: &Self) -> bool {
        let scale = 1f64.max(self.abs()).max(other.abs());
        (self - other).abs() <= F64_STRUCTURAL_TOL * scale
    }

    fn abs_value(&self) -> Self {
        self.abs()
    }

    fn parse_text(text: &str) -> Option<Self> {
        text.trim().parse().ok().or_else(|| parse_rational(text).map(|r| Scalar::to_f64(&r)))
    }
}

/// Sign `(-1)^k` as a scalar.
pub fn parity_sign<S: Scalar>(k: usize) -> S {
    if k.is_multiple_of(2) {
        S::one()
    } else {
        -S::one()
    }
}

/// `k!` as a scalar.
pub fn factorial<S: Scalar>(k: usize) -> S {
    (1..=k as i64).fold(S::one(), |acc, i| acc * S::from_i64(i))
}

/// Parse an exact rational from `p`, `p/q`, or a finite decimal such as
/// `-1.25` or `3e-2`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if all_digits.is_empty() {
        BigInt::zero()
    } else {
        BigInt::from_str_radix(&all_digits, 10).ok()?
    };
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    let mut value = BigRational::from_integer(numer) * ten.powi(scale);
    if negative {
        value = -value;
    }
    Some(value)
}

/// Round-trip a rational through its canonical `p/q` form.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_forms() {
        assert_eq!(parse_rational("3/4"), Some(Rational::from_ratio(3, 4)));
        assert_eq!(parse_rational("-1.25"), Some(Rational::from_ratio(-5, 4)));
        assert_eq!(parse_rational("3e-2"), Some(Rational::from_ratio(3, 100)));
        assert_eq!(parse_rational("7"), Some(Rational::from_i64(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }

    #[test]
    fn powi_handles_negative_exponents() {
        let half = Rational::from_ratio(1, 2);
        assert_eq!(half.powi(-3), Rational::from_i64(8));
        assert_eq!(2f64.powi(-2), 0.25);
    }

    #[test]
    fn near_is_exact_for_rationals() {
        let a = Rational::from_ratio(1, 3);
        assert!(a.near(&Rational::from_ratio(2, 6)));
        assert!(!a.near(&Rational::from_ratio(1, 3 + 1)));
        assert!(1.0f64.near(&(1.0 + 1e-14)));
    }
}
