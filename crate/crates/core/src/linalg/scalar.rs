use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::det;
use super::matrix::Matrix;

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Entry type of a [`Matrix`]: `f64` or exact [`Rational`].
pub trait Scalar:
    Clone + Debug + PartialEq + PartialOrd + Signed + Send + Sync + 'static
{
    /// True for the exact rational backing.
    const EXACT: bool;

    fn to_f64(&self) -> f64;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_usize(v: usize) -> Self {
        Self::from_ratio(v as i64, 1)
    }

    /// Score used to pick elimination pivots; larger is preferred and zero
    /// means unusable.
    fn pivot_weight(&self) -> f64;

    /// Whether a pivot should be treated as zero given the magnitude of the
    /// matrix it came from.
    fn negligible_pivot(&self, scale: f64) -> bool;

    fn determinant(m: &Matrix<Self>) -> Self;

    fn leading_minors(m: &Matrix<Self>) -> Vec<Self>;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn pivot_weight(&self) -> f64 {
        self.abs()
    }

    fn negligible_pivot(&self, scale: f64) -> bool {
        self.abs() <= f64::EPSILON * scale.max(f64::MIN_POSITIVE)
    }

    fn determinant(m: &Matrix<Self>) -> Self {
        det::lu_det(m.dim(), m.as_slice())
    }

    fn leading_minors(m: &Matrix<Self>) -> Vec<Self> {
        det::lu_leading_minors(m)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // Ratio::to_f64 only fails on overflow; fall back on the sign.
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn pivot_weight(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }

    fn negligible_pivot(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    fn determinant(m: &Matrix<Self>) -> Self {
        det::bareiss_det(m)
    }

    fn leading_minors(m: &Matrix<Self>) -> Vec<Self> {
        det::bareiss_leading_minors(m)
    }
}

/// Parses `p`, `p/q`, or a plain decimal such as `-0.125` or `2.5e-3`
/// into an exact rational. Decimal text is converted digit by digit, never
/// through an intermediate float.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(at) => (&s[..at], s[at + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().ok()? };
    if negative {
        numer = -numer;
    }
    let shift = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u8);
    let value = if shift >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, shift as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-shift) as usize))
    };
    Some(value)
}

/// Least common multiple of the denominators in `row`.
pub(crate) fn denominator_lcm<'a>(row: impl Iterator<Item = &'a Rational>) -> BigInt {
    row.fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}
