//! Coefficient fields for the two numeric backends.
//!
//! Every [`Jet`](crate::weil::Jet) stores its coefficients in a [`Scalar`].
//! Exact arithmetic uses [`BigRational`]; approximate arithmetic uses `f64`.
//! The backend is a type parameter, so jets of different backends can never
//! be combined by accident.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Numeric backend selector, as it appears in algebra descriptions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Approx,
}

impl Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => f.write_str("exact"),
            Backend::Approx => f.write_str("approx"),
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(Backend::Exact),
            "approx" => Ok(Backend::Approx),
            other => Err(format!("unknown backend `{other}` (expected exact or approx)")),
        }
    }
}

/// Transcendental functions available on the approximate backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transcendental {
    Exp,
    Sin,
    Cos,
    Log,
}

impl Transcendental {
    pub fn name(self) -> &'static str {
        match self {
            Transcendental::Exp => "exp",
            Transcendental::Sin => "sin",
            Transcendental::Cos => "cos",
            Transcendental::Log => "log",
        }
    }
}

/// A coefficient field.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const BACKEND: Backend;

    fn from_i64(n: i64) -> Self;

    /// Nearest representable value (exact on the rational backend).
    fn from_rational(q: &BigRational) -> Self;

    /// The value as a rational, when it is one (always on the exact backend,
    /// for every finite float on the approximate one).
    fn to_rational(&self) -> Option<BigRational>;

    fn to_f64(&self) -> f64;

    /// The float as a scalar (exact conversion on the rational backend).
    fn from_f64(x: f64) -> Option<Self>;

    fn abs(&self) -> Self;

    /// Square root, or `None` when the result is not representable
    /// (negative input, or an exact value that is not a perfect square).
    fn try_sqrt(&self) -> Option<Self>;

    /// Transcendental value at `self`, or `None` when the backend refuses
    /// transcendental evaluation or the argument is outside the domain.
    fn transcendental(&self, f: Transcendental) -> Option<Self>;

    /// `|self| <= tol`. Exact scalars ignore the tolerance.
    fn is_negligible(&self, tol: f64) -> bool;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
}

impl Scalar for BigRational {
    const BACKEND: Backend = Backend::Exact;

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn try_sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let root_num = exact_isqrt(self.numer())?;
        let root_den = exact_isqrt(self.denom())?;
        Some(BigRational::new(root_num, root_den))
    }

    fn transcendental(&self, _f: Transcendental) -> Option<Self> {
        None
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Approx;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_rational(q: &BigRational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }

    fn to_rational(&self) -> Option<BigRational> {
        BigRational::from_float(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn try_sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }

    fn transcendental(&self, f: Transcendental) -> Option<Self> {
        let v = match f {
            Transcendental::Exp => self.exp(),
            Transcendental::Sin => self.sin(),
            Transcendental::Cos => self.cos(),
            Transcendental::Log => {
                if *self <= 0.0 {
                    return None;
                }
                self.ln()
            }
        };
        v.is_finite().then_some(v)
    }

    fn is_negligible(&self, tol: f64) -> bool {
        f64::abs(*self) <= tol
    }
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p/q`, an integer, or a plain decimal such as `-0.125` into a rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num = parse_decimal(num.trim())?;
        let den = parse_decimal(den.trim())?;
        if den.is_zero() {
            return None;
        }
        return Some(num / den);
    }
    parse_decimal(text)
}

fn parse_decimal(text: &str) -> Option<BigRational> {
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    if body.is_empty() {
        return None;
    }
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let q = BigRational::new(numer, denom);
    Some(if negative { -q } else { q })
}

/// Renders a scalar the way the command line and JSON surfaces expect:
/// `p/q` for exact values, shortest round-trip decimal for floats.
pub fn render<S: Scalar>(s: &S) -> String {
    match S::BACKEND {
        Backend::Exact => format_rational(&s.to_rational().expect("exact scalars are rational")),
        Backend::Approx => format!("{}", s.to_f64()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn exact_sqrt_of_perfect_squares() {
        assert_eq!(q(9, 4).try_sqrt(), Some(q(3, 2)));
        assert_eq!(q(2, 1).try_sqrt(), None);
        assert_eq!(q(-1, 1).try_sqrt(), None);
        assert_eq!(q(16, 25).try_sqrt(), Some(q(4, 5)));
    }

    #[test]
    fn exact_refuses_transcendentals() {
        assert!(q(0, 1).transcendental(Transcendental::Exp).is_none());
        assert!(1.0f64.transcendental(Transcendental::Exp).is_some());
        assert!((-1.0f64).transcendental(Transcendental::Log).is_none());
    }

    #[test]
    fn parses_rationals_and_decimals() {
        assert_eq!(parse_rational("1/3"), Some(q(1, 3)));
        assert_eq!(parse_rational("-0.125"), Some(q(-1, 8)));
        assert_eq!(parse_rational("7"), Some(q(7, 1)));
        assert_eq!(parse_rational("3/7"), Some(q(3, 7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
    }

    #[test]
    fn renders_per_backend() {
        assert_eq!(render(&q(-3, 4)), "-3/4");
        assert_eq!(render(&q(6, 3)), "2");
        assert_eq!(render(&0.25f64), "0.25");
    }
}
