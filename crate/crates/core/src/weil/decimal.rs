use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{Jet, WeilError};
use crate::scalar::Scalar;

/// Decimal string of a global element, rounded half away from zero to
/// `places` digits after the point.
///
/// Jets with any nonzero nilpotent coefficient are rejected with
/// [`WeilError::NotGlobal`]: no finite list of digits singles one out.
pub fn decimal_expand<S: Scalar>(x: &Jet<S>, places: usize) -> Result<String, WeilError> {
    if x.has_nilpotent_part() {
        return Err(WeilError::NotGlobal);
    }
    let q = x
        .std_part()
        .to_rational()
        .ok_or_else(|| WeilError::Domain("value is not finite".into()))?;
    Ok(round_decimal(&q, places))
}

pub(crate) fn round_decimal(q: &BigRational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled: BigRational = Signed::abs(q) * BigRational::from_integer(scale);
    // floor(|q| * 10^p + 1/2)
    let twice: BigInt = scaled.numer() * 2 + scaled.denom();
    let rounded = twice.div_floor(&(scaled.denom() * 2));
    let digits = rounded.to_string();
    let negative = q.is_negative() && !rounded.is_zero();
    let body = if places == 0 {
        digits
    } else {
        let padded = format!("{digits:0>width$}", width = places + 1);
        let (int, frac) = padded.split_at(padded.len() - places);
        format!("{int}.{frac}")
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}
