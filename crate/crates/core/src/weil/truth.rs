use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Jet, WeilError};
use crate::scalar::Scalar;

/// Verdict of an internal predicate, as far as this model can decide it.
///
/// Equality between jets whose difference is a nonzero nilpotent is neither
/// provable nor refutable; such cases report `Undecided`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InternalTruth {
    Holds,
    Fails,
    Undecided,
}

impl InternalTruth {
    pub fn from_bool(b: bool) -> Self {
        if b {
            InternalTruth::Holds
        } else {
            InternalTruth::Fails
        }
    }

    pub fn holds(self) -> bool {
        self == InternalTruth::Holds
    }

    pub fn fails(self) -> bool {
        self == InternalTruth::Fails
    }

    /// Strong Kleene conjunction: any `Fails` wins, then any `Undecided`.
    pub fn and(self, other: Self) -> Self {
        use InternalTruth::*;
        match (self, other) {
            (Fails, _) | (_, Fails) => Fails,
            (Holds, Holds) => Holds,
            _ => Undecided,
        }
    }

    pub fn or(self, other: Self) -> Self {
        use InternalTruth::*;
        match (self, other) {
            (Holds, _) | (_, Holds) => Holds,
            (Fails, Fails) => Fails,
            _ => Undecided,
        }
    }

    pub fn all(verdicts: impl IntoIterator<Item = Self>) -> Self {
        verdicts.into_iter().fold(InternalTruth::Holds, Self::and)
    }
}

impl std::ops::Not for InternalTruth {
    type Output = Self;

    fn not(self) -> Self {
        match self {
            InternalTruth::Holds => InternalTruth::Fails,
            InternalTruth::Fails => InternalTruth::Holds,
            InternalTruth::Undecided => InternalTruth::Undecided,
        }
    }
}

impl fmt::Display for InternalTruth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InternalTruth::Holds => "Holds",
            InternalTruth::Fails => "Fails",
            InternalTruth::Undecided => "Undecided",
        })
    }
}

/// `x = y`: holds when every coefficient of `x - y` vanishes, fails when the
/// standard parts differ, undecided otherwise.
pub fn eq<S: Scalar>(x: &Jet<S>, y: &Jet<S>) -> Result<InternalTruth, WeilError> {
    eq_within(x, y, 0.0)
}

/// [`eq`] with coefficients of magnitude `<= tol` treated as zero
/// (approximate backend only; exact jets ignore `tol`).
pub fn eq_within<S: Scalar>(x: &Jet<S>, y: &Jet<S>, tol: f64) -> Result<InternalTruth, WeilError> {
    let diff = x.checked_sub(y)?;
    Ok(verdict_of_difference(&diff, tol))
}

pub(crate) fn verdict_of_difference<S: Scalar>(diff: &Jet<S>, tol: f64) -> InternalTruth {
    if !diff.std_part().is_negligible(tol) {
        InternalTruth::Fails
    } else if diff.is_negligible(tol) {
        InternalTruth::Holds
    } else {
        InternalTruth::Undecided
    }
}

/// `x # y`: the difference is invertible, i.e. the standard parts differ.
///
/// Apartness is refutable for nilpotent differences (no nilpotent is
/// invertible), so this never returns `Undecided`; `eq` fails exactly when
/// `apart` holds.
pub fn apart<S: Scalar>(x: &Jet<S>, y: &Jet<S>) -> Result<InternalTruth, WeilError> {
    let diff = x.checked_sub(y)?;
    Ok(InternalTruth::from_bool(!diff.std_part().is_zero()))
}

/// `x < y`, decided on standard parts. A nilpotent difference is never
/// strictly ordered, so this never returns `Undecided`.
pub fn less_than<S: Scalar>(x: &Jet<S>, y: &Jet<S>) -> Result<InternalTruth, WeilError> {
    x.check_same(y)?;
    Ok(InternalTruth::from_bool(x.std_part() < y.std_part()))
}

/// Where a jet sits among the infinitesimals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum JetClass {
    Zero,
    /// Nonzero with square zero (an element of `D`).
    FirstOrder,
    /// Standard part zero. In a Weil algebra this coincides both with
    /// nilpotency and with being smaller than every positive rational.
    Nilpotent,
    Invertible,
}

impl fmt::Display for JetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub fn classify<S: Scalar>(x: &Jet<S>) -> JetClass {
    if x.is_zero() {
        JetClass::Zero
    } else if !x.is_nilpotent() {
        JetClass::Invertible
    } else if (x * x).is_zero() {
        JetClass::FirstOrder
    } else {
        JetClass::Nilpotent
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Backend;
    use crate::weil::{AlgebraSpec, Generator};
    use num_rational::BigRational as Q;

    fn setup() -> (std::sync::Arc<AlgebraSpec>, Jet<Q>) {
        let alg = AlgebraSpec::square_zero("e", Backend::Exact).unwrap();
        let e = Jet::generator(&alg, "e").unwrap();
        (alg, e)
    }

    #[test]
    fn negation_table() {
        assert_eq!(!InternalTruth::Holds, InternalTruth::Fails);
        assert_eq!(!InternalTruth::Fails, InternalTruth::Holds);
        assert_eq!(!InternalTruth::Undecided, InternalTruth::Undecided);
    }

    #[test]
    fn infinitesimal_equality_is_undecided() {
        let (alg, e) = setup();
        let zero = Jet::zero(&alg);
        let one = Jet::one(&alg);
        assert_eq!(eq(&e, &zero).unwrap(), InternalTruth::Undecided);
        assert_eq!(apart(&e, &zero).unwrap(), InternalTruth::Fails);
        assert_eq!(eq(&one, &one).unwrap(), InternalTruth::Holds);
        let one_e = &one + &e;
        assert_eq!(apart(&one_e, &one).unwrap(), InternalTruth::Fails);
        assert_eq!(eq(&one_e, &one).unwrap(), InternalTruth::Undecided);
    }

    #[test]
    fn order_examples() {
        let (alg, e) = setup();
        let zero = Jet::zero(&alg);
        let thousandth = Jet::constant(&alg, Q::from_ratio(1, 1000));
        assert_eq!(less_than(&e, &thousandth).unwrap(), InternalTruth::Holds);
        assert_eq!(less_than(&e, &zero).unwrap(), InternalTruth::Fails);
        assert_eq!(less_than(&zero, &e).unwrap(), InternalTruth::Fails);
        assert_eq!(less_than(&zero, &Jet::one(&alg)).unwrap(), InternalTruth::Holds);
    }

    #[test]
    fn classify_examples() {
        let (alg, e) = setup();
        assert_eq!(classify(&e), JetClass::FirstOrder);
        assert_eq!(classify(&Jet::<Q>::zero(&alg)), JetClass::Zero);
        assert_eq!(classify(&e.add_scalar(&Q::from_integer(2.into()))), JetClass::Invertible);
        let cube = AlgebraSpec::new(vec![Generator::new("d", 3)], &[], Backend::Exact).unwrap();
        let d = Jet::<Q>::generator(&cube, "d").unwrap();
        assert_eq!(classify(&d), JetClass::Nilpotent);
        assert_eq!(classify(&(&d * &d)), JetClass::FirstOrder);
    }

    #[test]
    fn kleene_connectives() {
        use InternalTruth::*;
        assert_eq!(Holds.and(Undecided), Undecided);
        assert_eq!(Fails.and(Undecided), Fails);
        assert_eq!(Undecided.or(Holds), Holds);
        assert_eq!(InternalTruth::all([Holds, Holds]), Holds);
        assert_eq!(InternalTruth::all([]), Holds);
    }
}
