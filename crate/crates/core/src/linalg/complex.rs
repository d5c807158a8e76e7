use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::scalar::Scalar;
use crate::weil::{AlgebraSpec, InternalTruth, Jet, WeilError};

/// `re + i*im` with jet components over one algebra.
#[derive(Clone, PartialEq)]
pub struct SmoothComplex<S: Scalar> {
    re: Jet<S>,
    im: Jet<S>,
}

impl<S: Scalar> SmoothComplex<S> {
    pub fn new(re: Jet<S>, im: Jet<S>) -> Result<Self, WeilError> {
        re.check_same(&im)?;
        Ok(SmoothComplex { re, im })
    }

    pub fn real(re: Jet<S>) -> Self {
        let im = Jet::zero(re.algebra());
        SmoothComplex { re, im }
    }

    pub fn from_scalars(algebra: &Arc<AlgebraSpec>, re: S, im: S) -> Self {
        SmoothComplex { re: Jet::constant(algebra, re), im: Jet::constant(algebra, im) }
    }

    pub fn from_i64(algebra: &Arc<AlgebraSpec>, n: i64) -> Self {
        Self::real(Jet::from_i64(algebra, n))
    }

    pub fn zero(algebra: &Arc<AlgebraSpec>) -> Self {
        Self::from_i64(algebra, 0)
    }

    pub fn one(algebra: &Arc<AlgebraSpec>) -> Self {
        Self::from_i64(algebra, 1)
    }

    pub fn i(algebra: &Arc<AlgebraSpec>) -> Self {
        Self::from_scalars(algebra, S::zero(), S::one())
    }

    pub fn re(&self) -> &Jet<S> {
        &self.re
    }

    pub fn im(&self) -> &Jet<S> {
        &self.im
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        self.re.algebra()
    }

    pub fn std_part(&self) -> (S, S) {
        (self.re.std_part().clone(), self.im.std_part().clone())
    }

    /// The complex number with only the standard parts kept.
    pub fn standard(&self) -> Self {
        Self::from_scalars(self.algebra(), self.re.std_part().clone(), self.im.std_part().clone())
    }

    pub fn conj(&self) -> Self {
        SmoothComplex { re: self.re.clone(), im: -&self.im }
    }

    /// `re^2 + im^2`.
    pub fn norm_sqr(&self) -> Jet<S> {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        self.re.is_negligible(tol) && self.im.is_negligible(tol)
    }

    pub fn std_is_negligible(&self, tol: f64) -> bool {
        self.re.std_part().is_negligible(tol) && self.im.std_part().is_negligible(tol)
    }

    pub fn has_nilpotent_part(&self) -> bool {
        self.re.has_nilpotent_part() || self.im.has_nilpotent_part()
    }

    pub fn max_abs(&self) -> f64 {
        self.re.max_abs().max(self.im.max_abs())
    }

    pub fn scale(&self, s: &S) -> Self {
        SmoothComplex { re: self.re.scale(s), im: self.im.scale(s) }
    }

    pub fn mul_jet(&self, x: &Jet<S>) -> Self {
        SmoothComplex { re: &self.re * x, im: &self.im * x }
    }

    /// Invertible exactly when the standard part is nonzero.
    pub fn invert(&self) -> Result<Self, WeilError> {
        let inv = self.norm_sqr().invert()?;
        Ok(self.conj().mul_jet(&inv))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, WeilError> {
        self.re.check_same(&other.re)?;
        Ok(self * &other.invert()?)
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<(), WeilError> {
        self.re.check_same(&other.re)
    }
}

/// Complex equality verdict with the same convention as jets: fails when the
/// standard parts differ, holds when the difference vanishes.
pub fn complex_eq<S: Scalar>(x: &SmoothComplex<S>, y: &SmoothComplex<S>, tol: f64) -> InternalTruth {
    let d = x - y;
    if !d.std_is_negligible(tol) {
        InternalTruth::Fails
    } else if d.is_negligible(tol) {
        InternalTruth::Holds
    } else {
        InternalTruth::Undecided
    }
}

/// `x - y` invertible.
pub fn complex_apart<S: Scalar>(x: &SmoothComplex<S>, y: &SmoothComplex<S>, tol: f64) -> InternalTruth {
    InternalTruth::from_bool(!(x - y).std_is_negligible(tol))
}

impl<S: Scalar> Add for &SmoothComplex<S> {
    type Output = SmoothComplex<S>;

    fn add(self, o: Self) -> SmoothComplex<S> {
        SmoothComplex { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<S: Scalar> Sub for &SmoothComplex<S> {
    type Output = SmoothComplex<S>;

    fn sub(self, o: Self) -> SmoothComplex<S> {
        SmoothComplex { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<S: Scalar> Mul for &SmoothComplex<S> {
    type Output = SmoothComplex<S>;

    fn mul(self, o: Self) -> SmoothComplex<S> {
        SmoothComplex {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }
}

impl<S: Scalar> Neg for &SmoothComplex<S> {
    type Output = SmoothComplex<S>;

    fn neg(self) -> SmoothComplex<S> {
        SmoothComplex { re: -&self.re, im: -&self.im }
    }
}

impl<S: Scalar> fmt::Display for SmoothComplex<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "({})i", self.im)
        } else {
            write!(f, "{} + ({})i", self.re, self.im)
        }
    }
}

impl<S: Scalar> fmt::Debug for SmoothComplex<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
