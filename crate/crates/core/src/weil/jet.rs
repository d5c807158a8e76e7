use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::Zero;

use super::algebra::{same_algebra, AlgebraSpec, Monomial};
use super::WeilError;
use crate::scalar::{render, Backend, Scalar, Transcendental};

/// An element of a Weil algebra: a standard part plus nilpotent coefficients.
///
/// Coefficients are stored densely over the algebra's monomial basis; index 0
/// is the standard part.
#[derive(Clone)]
pub struct Jet<S> {
    algebra: Arc<AlgebraSpec>,
    coeffs: Vec<S>,
}

/// The four ring operations, for callers that pick one at runtime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
    Neg,
}

/// Applies `op` to `x` and `y` (`y` is only checked for `Neg`).
pub fn ring_arith<S: Scalar>(op: RingOp, x: &Jet<S>, y: &Jet<S>) -> Result<Jet<S>, WeilError> {
    x.check_same(y)?;
    Ok(match op {
        RingOp::Add => x + y,
        RingOp::Sub => x - y,
        RingOp::Mul => x * y,
        RingOp::Neg => -x,
    })
}

impl<S: Scalar> Jet<S> {
    fn assert_backend(algebra: &AlgebraSpec) {
        assert_eq!(
            algebra.backend(),
            S::BACKEND,
            "jet scalar type does not match the algebra's backend"
        );
    }

    pub fn constant(algebra: &Arc<AlgebraSpec>, value: S) -> Self {
        Self::assert_backend(algebra);
        let mut coeffs = vec![S::zero(); algebra.dim()];
        coeffs[0] = value;
        Jet { algebra: algebra.clone(), coeffs }
    }

    pub fn zero(algebra: &Arc<AlgebraSpec>) -> Self {
        Self::constant(algebra, S::zero())
    }

    pub fn one(algebra: &Arc<AlgebraSpec>) -> Self {
        Self::constant(algebra, S::one())
    }

    pub fn from_i64(algebra: &Arc<AlgebraSpec>, n: i64) -> Self {
        Self::constant(algebra, S::from_i64(n))
    }

    /// The named generator, `0` if its power cap is 1.
    pub fn generator(algebra: &Arc<AlgebraSpec>, name: &str) -> Result<Self, WeilError> {
        let g = algebra
            .generator_index(name)
            .ok_or_else(|| WeilError::UnknownGenerator(name.to_string()))?;
        let mut exps = vec![0; algebra.generators().len()];
        exps[g] = 1;
        let mut jet = Self::zero(algebra);
        if let Some(i) = algebra.monomial_index(&Monomial::from_exponents(exps)) {
            jet.coeffs[i] = S::one();
        }
        Ok(jet)
    }

    /// Builds a jet from `(monomial label, coefficient)` pairs. Monomials in the
    /// ideal are dropped; repeated monomials accumulate.
    pub fn from_terms<'a>(
        algebra: &Arc<AlgebraSpec>,
        terms: impl IntoIterator<Item = (&'a str, S)>,
    ) -> Result<Self, WeilError> {
        let mut jet = Self::zero(algebra);
        for (label, c) in terms {
            if let Some(i) = algebra.parse_monomial(label)? {
                let prev = std::mem::replace(&mut jet.coeffs[i], S::zero());
                jet.coeffs[i] = prev + c;
            }
        }
        Ok(jet)
    }

    /// Dense coefficients over `algebra.basis()`.
    pub fn from_coefficients(algebra: &Arc<AlgebraSpec>, coeffs: Vec<S>) -> Result<Self, WeilError> {
        Self::assert_backend(algebra);
        if coeffs.len() != algebra.dim() {
            return Err(WeilError::InvalidSpec(format!(
                "expected {} coefficients, got {}",
                algebra.dim(),
                coeffs.len()
            )));
        }
        Ok(Jet { algebra: algebra.clone(), coeffs })
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        &self.algebra
    }

    pub fn coefficients(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coefficient(&self, label: &str) -> Result<S, WeilError> {
        Ok(match self.algebra.parse_monomial(label)? {
            Some(i) => self.coeffs[i].clone(),
            None => S::zero(),
        })
    }

    /// Nonzero terms as `(monomial label, coefficient)`, standard part first.
    pub fn terms(&self) -> impl Iterator<Item = (String, &S)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.algebra.monomial_label(i), c))
    }

    /// The standard part. This is an external readout of the model, not a
    /// ring homomorphism available inside it.
    pub fn std_part(&self) -> &S {
        &self.coeffs[0]
    }

    pub fn nilpotent_part(&self) -> Self {
        let mut n = self.clone();
        n.coeffs[0] = S::zero();
        n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// All coefficients within `tol` of zero (exact comparison for rationals).
    pub fn is_negligible(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.is_negligible(tol))
    }

    pub fn is_nilpotent(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    pub fn has_nilpotent_part(&self) -> bool {
        self.coeffs[1..].iter().any(|c| !c.is_zero())
    }

    /// Largest coefficient magnitude, as a float.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<(), WeilError> {
        if !same_algebra(&self.algebra, &other.algebra) {
            if self.algebra.backend() != other.algebra.backend() {
                return Err(WeilError::MixedBackends);
            }
            return Err(WeilError::MixedAlgebras);
        }
        Ok(())
    }

    fn assert_same(&self, other: &Self) {
        if let Err(e) = self.check_same(other) {
            panic!("{e}");
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, WeilError> {
        self.check_same(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, WeilError> {
        self.check_same(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, WeilError> {
        self.check_same(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, s: &S) -> Self {
        Jet {
            algebra: self.algebra.clone(),
            coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
        }
    }

    pub fn add_scalar(&self, s: &S) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0].clone() + s.clone();
        out
    }

    fn mul_raw(&self, other: &Self) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![S::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                if let Some(k) = self.algebra.product_index(i, j) {
                    let prev = std::mem::replace(&mut out[k], S::zero());
                    out[k] = prev + a.clone() * b.clone();
                }
            }
        }
        Jet { algebra: self.algebra.clone(), coeffs: out }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.algebra);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_raw(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul_raw(&base);
            }
        }
        acc
    }

    /// `sum_k c[k] * n^k` where `n` is the nilpotent part; `c` is truncated
    /// at the nilpotency index.
    pub(crate) fn compose_series(&self, series: &[S]) -> Self {
        let n = self.nilpotent_part();
        let mut acc = Self::zero(&self.algebra);
        for c in series.iter().rev() {
            acc = acc.mul_raw(&n).add_scalar(c);
        }
        acc
    }

    /// Number of series terms that can contribute: `n^k = 0` for `k >= this`.
    pub(crate) fn series_len(&self) -> usize {
        self.algebra.nilpotency_index() as usize
    }

    /// Multiplicative inverse. Fails exactly when the standard part is zero,
    /// so no nilpotent has an inverse.
    pub fn invert(&self) -> Result<Self, WeilError> {
        let s = self.std_part();
        if s.is_zero() {
            return Err(WeilError::NotInvertible);
        }
        let inv = S::one() / s.clone();
        let mut series = Vec::with_capacity(self.series_len());
        let mut term = inv.clone();
        let neg_inv = -inv;
        for _ in 0..self.series_len() {
            series.push(term.clone());
            term = term * neg_inv.clone();
        }
        Ok(self.compose_series(&series))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, WeilError> {
        self.check_same(other)?;
        Ok(self.mul_raw(&other.invert()?))
    }

    /// Square root via the binomial series around the standard part.
    pub fn sqrt(&self) -> Result<Self, WeilError> {
        let s = self.std_part().clone();
        if s <= S::zero() {
            return Err(WeilError::NotPositive);
        }
        let root = s.try_sqrt().ok_or_else(|| {
            WeilError::UnsupportedExact(format!("sqrt of {} is not rational", render(&s)))
        })?;
        // c_k = binom(1/2, k) * root / s^k
        let half = S::one() / S::from_i64(2);
        let mut series = Vec::with_capacity(self.series_len());
        let mut binom = S::one();
        let mut term = root;
        for k in 0..self.series_len() {
            series.push(binom.clone() * term.clone());
            let kk = S::from_i64(k as i64);
            binom = binom * (half.clone() - kk.clone()) / (kk + S::one());
            term = term / s.clone();
        }
        Ok(self.compose_series(&series))
    }

    /// `exp`, `sin`, `cos` or `log`, extended to jets by Taylor expansion at
    /// the standard part. Rejected on the exact backend.
    pub fn transcendental(&self, f: Transcendental) -> Result<Self, WeilError> {
        let s = self.std_part();
        let value = s.transcendental(f).ok_or_else(|| match (S::BACKEND, f) {
            (Backend::Exact, _) => {
                WeilError::UnsupportedExact(format!("{} needs the approx backend", f.name()))
            }
            (Backend::Approx, Transcendental::Log) => WeilError::NotPositive,
            (Backend::Approx, _) => {
                WeilError::Domain(format!("{} overflows at {}", f.name(), render(s)))
            }
        })?;
        let len = self.series_len();
        let mut derivs: Vec<S> = Vec::with_capacity(len);
        match f {
            Transcendental::Exp => derivs.extend(std::iter::repeat_n(value, len)),
            Transcendental::Sin | Transcendental::Cos => {
                let (sin, cos) = match f {
                    Transcendental::Sin => (value, s.transcendental(Transcendental::Cos).unwrap()),
                    _ => (s.transcendental(Transcendental::Sin).unwrap(), value),
                };
                let cycle = match f {
                    Transcendental::Sin => [sin.clone(), cos.clone(), -sin, -cos],
                    _ => [cos.clone(), -sin.clone(), -cos, sin],
                };
                derivs.extend(cycle.iter().cycle().take(len).cloned());
            }
            Transcendental::Log => {
                // d^k/dx^k log x = (-1)^(k+1) (k-1)! / x^k
                derivs.push(value);
                let mut fact = S::one();
                let mut pow = s.clone();
                for k in 1..len {
                    let sign = if k % 2 == 1 { S::one() } else { -S::one() };
                    derivs.push(sign * fact.clone() / pow.clone());
                    fact = fact * S::from_i64(k as i64);
                    pow = pow * s.clone();
                }
            }
        }
        let mut fact = S::one();
        let series: Vec<S> = derivs
            .into_iter()
            .enumerate()
            .map(|(k, d)| {
                if k > 0 {
                    fact = fact.clone() * S::from_i64(k as i64);
                }
                d / fact.clone()
            })
            .collect();
        Ok(self.compose_series(&series))
    }

    pub fn exp(&self) -> Result<Self, WeilError> {
        self.transcendental(Transcendental::Exp)
    }

    pub fn sin(&self) -> Result<Self, WeilError> {
        self.transcendental(Transcendental::Sin)
    }

    pub fn cos(&self) -> Result<Self, WeilError> {
        self.transcendental(Transcendental::Cos)
    }

    pub fn ln(&self) -> Result<Self, WeilError> {
        self.transcendental(Transcendental::Log)
    }

    /// Re-expresses this jet in `target`, whose leading generators must match
    /// this algebra's generators (as produced by [`AlgebraSpec::extend`]).
    pub fn lift(&self, target: &Arc<AlgebraSpec>) -> Result<Self, WeilError> {
        let gens = self.algebra.generators();
        if target.backend() != self.algebra.backend() {
            return Err(WeilError::MixedBackends);
        }
        if target.generators().len() < gens.len() || target.generators()[..gens.len()] != *gens {
            return Err(WeilError::MixedAlgebras);
        }
        let pad = target.generators().len() - gens.len();
        let mut out = Self::zero(target);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut exps = self.algebra.basis()[i].exponents().to_vec();
            exps.extend(std::iter::repeat_n(0, pad));
            if let Some(k) = target.monomial_index(&Monomial::from_exponents(exps)) {
                out.coeffs[k] = c.clone();
            }
        }
        Ok(out)
    }

    /// Splits a jet of an extended algebra into coefficients of powers of
    /// the last generator, each expressed in `base`.
    pub fn split_last(&self, base: &Arc<AlgebraSpec>) -> Result<Vec<Self>, WeilError> {
        let gens = self.algebra.generators();
        let k = base.generators().len();
        if gens.len() != k + 1 || gens[..k] != *base.generators() {
            return Err(WeilError::MixedAlgebras);
        }
        let top = gens[k].power as usize;
        let mut out = vec![Self::zero(base); top];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let exps = self.algebra.basis()[i].exponents();
            let power = exps[k] as usize;
            let idx = base
                .monomial_index(&Monomial::from_exponents(exps[..k].to_vec()))
                .ok_or(WeilError::MixedAlgebras)?;
            out[power].coeffs[idx] = c.clone();
        }
        Ok(out)
    }

    /// Converts to another backend through rationals / floats.
    pub fn convert<T: Scalar>(&self, target: &Arc<AlgebraSpec>) -> Result<Jet<T>, WeilError> {
        if target.generators() != self.algebra.generators() || target.dim() != self.algebra.dim() {
            return Err(WeilError::MixedAlgebras);
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                c.to_rational()
                    .map(|q| T::from_rational(&q))
                    .ok_or_else(|| WeilError::InvalidSpec("non-finite coefficient".into()))
            })
            .collect::<Result<Vec<T>, _>>()?;
        Jet::from_coefficients(target, coeffs)
    }
}

impl<S: Scalar> PartialEq for Jet<S> {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.coeffs == other.coeffs
    }
}

impl<S: Scalar> fmt::Debug for Jet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet({self})")
    }
}

impl<S: Scalar> fmt::Display for Jet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (label, c) in self.terms() {
            let text = render(c);
            let (negative, magnitude) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            if label == "1" {
                f.write_str(&magnitude)?;
            } else if magnitude == "1" {
                f.write_str(&label)?;
            } else {
                write!(f, "{magnitude}*{label}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl<'a, S: Scalar> Add for &'a Jet<S> {
    type Output = Jet<S>;

    fn add(self, rhs: &'a Jet<S>) -> Jet<S> {
        self.assert_same(rhs);
        Jet {
            algebra: self.algebra.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<'a, S: Scalar> Sub for &'a Jet<S> {
    type Output = Jet<S>;

    fn sub(self, rhs: &'a Jet<S>) -> Jet<S> {
        self.assert_same(rhs);
        Jet {
            algebra: self.algebra.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<'a, S: Scalar> Mul for &'a Jet<S> {
    type Output = Jet<S>;

    fn mul(self, rhs: &'a Jet<S>) -> Jet<S> {
        self.assert_same(rhs);
        self.mul_raw(rhs)
    }
}

impl<S: Scalar> Neg for &Jet<S> {
    type Output = Jet<S>;

    fn neg(self) -> Jet<S> {
        Jet {
            algebra: self.algebra.clone(),
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<S: Scalar> $tr for Jet<S> {
            type Output = Jet<S>;
            fn $m(self, rhs: Jet<S>) -> Jet<S> {
                (&self).$m(&rhs)
            }
        }
        impl<'a, S: Scalar> $tr<&'a Jet<S>> for Jet<S> {
            type Output = Jet<S>;
            fn $m(self, rhs: &'a Jet<S>) -> Jet<S> {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<S: Scalar> Neg for Jet<S> {
    type Output = Jet<S>;

    fn neg(self) -> Jet<S> {
        -&self
    }
}
