use crate::scalar::Scalar;
use crate::weil::{InternalTruth, WeilError};

use super::{inner_product, tolerance, JetMatrix, JetVector, LinalgError, SmoothComplex};

/// Gram matrix `G_ij = <v_i, v_j>`.
pub fn gram_matrix<S: Scalar>(vs: &[JetVector<S>]) -> Result<JetMatrix<S>, LinalgError> {
    let first = vs.first().ok_or(LinalgError::EmptyFamily)?;
    let k = vs.len();
    let mut entries = Vec::with_capacity(k * k);
    for a in vs {
        for b in vs {
            entries.push(inner_product(a, b)?);
        }
    }
    JetMatrix::new(first.algebra(), k, k, entries)
}

/// Linear independence decided on the Gram determinant: holds when it is
/// invertible, fails when it vanishes identically, undecided when it is a
/// nonzero nilpotent.
///
/// More vectors than the dimension always fail, since the Gram determinant
/// of such a family is identically zero.
pub fn linearly_independent<S: Scalar>(vs: &[JetVector<S>]) -> Result<InternalTruth, LinalgError> {
    let Some(first) = vs.first() else {
        return Ok(InternalTruth::Holds);
    };
    for v in vs {
        first.check_compatible(v)?;
    }
    if vs.len() > first.dim() {
        return Ok(InternalTruth::Fails);
    }
    let det = gram_matrix(vs)?.determinant()?;
    let tol = tolerance::<S>();
    Ok(if !det.std_is_negligible(tol) {
        InternalTruth::Holds
    } else if det.is_negligible(tol) {
        InternalTruth::Fails
    } else {
        InternalTruth::Undecided
    })
}

/// Orthonormalizes `basis` in order.
///
/// Fails with [`LinalgError::NotInvertibleNorm`] when an input vector, or a
/// later residual, has a norm that is not apart from zero. Inputs are
/// screened before any square root is taken. On the exact backend every
/// norm must be a rational square root.
pub fn gram_schmidt<S: Scalar>(basis: &[JetVector<S>]) -> Result<Vec<JetVector<S>>, LinalgError> {
    let tol = tolerance::<S>();
    for v in basis {
        if inner_product(v, v)?.std_is_negligible(tol) {
            return Err(LinalgError::NotInvertibleNorm);
        }
    }
    let mut out: Vec<JetVector<S>> = Vec::with_capacity(basis.len());
    for v in basis {
        let mut w = v.clone();
        for e in &out {
            let c = inner_product(e, v)?;
            w = w.checked_sub(&e.scale(&c))?;
        }
        let norm_sq = inner_product(&w, &w)?;
        if norm_sq.std_is_negligible(tol) {
            return Err(LinalgError::NotInvertibleNorm);
        }
        let norm = norm_sq.re().sqrt().map_err(|e| match e {
            WeilError::UnsupportedExact(m) => LinalgError::UnsupportedExact(m),
            other => other.into(),
        })?;
        out.push(w.scale_jet(&norm.invert()?));
    }
    Ok(out)
}

/// Normalizes a vector, when its norm is representable.
pub fn normalize<S: Scalar>(v: &JetVector<S>) -> Result<JetVector<S>, LinalgError> {
    let mut out = gram_schmidt(std::slice::from_ref(v))?;
    Ok(out.remove(0))
}

/// `eq(<e_i, e_j>, delta_ij)` for every pair.
pub fn is_orthonormal<S: Scalar>(vs: &[JetVector<S>]) -> Result<InternalTruth, LinalgError> {
    let tol = tolerance::<S>();
    let mut verdicts = Vec::new();
    for (i, a) in vs.iter().enumerate() {
        for (j, b) in vs.iter().enumerate().skip(i) {
            let target = SmoothComplex::from_i64(a.algebra(), i64::from(i == j));
            verdicts.push(super::complex_eq(&inner_product(a, b)?, &target, tol));
        }
    }
    Ok(InternalTruth::all(verdicts))
}
