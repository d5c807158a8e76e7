use crate::linalg::JetMatrix;

use super::{AlgebraElement, GroupElement, LieError};

const MAX_TERMS: usize = 64;

/// Matrix exponential by scaling and squaring with a Taylor core.
///
/// The whole jet matrix is exponentiated at once: the series is summed in
/// the jet-matrix ring, so nilpotent entries are carried through every
/// product and the result agrees with the exact exponential to every order
/// the algebra keeps.
pub fn exp_map(x: &AlgebraElement<f64>) -> Result<GroupElement<f64>, LieError> {
    Ok(GroupElement::unchecked(x.group(), exp_matrix(x.matrix())?))
}

pub(crate) fn exp_matrix(m: &JetMatrix<f64>) -> Result<JetMatrix<f64>, LieError> {
    m.require_square()?;
    let n = m.rows();
    let alg = m.algebra();
    let norm = n as f64 * m.max_abs();
    if !norm.is_finite() {
        return Err(LieError::InvalidArgument("matrix has non-finite entries".into()));
    }
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let a = m.scale_real(&0.5f64.powi(squarings));
    let min_terms = alg.nilpotency_index() as usize + 2;
    let mut sum = JetMatrix::identity(alg, n);
    let mut term = sum.clone();
    for k in 1..=MAX_TERMS {
        term = term.matmul(&a)?.scale_real(&(1.0 / k as f64));
        sum = sum.checked_add(&term)?;
        if k >= min_terms && term.max_abs() <= 1e-18 * sum.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum)?;
    }
    Ok(sum)
}

/// Product integral of a time-dependent generator over `[0, t_end]` by
/// exponential midpoint steps, later steps multiplying on the left:
/// `F = exp(h f(t_{n-1} + h/2)) ... exp(h f(h/2))`.
pub fn lie_integrate<F>(f: F, t_end: f64, steps: usize) -> Result<GroupElement<f64>, LieError>
where
    F: Fn(f64) -> Result<AlgebraElement<f64>, LieError>,
{
    if steps == 0 {
        return Err(LieError::InvalidArgument("steps must be at least 1".into()));
    }
    if !t_end.is_finite() {
        return Err(LieError::InvalidArgument("end time must be finite".into()));
    }
    let h = t_end / steps as f64;
    let mut acc: Option<GroupElement<f64>> = None;
    for k in 0..steps {
        let x = f((k as f64 + 0.5) * h)?;
        let step = exp_map(&x.scale_real(&h))?;
        acc = Some(match acc {
            None => step,
            Some(prev) => step.compose(&prev)?,
        });
    }
    Ok(acc.expect("at least one step"))
}
