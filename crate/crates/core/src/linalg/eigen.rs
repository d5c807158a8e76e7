use num_complex::Complex64;

use crate::scalar::{Backend, Scalar};
use crate::weil::InternalTruth;

use super::{inner_product, is_hermitian, tolerance, JetMatrix, JetVector, LinalgError, SmoothComplex};

/// Eigenvalue with its eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair<S: Scalar> {
    pub value: SmoothComplex<S>,
    pub vector: JetVector<S>,
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenpairs of a hermitian jet matrix, eigenvalues in descending order of
/// their standard parts.
///
/// The standard part is diagonalized first (directly when diagonal, in
/// closed form for 2x2, by cyclic complex Jacobi otherwise on the
/// approximate backend). The nilpotent remainder is then folded in by
/// Rayleigh-Schrodinger iteration, which terminates after as many rounds as
/// the algebra's nilpotency index. Eigenvectors keep the unperturbed vector's
/// component fixed, so `<u, v> = <u, u>`.
///
/// On the exact backend an eigenvector of the standard part is normalized
/// only when its norm is rational.
pub fn eigen_hermitian<S: Scalar>(a: &JetMatrix<S>) -> Result<Vec<EigenPair<S>>, LinalgError> {
    check_hermitian(a)?;
    let mut pairs = standard_eigenpairs(&a.standard())?;
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(std::cmp::Ordering::Equal));
    let tol = spectral_tol::<S>(a);
    for w in pairs.windows(2) {
        if (w[0].0.clone() - w[1].0.clone()).is_negligible(tol) {
            return Err(LinalgError::DegenerateStandardPart);
        }
    }
    perturb(a, pairs)
}

/// Like [`eigen_hermitian`], starting from a caller-supplied eigenbasis of
/// the standard part (which may have repeated eigenvalues). Pairs are
/// returned in the order of `basis`.
///
/// Within a repeated eigenvalue the supplied vectors must already diagonalize
/// the perturbation; otherwise the residual check reports
/// [`LinalgError::DegenerateStandardPart`].
pub fn eigen_hermitian_with_basis<S: Scalar>(
    a: &JetMatrix<S>,
    basis: &[JetVector<S>],
) -> Result<Vec<EigenPair<S>>, LinalgError> {
    check_hermitian(a)?;
    if basis.len() != a.rows() {
        return Err(LinalgError::MixedDimensions { expected: a.rows(), found: basis.len() });
    }
    let a0 = a.standard();
    let tol = spectral_tol::<S>(a);
    let mut pairs = Vec::with_capacity(basis.len());
    for u in basis {
        let u = u.standard();
        let au = a0.apply(&u)?;
        let num = inner_product(&u, &au)?;
        let den = inner_product(&u, &u)?;
        if den.std_is_negligible(tol) {
            return Err(LinalgError::NotInvertibleNorm);
        }
        let lambda = num.re().std_part().clone() / den.re().std_part().clone();
        let residual = au.checked_sub(&u.scale_real(&lambda))?;
        if !residual.is_negligible(tol) {
            return Err(LinalgError::MalformedInput(
                "supplied vector is not an eigenvector of the standard part".into(),
            ));
        }
        pairs.push((lambda, u));
    }
    perturb(a, pairs)
}

fn check_hermitian<S: Scalar>(a: &JetMatrix<S>) -> Result<(), LinalgError> {
    if is_hermitian(a)? == InternalTruth::Fails {
        return Err(LinalgError::NotHermitian);
    }
    Ok(())
}

fn spectral_tol<S: Scalar>(a: &JetMatrix<S>) -> f64 {
    tolerance::<S>() * a.max_abs().max(1.0)
}

fn perturb<S: Scalar>(a: &JetMatrix<S>, pairs: Vec<(S, JetVector<S>)>) -> Result<Vec<EigenPair<S>>, LinalgError> {
    let alg = a.algebra().clone();
    let tol = spectral_tol::<S>(a);
    let n_part = a.checked_sub(&a.standard())?;
    let rounds = alg.nilpotency_index() as usize + 1;
    let norms: Vec<SmoothComplex<S>> =
        pairs.iter().map(|(_, u)| inner_product(u, u)).collect::<Result<_, _>>()?;

    let mut out = Vec::with_capacity(pairs.len());
    for (p, (lambda0, u)) in pairs.iter().enumerate() {
        let mut shift = SmoothComplex::zero(&alg);
        let mut w = JetVector::zeros(&alg, u.dim());
        if !n_part.is_zero() {
            // reduced resolvent terms u_k / (<u_k,u_k> (lambda_k - lambda0))
            let mut resolvent = Vec::new();
            for (k, (lambda_k, u_k)) in pairs.iter().enumerate() {
                let gap = lambda_k.clone() - lambda0.clone();
                if k == p || gap.is_negligible(tol) {
                    continue;
                }
                let den = norms[k].mul_jet(&crate::weil::Jet::constant(&alg, gap)).invert()?;
                resolvent.push((u_k, den));
            }
            let inv_norm = norms[p].invert()?;
            for _ in 0..rounds {
                let nv = n_part.apply(&u.checked_add(&w)?)?;
                shift = &inner_product(u, &nv)? * &inv_norm;
                let rhs = w.scale(&shift).checked_sub(&nv)?;
                let mut next = JetVector::zeros(&alg, u.dim());
                for (u_k, den) in &resolvent {
                    let c = &inner_product(u_k, &rhs)? * den;
                    next = next.checked_add(&u_k.scale(&c))?;
                }
                w = next;
            }
        }
        let mut value = &SmoothComplex::from_scalars(&alg, lambda0.clone(), S::zero()) + &shift;
        if S::BACKEND == Backend::Approx && value.im().is_negligible(tol) {
            value = SmoothComplex::real(value.re().clone());
        }
        let vector = u.checked_add(&w)?;
        let residual = a.apply(&vector)?.checked_sub(&vector.scale(&value))?;
        if !residual.is_negligible(tol) {
            return Err(LinalgError::DegenerateStandardPart);
        }
        out.push(EigenPair { value, vector });
    }
    Ok(out)
}

/// Eigenpairs of a matrix with constant entries.
fn standard_eigenpairs<S: Scalar>(a0: &JetMatrix<S>) -> Result<Vec<(S, JetVector<S>)>, LinalgError> {
    let n = a0.rows();
    let alg = a0.algebra();
    let tol = spectral_tol::<S>(a0);
    let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || a0.get(i, j).is_negligible(tol)));
    if diagonal {
        return Ok((0..n)
            .map(|i| (a0.get(i, i).re().std_part().clone(), JetVector::unit(alg, n, i)))
            .collect());
    }
    if n == 2 {
        return two_by_two(a0);
    }
    if S::BACKEND == Backend::Exact {
        return Err(LinalgError::UnsupportedExact(format!(
            "eigenvectors of a non-diagonal {n}x{n} matrix need the approximate backend"
        )));
    }
    let m: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let (re, im) = a0.get(i, j).std_part();
                    Complex64::new(re.to_f64(), im.to_f64())
                })
                .collect()
        })
        .collect();
    let (values, vectors) = jacobi_hermitian(m);
    let from = |x: f64| S::from_f64(x).expect("finite float");
    Ok(values
        .into_iter()
        .enumerate()
        .map(|(k, lambda)| {
            let entries = (0..n)
                .map(|i| SmoothComplex::from_scalars(alg, from(vectors[i][k].re), from(vectors[i][k].im)))
                .collect();
            (from(lambda), JetVector::new(alg, entries).expect("same algebra"))
        })
        .collect())
}

fn two_by_two<S: Scalar>(a0: &JetMatrix<S>) -> Result<Vec<(S, JetVector<S>)>, LinalgError> {
    let alg = a0.algebra();
    let a = a0.get(0, 0).re().std_part().clone();
    let d = a0.get(1, 1).re().std_part().clone();
    let b = a0.get(0, 1).standard();
    let two = S::from_i64(2);
    let half_diff = (a.clone() - d.clone()) / two.clone();
    let mean = (a.clone() + d) / two;
    let disc = half_diff.clone() * half_diff + b.norm_sqr().std_part().clone();
    let root = disc
        .try_sqrt()
        .ok_or_else(|| LinalgError::UnsupportedExact("eigenvalues are irrational".into()))?;
    let mut out = Vec::with_capacity(2);
    for lambda in [mean.clone() + root.clone(), mean - root] {
        let v = JetVector::new(alg, vec![b.clone(), SmoothComplex::from_scalars(alg, lambda.clone() - a.clone(), S::zero())])?;
        let norm_sq = inner_product(&v, &v)?.re().std_part().clone();
        let v = match norm_sq.try_sqrt() {
            Some(r) => v.scale_real(&(S::one() / r)),
            None => v,
        };
        out.push((lambda, v));
    }
    Ok(out)
}

/// Cyclic Jacobi for a hermitian matrix. Returns eigenvalues and the unitary
/// whose columns are the eigenvectors.
fn jacobi_hermitian(mut a: Vec<Vec<Complex64>>) -> (Vec<f64>, Vec<Vec<Complex64>>) {
    let n = a.len();
    let mut v: Vec<Vec<Complex64>> =
        (0..n).map(|i| (0..n).map(|j| Complex64::new(f64::from(u8::from(i == j)), 0.0)).collect()).collect();
    let scale: f64 = a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                let phase = apq / r;
                let theta = (a[q][q].re - a[p][p].re) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let upp = Complex64::new(c, 0.0);
                let upq = Complex64::new(s, 0.0);
                let uqp = -phase.conj() * s;
                let uqq = phase.conj() * c;
                for row in a.iter_mut().chain(v.iter_mut()) {
                    let (x, y) = (row[p], row[q]);
                    row[p] = x * upp + y * uqp;
                    row[q] = x * upq + y * uqq;
                }
                for k in 0..n {
                    let (x, y) = (a[p][k], a[q][k]);
                    a[p][k] = upp.conj() * x + uqp.conj() * y;
                    a[q][k] = upq.conj() * x + uqq.conj() * y;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i].re).collect(), v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;
    use crate::scalar::Backend;
    use crate::weil::{AlgebraSpec, Jet};
    use num_rational::BigRational as Q;

    #[test]
    fn sigma3() {
        let alg = AlgebraSpec::reals(Backend::Exact);
        let [_, _, s3] = pauli::<Q>(&alg);
        let pairs = eigen_hermitian(&s3).unwrap();
        assert_eq!(pairs[0].value, SmoothComplex::from_i64(&alg, 1));
        assert_eq!(pairs[1].value, SmoothComplex::from_i64(&alg, -1));
        assert_eq!(pairs[0].vector, JetVector::unit(&alg, 2, 0));
        assert_eq!(pairs[1].vector, JetVector::unit(&alg, 2, 1));
    }

    #[test]
    fn sigma3_plus_eps_sigma1() {
        let alg = AlgebraSpec::square_zero("e", Backend::Exact).unwrap();
        let e = Jet::<Q>::generator(&alg, "e").unwrap();
        let [s1, _, s3] = pauli::<Q>(&alg);
        let h = s3.checked_add(&s1.scale_jet(&e)).unwrap();
        let pairs = eigen_hermitian(&h).unwrap();
        let half_e = SmoothComplex::real(e.scale(&Q::from_ratio(1, 2)));
        assert_eq!(pairs[0].value, SmoothComplex::from_i64(&alg, 1));
        assert_eq!(pairs[1].value, SmoothComplex::from_i64(&alg, -1));
        let up_plus = JetVector::new(&alg, vec![SmoothComplex::one(&alg), half_e.clone()]).unwrap();
        let down_minus = JetVector::new(&alg, vec![-&half_e, SmoothComplex::one(&alg)]).unwrap();
        assert_eq!(pairs[0].vector, up_plus);
        assert_eq!(pairs[1].vector, down_minus);
    }

    #[test]
    fn sigma1_approx() {
        let alg = AlgebraSpec::reals(Backend::Approx);
        let [s1, _, _] = pauli::<f64>(&alg);
        let pairs = eigen_hermitian(&s1).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((pairs[0].value.re().std_part() - 1.0).abs() < 1e-15);
        assert!((pairs[1].value.re().std_part() + 1.0).abs() < 1e-15);
        let v0: Vec<f64> = pairs[0].vector.entries().iter().map(|z| *z.re().std_part()).collect();
        let v1: Vec<f64> = pairs[1].vector.entries().iter().map(|z| *z.re().std_part()).collect();
        assert!((v0[0] - r).abs() < 1e-15 && (v0[1] - r).abs() < 1e-15);
        assert!((v1[0] - r).abs() < 1e-15 && (v1[1] + r).abs() < 1e-15);
    }

    #[test]
    fn sigma2_needs_complex_vectors() {
        let alg = AlgebraSpec::reals(Backend::Exact);
        let [_, s2, _] = pauli::<Q>(&alg);
        let pairs = eigen_hermitian(&s2).unwrap();
        for p in &pairs {
            let lhs = s2.apply(&p.vector).unwrap();
            assert_eq!(lhs, p.vector.scale(&p.value));
        }
    }

    #[test]
    fn degenerate_needs_basis() {
        let alg = AlgebraSpec::reals(Backend::Exact);
        let id = JetMatrix::<Q>::identity(&alg, 2);
        assert_eq!(eigen_hermitian(&id).unwrap_err(), LinalgError::DegenerateStandardPart);
        let basis = vec![JetVector::from_i64s(&alg, &[1, 1]), JetVector::from_i64s(&alg, &[1, -1])];
        let pairs = eigen_hermitian_with_basis(&id, &basis).unwrap();
        assert_eq!(pairs[1].vector, basis[1]);
    }

    #[test]
    fn degenerate_basis_must_diagonalize_perturbation() {
        let alg = AlgebraSpec::square_zero("e", Backend::Exact).unwrap();
        let e = Jet::<Q>::generator(&alg, "e").unwrap();
        let [s1, _, _] = pauli::<Q>(&alg);
        let h = JetMatrix::identity(&alg, 2).checked_add(&s1.scale_jet(&e)).unwrap();
        let std_basis = vec![JetVector::unit(&alg, 2, 0), JetVector::unit(&alg, 2, 1)];
        assert_eq!(eigen_hermitian_with_basis(&h, &std_basis).unwrap_err(), LinalgError::DegenerateStandardPart);
        let adapted = vec![JetVector::from_i64s(&alg, &[1, 1]), JetVector::from_i64s(&alg, &[1, -1])];
        let pairs = eigen_hermitian_with_basis(&h, &adapted).unwrap();
        assert_eq!(pairs[0].value, SmoothComplex::real(e.add_scalar(&Q::from_integer(1.into()))));
    }

    #[test]
    fn rejects_non_hermitian() {
        let alg = AlgebraSpec::reals(Backend::Exact);
        let m = JetMatrix::<Q>::from_i64s(&alg, 2, 2, &[1, 2, 0, 1]);
        assert_eq!(eigen_hermitian(&m).unwrap_err(), LinalgError::NotHermitian);
    }

    #[test]
    fn jacobi_random_hermitian() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let alg = AlgebraSpec::reals(Backend::Approx);
        for n in [3usize, 4, 6] {
            let mut vals = vec![(0.0, 0.0); n * n];
            for i in 0..n {
                vals[i * n + i] = (rng.gen_range(-5.0..5.0), 0.0);
                for j in i + 1..n {
                    let z: (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    vals[i * n + j] = z;
                    vals[j * n + i] = (z.0, -z.1);
                }
            }
            let entries = vals.iter().map(|&(re, im)| SmoothComplex::from_scalars(&alg, re, im)).collect();
            let m = JetMatrix::<f64>::new(&alg, n, n, entries).unwrap();
            let pairs = eigen_hermitian(&m).unwrap();
            let trace: f64 = (0..n).map(|i| vals[i * n + i].0).sum();
            let sum: f64 = pairs.iter().map(|p| p.value.re().std_part()).sum();
            assert!((trace - sum).abs() < 1e-9);
            for w in pairs.windows(2) {
                assert!(w[0].value.re().std_part() >= w[1].value.re().std_part());
            }
        }
    }
}
