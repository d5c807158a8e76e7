#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational as Q;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sdgqm::linalg::{JetMatrix, JetVector, SmoothComplex};
use sdgqm::weil::{AlgebraSpec, Expr, Func, Jet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn rand_q(rng: &mut impl Rng) -> Q {
    q(rng.gen_range(-9..=9), rng.gen_range(1..=6))
}

pub fn rand_jet(rng: &mut impl Rng, alg: &Arc<AlgebraSpec>) -> Jet<Q> {
    Jet::from_coefficients(alg, (0..alg.dim()).map(|_| rand_q(rng)).collect()).unwrap()
}

pub fn rand_complex(rng: &mut impl Rng, alg: &Arc<AlgebraSpec>) -> SmoothComplex<Q> {
    SmoothComplex::new(rand_jet(rng, alg), rand_jet(rng, alg)).unwrap()
}

/// Random vector with rational Gaussian entries and no nilpotent part.
pub fn rand_vector(rng: &mut impl Rng, alg: &Arc<AlgebraSpec>, n: usize) -> JetVector<Q> {
    let entries = (0..n).map(|_| SmoothComplex::from_scalars(alg, rand_q(rng), rand_q(rng))).collect();
    JetVector::new(alg, entries).unwrap()
}

pub fn rand_matrix(rng: &mut impl Rng, alg: &Arc<AlgebraSpec>, rows: usize, cols: usize) -> JetMatrix<Q> {
    let entries = (0..rows * cols).map(|_| SmoothComplex::from_scalars(alg, rand_q(rng), rand_q(rng))).collect();
    JetMatrix::new(alg, rows, cols, entries).unwrap()
}

fn num(n: i64) -> Expr {
    Expr::Number(q(n, 1))
}

fn bx(e: Expr) -> Box<Expr> {
    Box::new(e)
}

/// Random rational program in `x` built from `+ - * / ^`, negation and `inv`.
pub fn rand_rational_expr(rng: &mut impl Rng, depth: u32) -> Expr {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return if rng.gen_bool(0.5) {
            Expr::Var("x".into())
        } else {
            Expr::Number(q(rng.gen_range(0..=7), rng.gen_range(1..=4)))
        };
    }
    let a = rand_rational_expr(rng, depth - 1);
    match rng.gen_range(0..7) {
        0 => Expr::Add(bx(a), bx(rand_rational_expr(rng, depth - 1))),
        1 => Expr::Sub(bx(a), bx(rand_rational_expr(rng, depth - 1))),
        2 => Expr::Mul(bx(a), bx(rand_rational_expr(rng, depth - 1))),
        3 => Expr::Div(bx(a), bx(rand_rational_expr(rng, depth - 1))),
        4 => Expr::Pow(bx(a), rng.gen_range(0..=4)),
        5 => Expr::Neg(bx(a)),
        _ => Expr::Call(Func::Inv, bx(Expr::Add(bx(num(1)), bx(Expr::Pow(bx(a), 2))))),
    }
}

/// Symbolic derivative with respect to the single variable, by the textbook
/// rules.
pub fn d_dx(e: &Expr) -> Expr {
    use Expr::*;
    match e {
        Number(_) => num(0),
        Var(_) => num(1),
        Neg(a) => Neg(bx(d_dx(a))),
        Add(a, b) => Add(bx(d_dx(a)), bx(d_dx(b))),
        Sub(a, b) => Sub(bx(d_dx(a)), bx(d_dx(b))),
        Mul(a, b) => Add(bx(Mul(bx(d_dx(a)), b.clone())), bx(Mul(a.clone(), bx(d_dx(b))))),
        Div(a, b) => Div(
            bx(Sub(bx(Mul(bx(d_dx(a)), b.clone())), bx(Mul(a.clone(), bx(d_dx(b)))))),
            bx(Pow(b.clone(), 2)),
        ),
        Pow(_, 0) => num(0),
        Pow(a, n) => Mul(bx(Mul(bx(num(i64::from(*n))), bx(Pow(a.clone(), n - 1)))), bx(d_dx(a))),
        Call(f, a) => {
            let da = bx(d_dx(a));
            let outer = match f {
                Func::Sqrt => Div(bx(num(1)), bx(Mul(bx(num(2)), bx(e.clone())))),
                Func::Exp => e.clone(),
                Func::Sin => Call(Func::Cos, a.clone()),
                Func::Cos => Neg(bx(Call(Func::Sin, a.clone()))),
                Func::Log => Call(Func::Inv, a.clone()),
                Func::Inv => Neg(bx(Call(Func::Inv, bx(Pow(a.clone(), 2))))),
            };
            Mul(bx(outer), da)
        }
    }
}

/// Rational orthogonal matrix `(I - A)(I + A)^-1` from a random rational
/// skew-symmetric `A`.
pub fn rational_orthogonal(rng: &mut impl Rng, alg: &Arc<AlgebraSpec>, n: usize) -> JetMatrix<Q> {
    let mut a = JetMatrix::zeros(alg, n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x = rand_q(rng);
            a.set(i, j, SmoothComplex::from_scalars(alg, x.clone(), q(0, 1))).unwrap();
            a.set(j, i, SmoothComplex::from_scalars(alg, -x, q(0, 1))).unwrap();
        }
    }
    let id = JetMatrix::identity(alg, n);
    let plus = id.checked_add(&a).unwrap();
    let minus = id.checked_sub(&a).unwrap();
    // (I - A) and (I + A)^-1 commute
    let cols: Vec<JetVector<Q>> = minus.columns().iter().map(|c| plus.solve(c).unwrap()).collect();
    JetMatrix::from_columns(&cols).unwrap()
}

/// Random invertible rational matrix: a unit lower-triangular factor times
/// a unit upper-triangular one.
pub fn rand_invertible(rng: &mut impl Rng, alg: &Arc<AlgebraSpec>, n: usize) -> JetMatrix<Q> {
    let mut lower = JetMatrix::identity(alg, n);
    let mut upper = JetMatrix::identity(alg, n);
    for i in 0..n {
        for j in 0..i {
            lower.set(i, j, SmoothComplex::from_scalars(alg, rand_q(rng), rand_q(rng))).unwrap();
            upper.set(j, i, SmoothComplex::from_scalars(alg, rand_q(rng), q(0, 1))).unwrap();
        }
    }
    lower.matmul(&upper).unwrap()
}

/// Dimension read off from a basis of a subspace: the basis must be
/// independent and every vector of `spanning` must depend on it.
pub fn reconstructed_dimension(basis: &[JetVector<Q>], spanning: &[JetVector<Q>]) -> usize {
    use sdgqm::linalg::linearly_independent;
    use sdgqm::weil::InternalTruth;
    assert_eq!(linearly_independent(basis).unwrap(), InternalTruth::Holds);
    for w in spanning {
        let mut extended = basis.to_vec();
        extended.push(w.clone());
        assert_eq!(linearly_independent(&extended).unwrap(), InternalTruth::Fails);
    }
    basis.len()
}
