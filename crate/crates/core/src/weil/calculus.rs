use std::fmt;
use std::sync::Arc;

use super::{AlgebraSpec, Expr, Jet, WeilError};
use crate::scalar::{render, Backend, Scalar};

pub const DEFAULT_ORDER_CAP: u32 = 8;

/// Absolute tolerance of the adaptive Simpson rule.
pub const QUADRATURE_TOL: f64 = 1e-10;

/// Subdivision budget of the adaptive Simpson rule.
pub const QUADRATURE_MAX_INTERVALS: usize = 1 << 20;

/// Taylor degree used to recognise polynomial integrands on the exact
/// backend. Integrands must have degree at most half of this.
pub const EXACT_PROBE_DEGREE: u32 = 48;

/// A function of one smooth variable, written against the ring operations
/// so it can be evaluated on jets of any algebra.
pub trait UnaryProgram<S: Scalar> {
    fn apply(&self, x: &Jet<S>) -> Result<Jet<S>, WeilError>;
}

impl<S: Scalar, F> UnaryProgram<S> for F
where
    F: Fn(&Jet<S>) -> Result<Jet<S>, WeilError>,
{
    fn apply(&self, x: &Jet<S>) -> Result<Jet<S>, WeilError> {
        self(x)
    }
}

impl<S: Scalar> UnaryProgram<S> for Expr {
    fn apply(&self, x: &Jet<S>) -> Result<Jet<S>, WeilError> {
        self.eval_at(x)
    }
}

fn run<S: Scalar>(f: &impl UnaryProgram<S>, x: &Jet<S>) -> Result<Jet<S>, WeilError> {
    f.apply(x).map_err(|e| match e {
        WeilError::Evaluation(_) => e,
        other => WeilError::Evaluation(Box::new(other)),
    })
}

/// A value readable as an ordinary number: no nilpotent part.
#[derive(Debug, Clone, PartialEq, PartialOrd)]
pub struct GlobalReal<S>(pub S);

impl<S: Scalar> GlobalReal<S> {
    pub fn value(&self) -> &S {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
}

impl<S: Scalar> fmt::Display for GlobalReal<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(&self.0))
    }
}

/// Standard-part readout. This is an observation made from outside the
/// model, so it is not part of the ring structure and is never used by the
/// ring-law tests.
pub fn std<S: Scalar>(x: &Jet<S>) -> GlobalReal<S> {
    GlobalReal(x.std_part().clone())
}

/// Splits `f` on a fresh square-zero generator `d` adjoined to `base`:
/// returns `(a, b)` with `f(d) = a + d*b`, where `a = f(0)`.
pub fn kl_decompose<S: Scalar>(
    base: &Arc<AlgebraSpec>,
    f: &impl UnaryProgram<S>,
) -> Result<(Jet<S>, Jet<S>), WeilError> {
    let ext = base.extend("d", 2)?;
    let name = &ext.generators().last().expect("extended").name;
    let d = Jet::generator(&ext, name)?;
    let value = run(f, &d)?;
    let value = if Arc::ptr_eq(value.algebra(), &ext) || **value.algebra() == *ext {
        value
    } else {
        value.lift(&ext)?
    };
    let mut parts = value.split_last(base)?.into_iter();
    let a = parts.next().expect("constant part");
    let b = parts.next().expect("d part");
    Ok((a, b))
}

/// `f(x0 + h) = sum_k c_k h^k` up to `h^order`.
pub fn taylor_coefficients<S: Scalar>(
    f: &impl UnaryProgram<S>,
    x0: &S,
    order: u32,
) -> Result<Vec<S>, WeilError> {
    let alg = AlgebraSpec::truncated("h", order, S::BACKEND)?;
    let x = Jet::generator(&alg, "h")?.add_scalar(x0);
    let y = run(f, &x)?;
    (0..=order)
        .map(|k| y.coefficient(&if k == 0 { "1".to_string() } else { format!("h^{k}") }))
        .collect()
}

/// `order`-th derivative of `f` at `x0`, read off the nilpotent expansion.
pub fn derivative<S: Scalar>(
    f: &impl UnaryProgram<S>,
    x0: &S,
    order: u32,
) -> Result<GlobalReal<S>, WeilError> {
    derivative_with_cap(f, x0, order, DEFAULT_ORDER_CAP)
}

pub fn derivative_with_cap<S: Scalar>(
    f: &impl UnaryProgram<S>,
    x0: &S,
    order: u32,
    cap: u32,
) -> Result<GlobalReal<S>, WeilError> {
    if order == 0 || order > cap {
        return Err(WeilError::OrderOutOfRange { order, cap });
    }
    let coeffs = taylor_coefficients(f, x0, order)?;
    let factorial = (1..=order as i64).fold(S::one(), |acc, k| acc * S::from_i64(k));
    Ok(GlobalReal(coeffs[order as usize].clone() * factorial))
}

/// The antiderivative `F` with `F(0) = 0`, evaluated at a jet.
///
/// `F(a) = F(s) + sum_{k>=1} n^k/k! f^(k-1)(s)` with `s` the standard part of
/// `a` and `n = a - s`. `F(s)` comes from adaptive Simpson quadrature on the
/// approximate backend, and from an exact polynomial antiderivative on the
/// exact backend (non-polynomial integrands are rejected there).
pub fn integrate<S: Scalar>(f: &impl UnaryProgram<S>, a: &Jet<S>) -> Result<Jet<S>, WeilError> {
    let s = a.std_part().clone();
    let base = match S::BACKEND {
        Backend::Approx => quadrature(f, &s)?,
        Backend::Exact => exact_antiderivative(f, &s)?,
    };
    let mut out = Jet::constant(a.algebra(), base);
    let k_max = a.algebra().nilpotency_index();
    if k_max > 1 {
        let n = a.nilpotent_part();
        let coeffs = taylor_coefficients(f, &s, k_max - 1)?;
        let mut n_pow = n.clone();
        for (j, c) in coeffs.iter().enumerate().take(k_max as usize - 1) {
            // n^(j+1) * f^(j)(s) / (j+1)!  =  n^(j+1) * c_j / (j+1)
            out = &out + &n_pow.scale(&(c.clone() / S::from_i64(j as i64 + 1)));
            n_pow = &n_pow * &n;
        }
    }
    Ok(out)
}

fn exact_antiderivative<S: Scalar>(f: &impl UnaryProgram<S>, s: &S) -> Result<S, WeilError> {
    let coeffs = taylor_coefficients(f, &S::zero(), EXACT_PROBE_DEGREE)?;
    let half = (EXACT_PROBE_DEGREE / 2) as usize;
    if coeffs[half + 1..].iter().any(|c| !c.is_zero()) {
        return Err(WeilError::UnsupportedExact(format!(
            "integrand is not a polynomial of degree <= {half}"
        )));
    }
    let poly = |x: &S| {
        coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    };
    // spot checks away from the expansion point
    let reals = AlgebraSpec::reals(S::BACKEND);
    for probe in [s.clone(), s.clone() + S::one(), S::from_ratio(-7, 3)] {
        let value = run(f, &Jet::constant(&reals, probe.clone()))?;
        if *value.std_part() != poly(&probe) {
            return Err(WeilError::UnsupportedExact(
                "integrand is not a polynomial".to_string(),
            ));
        }
    }
    let mut total = S::zero();
    let mut power = s.clone();
    for (j, c) in coeffs.iter().enumerate() {
        total = total + c.clone() * power.clone() / S::from_i64(j as i64 + 1);
        power = power * s.clone();
    }
    Ok(total)
}

fn quadrature<S: Scalar>(f: &impl UnaryProgram<S>, upper: &S) -> Result<S, WeilError> {
    let b = upper.to_f64();
    if b == 0.0 {
        return Ok(S::zero());
    }
    let reals = AlgebraSpec::reals(S::BACKEND);
    let eval = |x: f64| -> Result<f64, WeilError> {
        let arg = S::from_f64(x).ok_or_else(|| WeilError::Domain(format!("non-finite abscissa {x}")))?;
        let y = run(f, &Jet::constant(&reals, arg))?.std_part().to_f64();
        if y.is_finite() {
            Ok(y)
        } else {
            Err(WeilError::Evaluation(Box::new(WeilError::Domain(format!(
                "integrand is not finite at {x}"
            )))))
        }
    };
    let value = adaptive_simpson(&eval, 0.0, b, QUADRATURE_TOL, QUADRATURE_MAX_INTERVALS)?;
    S::from_f64(value).ok_or_else(|| WeilError::Domain("quadrature overflow".into()))
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

pub(crate) fn adaptive_simpson(
    f: &dyn Fn(f64) -> Result<f64, WeilError>,
    a: f64,
    b: f64,
    tol: f64,
    max_intervals: usize,
) -> Result<f64, WeilError> {
    let (fa, fb) = (f(a)?, f(b)?);
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let mut stack = vec![Panel { a, b, fa, fm, fb, whole: simpson(a, b, fa, fm, fb), tol, depth: 0 }];
    let mut total = 0.0;
    let mut intervals = 1usize;
    while let Some(p) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let lm = 0.5 * (p.a + m);
        let rm = 0.5 * (m + p.b);
        let (flm, frm) = (f(lm)?, f(rm)?);
        let left = simpson(p.a, m, p.fa, flm, p.fm);
        let right = simpson(m, p.b, p.fm, frm, p.fb);
        let delta = left + right - p.whole;
        if delta.abs() <= 15.0 * p.tol || p.depth >= 60 {
            if p.depth >= 60 && delta.abs() > 15.0 * p.tol {
                return Err(WeilError::QuadratureFailure { tol, intervals });
            }
            total += left + right + delta / 15.0;
            continue;
        }
        intervals += 1;
        if intervals > max_intervals {
            return Err(WeilError::QuadratureFailure { tol, intervals: max_intervals });
        }
        let half = 0.5 * p.tol;
        stack.push(Panel { a: m, b: p.b, fa: p.fm, fm: frm, fb: p.fb, whole: right, tol: half, depth: p.depth + 1 });
        stack.push(Panel { a: p.a, b: m, fa: p.fa, fm: flm, fb: p.fm, whole: left, tol: half, depth: p.depth + 1 });
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weil::parse_expr;
    use num_rational::BigRational as Q;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    fn reals_q() -> Arc<AlgebraSpec> {
        AlgebraSpec::reals(Backend::Exact)
    }

    #[test]
    fn kl_examples() {
        let base = reals_q();
        let (a, b) = kl_decompose::<Q>(&base, &parse_expr("5 + 3*d").unwrap()).unwrap();
        assert_eq!((a.std_part().clone(), b.std_part().clone()), (q(5, 1), q(3, 1)));
        let (a, b) = kl_decompose::<Q>(&base, &parse_expr("(1 + d)^2").unwrap()).unwrap();
        assert_eq!((a.std_part().clone(), b.std_part().clone()), (q(1, 1), q(2, 1)));
        let approx = AlgebraSpec::reals(Backend::Approx);
        let (a, b) = kl_decompose::<f64>(&approx, &parse_expr("sin(d)").unwrap()).unwrap();
        let fd = ((1e-5f64).sin() - (-1e-5f64).sin()) / 2e-5;
        assert_eq!(*a.std_part(), 0.0);
        assert!((b.std_part() - fd).abs() < 1e-6);
    }

    #[test]
    fn kl_reports_domain_failures() {
        let err = kl_decompose::<Q>(&reals_q(), &parse_expr("inv(d)").unwrap()).unwrap_err();
        assert_eq!(err.name(), "EvaluationError");
        assert_eq!(*err.root(), WeilError::NotInvertible);
    }

    #[test]
    fn kl_over_an_infinitesimal_base() {
        // f(d) = (e + d)^2 over base D = {e}: a = e^2 = 0, b = 2e
        let base = AlgebraSpec::square_zero("e", Backend::Exact).unwrap();
        let e = Jet::<Q>::generator(&base, "e").unwrap();
        let f = |d: &Jet<Q>| -> Result<Jet<Q>, WeilError> {
            let e = e.lift(d.algebra())?;
            let s = &e + d;
            Ok(&s * &s)
        };
        let (a, b) = kl_decompose(&base, &f).unwrap();
        assert!(a.is_zero());
        assert_eq!(b, e.scale(&q(2, 1)));
    }

    #[test]
    fn derivative_examples() {
        let cube = parse_expr("x^3").unwrap();
        assert_eq!(derivative(&cube, &q(2, 1), 1).unwrap().0, q(12, 1));
        assert_eq!(derivative(&cube, &q(2, 1), 2).unwrap().0, q(12, 1));
        assert_eq!(derivative(&cube, &q(2, 1), 3).unwrap().0, q(6, 1));
        let e = derivative(&parse_expr("exp(x)").unwrap(), &1.0f64, 1).unwrap().0;
        assert!((e - std::f64::consts::E).abs() < 1e-9);
        assert!(matches!(
            derivative(&cube, &q(2, 1), 9),
            Err(WeilError::OrderOutOfRange { order: 9, cap: 8 })
        ));
        assert!(derivative_with_cap(&cube, &q(2, 1), 9, 12).is_ok());
        assert!(matches!(derivative(&cube, &q(2, 1), 0), Err(WeilError::OrderOutOfRange { .. })));
    }

    #[test]
    fn integrate_exact_polynomials() {
        let sq = parse_expr("x^2").unwrap();
        let one = Jet::<Q>::one(&reals_q());
        assert_eq!(*integrate(&sq, &one).unwrap().std_part(), q(1, 3));
        let d = AlgebraSpec::square_zero("e", Backend::Exact).unwrap();
        let a = Jet::<Q>::generator(&d, "e").unwrap().add_scalar(&q(1, 1));
        let r = integrate(&sq, &a).unwrap();
        assert_eq!(r, Jet::from_terms(&d, [("1", q(1, 3)), ("e", q(1, 1))]).unwrap());
        let zero = Jet::<Q>::zero(&reals_q());
        assert!(integrate(&sq, &zero).unwrap().is_zero());
    }

    #[test]
    fn integrate_exact_rejects_non_polynomials() {
        let f = parse_expr("inv(1 + x^2)").unwrap();
        let one = Jet::<Q>::one(&reals_q());
        assert!(matches!(integrate(&f, &one), Err(WeilError::UnsupportedExact(_))));
    }

    #[test]
    fn integrate_approx_quadrature() {
        let reals = AlgebraSpec::reals(Backend::Approx);
        let f = parse_expr("cos(x)").unwrap();
        let r = integrate(&f, &Jet::constant(&reals, 1.2f64)).unwrap();
        assert!((r.std_part() - 1.2f64.sin()).abs() < 1e-10);
        let g = parse_expr("exp(-x)").unwrap();
        let r = integrate(&g, &Jet::constant(&reals, -2.0f64)).unwrap();
        // int_0^{-2} e^{-x} dx = 1 - e^2
        assert!((r.std_part() - (1.0 - 2.0f64.exp())).abs() < 1e-9);
    }

    #[test]
    fn integrate_approx_with_higher_order_nilpotents() {
        let alg = AlgebraSpec::truncated("h", 3, Backend::Approx).unwrap();
        let a = Jet::<f64>::generator(&alg, "h").unwrap().add_scalar(&0.5);
        let r = integrate(&parse_expr("sin(x)").unwrap(), &a).unwrap();
        // F = 1 - cos; F(0.5+h) = F(.5) + sin(.5) h + cos(.5) h^2/2 - sin(.5) h^3/6
        let expect = [1.0 - 0.5f64.cos(), 0.5f64.sin(), 0.5f64.cos() / 2.0, -0.5f64.sin() / 6.0];
        for (k, e) in expect.iter().enumerate() {
            assert!((r.coefficients()[k] - e).abs() < 1e-10, "k={k}");
        }
    }

    #[test]
    fn quadrature_budget_exhaustion() {
        let f = |x: f64| -> Result<f64, WeilError> { Ok((1.0 / (x + 1e-12)).sin()) };
        assert!(matches!(
            adaptive_simpson(&f, 0.0, 1.0, 1e-14, 64),
            Err(WeilError::QuadratureFailure { .. })
        ));
    }
}
