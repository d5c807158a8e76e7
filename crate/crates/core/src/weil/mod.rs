//! The smooth line as Weil-algebra jets.
//!
//! An [`AlgebraSpec`] fixes a finite set of nilpotent generators and the
//! monomial relations between them; a [`Jet`] is an element of that algebra
//! with coefficients in one of the two [`Scalar`](crate::scalar::Scalar)
//! backends. On top of the ring sit the internal-truth predicates
//! ([`eq`], [`apart`], [`less_than`]), derivative extraction through the
//! square-zero generator ([`kl_decompose`], [`derivative`]), and
//! [`integrate`].

mod algebra;
mod calculus;
mod decimal;
mod expr;
mod jet;
mod truth;

pub use algebra::{AlgebraSpec, AlgebraSpecJson, Generator, Monomial, MAX_BASIS};
pub(crate) use algebra::same_algebra;
pub use calculus::{
    derivative, derivative_with_cap, integrate, kl_decompose, std, taylor_coefficients,
    GlobalReal, UnaryProgram, DEFAULT_ORDER_CAP, EXACT_PROBE_DEGREE, QUADRATURE_MAX_INTERVALS,
    QUADRATURE_TOL,
};
pub use decimal::decimal_expand;
pub use expr::{parse_expr, Expr, Func, MAX_POWER};
pub use jet::{ring_arith, Jet, RingOp};
pub use truth::{apart, classify, eq, eq_within, less_than, InternalTruth, JetClass};

use crate::syntax::SyntaxError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WeilError {
    #[error("operands belong to different algebras")]
    MixedAlgebras,
    #[error("operands use different numeric backends")]
    MixedBackends,
    #[error("standard part is zero, so the element has no inverse")]
    NotInvertible,
    #[error("standard part is not strictly positive")]
    NotPositive,
    #[error("not available on the exact backend: {0}")]
    UnsupportedExact(String),
    #[error("value has a nonzero nilpotent part and is not a global element")]
    NotGlobal,
    #[error("program failed at the probe point: {0}")]
    Evaluation(Box<WeilError>),
    #[error("quadrature did not reach tolerance {tol:e} within {intervals} intervals")]
    QuadratureFailure { tol: f64, intervals: usize },
    #[error("derivative order {order} outside 1..={cap}")]
    OrderOutOfRange { order: u32, cap: u32 },
    #[error("invalid algebra description: {0}")]
    InvalidSpec(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("syntax error {0}")]
    Syntax(SyntaxError),
    #[error("algebra basis exceeds {limit} monomials")]
    AlgebraTooLarge { limit: usize },
    #[error("{0}")]
    Domain(String),
}

impl WeilError {
    /// Stable name used by the command line when reporting the error.
    pub fn name(&self) -> &'static str {
        match self {
            WeilError::MixedAlgebras => "MixedAlgebras",
            WeilError::MixedBackends => "MixedBackends",
            WeilError::NotInvertible => "NotInvertible",
            WeilError::NotPositive => "NotPositive",
            WeilError::UnsupportedExact(_) => "UnsupportedExact",
            WeilError::NotGlobal => "NotGlobal",
            WeilError::Evaluation(_) => "EvaluationError",
            WeilError::QuadratureFailure { .. } => "QuadratureFailure",
            WeilError::OrderOutOfRange { .. } => "OrderOutOfRange",
            WeilError::InvalidSpec(_) => "InvalidSpec",
            WeilError::UnknownGenerator(_) => "UnknownGenerator",
            WeilError::UnboundVariable(_) => "UnboundVariable",
            WeilError::Syntax(_) => "SyntaxError",
            WeilError::AlgebraTooLarge { .. } => "AlgebraTooLarge",
            WeilError::Domain(_) => "DomainError",
        }
    }

    /// Strips `Evaluation` wrappers.
    pub fn root(&self) -> &WeilError {
        match self {
            WeilError::Evaluation(inner) => inner.root(),
            other => other,
        }
    }
}

impl From<SyntaxError> for WeilError {
    fn from(e: SyntaxError) -> Self {
        WeilError::Syntax(e)
    }
}
