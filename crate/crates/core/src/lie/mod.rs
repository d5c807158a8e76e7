//! Matrix groups SO(3) and U(n) probed with jets.

mod exp;
mod spin;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::linalg::{matrix_eq, tolerance, JetMatrix, LinalgError, SmoothComplex};
use crate::scalar::Scalar;
use crate::weil::{AlgebraSpec, InternalTruth, Jet, WeilError};

pub use exp::{exp_map, lie_integrate};
pub use spin::{mu, spin_generators, spin_rep, PhysicalConstants};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    SO3,
    Unitary(usize),
}

impl GroupKind {
    pub fn dim(self) -> usize {
        match self {
            GroupKind::SO3 => 3,
            GroupKind::Unitary(n) => n,
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::SO3 => f.write_str("SO(3)"),
            GroupKind::Unitary(n) => write!(f, "U({n})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LieError {
    #[error("operands belong to different groups")]
    MixedGroups,
    #[error("curve does not pass through the identity at 0")]
    NotAtIdentity,
    #[error("matrix is not provably in {0}")]
    NotInGroup(GroupKind),
    #[error("matrix is not in the Lie algebra of {0}")]
    NotInAlgebra(GroupKind),
    #[error("expected a {expected}x{expected} matrix, got {rows}x{cols}")]
    WrongShape { expected: usize, rows: usize, cols: usize },
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl From<WeilError> for LieError {
    fn from(e: WeilError) -> Self {
        LieError::Linalg(LinalgError::Weil(e))
    }
}

impl LieError {
    pub fn name(&self) -> &'static str {
        match self {
            LieError::MixedGroups => "MixedGroups",
            LieError::NotAtIdentity => "NotAtIdentity",
            LieError::NotInGroup(_) => "NotInGroup",
            LieError::NotInAlgebra(_) => "NotInAlgebra",
            LieError::WrongShape { .. } => "WrongShape",
            LieError::InvalidArgument(_) => "InvalidArgument",
            LieError::Linalg(e) => e.name(),
        }
    }
}

fn check_shape<S: Scalar>(m: &JetMatrix<S>, group: GroupKind) -> Result<(), LieError> {
    let n = group.dim();
    if m.rows() != n || m.cols() != n {
        return Err(LieError::WrongShape { expected: n, rows: m.rows(), cols: m.cols() });
    }
    Ok(())
}

fn real_entries<S: Scalar>(m: &JetMatrix<S>, tol: f64) -> InternalTruth {
    let alg = m.algebra();
    InternalTruth::all(
        m.entries().iter().map(|z| crate::linalg::complex_eq(&SmoothComplex::real(z.im().clone()), &SmoothComplex::zero(alg), tol)),
    )
}

/// Tangent vector at the identity: antisymmetric real for SO(3),
/// anti-hermitian for U(n).
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement<S: Scalar> {
    group: GroupKind,
    matrix: JetMatrix<S>,
}

impl<S: Scalar> AlgebraElement<S> {
    pub fn new(group: GroupKind, matrix: JetMatrix<S>) -> Result<Self, LieError> {
        check_shape(&matrix, group)?;
        let tol = tolerance::<S>() * matrix.max_abs().max(1.0);
        let skew = match group {
            GroupKind::SO3 => matrix.checked_add(&matrix.transpose())?,
            GroupKind::Unitary(_) => matrix.checked_add(&matrix.adjoint())?,
        };
        let zero = JetMatrix::zeros(matrix.algebra(), group.dim(), group.dim());
        let mut verdict = matrix_eq(&skew, &zero, tol)?;
        if group == GroupKind::SO3 {
            verdict = verdict.and(real_entries(&matrix, tol));
        }
        if !verdict.holds() {
            return Err(LieError::NotInAlgebra(group));
        }
        Ok(AlgebraElement { group, matrix })
    }

    pub fn group(&self) -> GroupKind {
        self.group
    }

    pub fn matrix(&self) -> &JetMatrix<S> {
        &self.matrix
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        self.matrix.algebra()
    }

    fn same_group(&self, other: &Self) -> Result<(), LieError> {
        if self.group != other.group {
            return Err(LieError::MixedGroups);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, LieError> {
        self.same_group(other)?;
        Ok(AlgebraElement { group: self.group, matrix: self.matrix.checked_add(&other.matrix)? })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, LieError> {
        self.same_group(other)?;
        Ok(AlgebraElement { group: self.group, matrix: self.matrix.checked_sub(&other.matrix)? })
    }

    /// Real multiples stay in the algebra.
    pub fn scale_real(&self, c: &S) -> Self {
        AlgebraElement { group: self.group, matrix: self.matrix.scale_real(c) }
    }

    pub fn scale_jet(&self, c: &Jet<S>) -> Self {
        AlgebraElement { group: self.group, matrix: self.matrix.scale_jet(c) }
    }

    /// Moves the element into a larger algebra (for example one with an
    /// extra square-zero generator).
    pub fn lift(&self, target: &Arc<AlgebraSpec>) -> Result<Self, LieError> {
        let entries = self
            .matrix
            .entries()
            .iter()
            .map(|z| SmoothComplex::new(z.re().lift(target)?, z.im().lift(target)?))
            .collect::<Result<Vec<_>, WeilError>>()?;
        let n = self.group.dim();
        Ok(AlgebraElement { group: self.group, matrix: JetMatrix::new(target, n, n, entries)? })
    }
}

/// A matrix in SO(3) or U(n).
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement<S: Scalar> {
    group: GroupKind,
    matrix: JetMatrix<S>,
}

impl<S: Scalar> GroupElement<S> {
    /// Accepts `matrix` when membership holds (within the backend tolerance).
    pub fn new(group: GroupKind, matrix: JetMatrix<S>) -> Result<Self, LieError> {
        if !check_membership(&matrix, group)?.holds() {
            return Err(LieError::NotInGroup(group));
        }
        Ok(GroupElement { group, matrix })
    }

    pub fn identity(group: GroupKind, algebra: &Arc<AlgebraSpec>) -> Self {
        GroupElement { group, matrix: JetMatrix::identity(algebra, group.dim()) }
    }

    pub(crate) fn unchecked(group: GroupKind, matrix: JetMatrix<S>) -> Self {
        GroupElement { group, matrix }
    }

    pub fn group(&self) -> GroupKind {
        self.group
    }

    pub fn matrix(&self) -> &JetMatrix<S> {
        &self.matrix
    }

    pub fn into_matrix(self) -> JetMatrix<S> {
        self.matrix
    }

    pub fn compose(&self, other: &Self) -> Result<Self, LieError> {
        if self.group != other.group {
            return Err(LieError::MixedGroups);
        }
        Ok(GroupElement { group: self.group, matrix: self.matrix.matmul(&other.matrix)? })
    }
}

/// `L1, L2, L3`: infinitesimal rotations about the coordinate axes.
pub fn so3_basis<S: Scalar>(algebra: &Arc<AlgebraSpec>) -> [AlgebraElement<S>; 3] {
    let make = |v: [i64; 9]| AlgebraElement {
        group: GroupKind::SO3,
        matrix: JetMatrix::from_i64s(algebra, 3, 3, &v),
    };
    [
        make([0, 0, 0, 0, 0, -1, 0, 1, 0]),
        make([0, 0, 1, 0, 0, 0, -1, 0, 0]),
        make([0, -1, 0, 1, 0, 0, 0, 0, 0]),
    ]
}

/// `AB - BA` of two matrices.
pub fn matrix_commutator<S: Scalar>(a: &JetMatrix<S>, b: &JetMatrix<S>) -> Result<JetMatrix<S>, LieError> {
    Ok(a.matmul(b)?.checked_sub(&b.matmul(a)?)?)
}

pub fn commutator<S: Scalar>(a: &AlgebraElement<S>, b: &AlgebraElement<S>) -> Result<AlgebraElement<S>, LieError> {
    a.same_group(b)?;
    Ok(AlgebraElement { group: a.group, matrix: matrix_commutator(&a.matrix, &b.matrix)? })
}

/// Membership verdict: `U U^T = 1`, `det U = 1` and real entries for SO(3);
/// `U U^dagger = 1` for U(n).
pub fn check_membership<S: Scalar>(u: &JetMatrix<S>, group: GroupKind) -> Result<InternalTruth, LieError> {
    check_membership_within(u, group, tolerance::<S>())
}

pub fn check_membership_within<S: Scalar>(
    u: &JetMatrix<S>,
    group: GroupKind,
    tol: f64,
) -> Result<InternalTruth, LieError> {
    check_shape(u, group)?;
    let n = group.dim();
    let id = JetMatrix::identity(u.algebra(), n);
    Ok(match group {
        GroupKind::SO3 => {
            let orth = matrix_eq(&u.matmul(&u.transpose())?, &id, tol)?;
            let det = crate::linalg::complex_eq(&u.determinant()?, &SmoothComplex::one(u.algebra()), tol);
            InternalTruth::all([real_entries(u, tol), orth, det])
        }
        GroupKind::Unitary(_) => matrix_eq(&u.matmul(&u.adjoint())?, &id, tol)?,
    })
}

/// Tangent vector `X` of a curve through the identity, read off from
/// `t(d) = 1 + d X` with `d` a square-zero generator.
///
/// The curve must send `d` into the group with membership holding; a
/// symmetric first-order part, for example, leaves `t(d) t(d)^T = 1`
/// undecided and is rejected.
pub fn tangent_at_identity<S, F>(group: GroupKind, curve: F) -> Result<AlgebraElement<S>, LieError>
where
    S: Scalar,
    F: Fn(&Jet<S>) -> Result<JetMatrix<S>, LieError>,
{
    let alg = AlgebraSpec::square_zero("d", S::BACKEND)?;
    let d = Jet::generator(&alg, "d")?;
    let m = curve(&d)?;
    check_shape(&m, group)?;
    let tol = tolerance::<S>() * m.max_abs().max(1.0);
    if !matrix_eq(&m.standard(), &JetMatrix::identity(&alg, group.dim()), tol)?.holds() {
        return Err(LieError::NotAtIdentity);
    }
    if !check_membership_within(&m, group, tol)?.holds() {
        return Err(LieError::NotInGroup(group));
    }
    let reals = AlgebraSpec::reals(S::BACKEND);
    let n = group.dim();
    let entries = m
        .entries()
        .iter()
        .map(|z| Ok(SmoothComplex::from_scalars(&reals, z.re().coefficient("d")?, z.im().coefficient("d")?)))
        .collect::<Result<Vec<_>, WeilError>>()?;
    AlgebraElement::new(group, JetMatrix::new(&reals, n, n, entries)?)
}
