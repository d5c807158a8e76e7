use std::sync::Arc;

use crate::linalg::{pauli, JetMatrix, SmoothComplex};
use crate::scalar::Scalar;
use crate::weil::AlgebraSpec;

use super::{AlgebraElement, GroupKind, LieError};

/// `hbar > 0`, coupling `alpha >= 0`, single-particle energies `e1`, `e2`.
///
/// A zero coupling is accepted so that the free Hamiltonian can be built.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalConstants<S: Scalar> {
    hbar: S,
    alpha: S,
    e1: S,
    e2: S,
}

impl<S: Scalar> PhysicalConstants<S> {
    pub fn new(hbar: S, alpha: S, e1: S, e2: S) -> Result<Self, LieError> {
        if !(hbar > S::zero()) {
            return Err(LieError::InvalidArgument(format!("hbar must be positive, got {hbar}")));
        }
        if alpha < S::zero() {
            return Err(LieError::InvalidArgument(format!("alpha must not be negative, got {alpha}")));
        }
        Ok(PhysicalConstants { hbar, alpha, e1, e2 })
    }

    /// `hbar = 1, alpha = 1, e1 = e2 = 0`.
    pub fn unit() -> Self {
        Self::new(S::one(), S::one(), S::zero(), S::zero()).expect("valid constants")
    }

    pub fn hbar(&self) -> &S {
        &self.hbar
    }

    pub fn alpha(&self) -> &S {
        &self.alpha
    }

    pub fn e1(&self) -> &S {
        &self.e1
    }

    pub fn e2(&self) -> &S {
        &self.e2
    }
}

/// Spin operators `S_i = (hbar/2) sigma_i`.
pub fn spin_rep<S: Scalar>(c: &PhysicalConstants<S>, algebra: &Arc<AlgebraSpec>) -> [JetMatrix<S>; 3] {
    let half = c.hbar.clone() / S::from_i64(2);
    pauli(algebra).map(|s| s.scale_real(&half))
}

/// `mu(L_i) = -(i/hbar) S_i`, the images of the SO(3) basis in u(2).
pub fn spin_generators<S: Scalar>(c: &PhysicalConstants<S>, algebra: &Arc<AlgebraSpec>) -> [AlgebraElement<S>; 3] {
    let factor = SmoothComplex::from_scalars(algebra, S::zero(), -(S::one() / c.hbar.clone()));
    spin_rep(c, algebra).map(|s| AlgebraElement { group: GroupKind::Unitary(2), matrix: s.scale(&factor) })
}

/// The representation on a general element `x1 L1 + x2 L2 + x3 L3`.
pub fn mu<S: Scalar>(c: &PhysicalConstants<S>, x: &AlgebraElement<S>) -> Result<AlgebraElement<S>, LieError> {
    if x.group != GroupKind::SO3 {
        return Err(LieError::MixedGroups);
    }
    let m = x.matrix();
    let coords = [m.get(2, 1).re(), m.get(0, 2).re(), m.get(1, 0).re()];
    let gens = spin_generators(c, x.algebra());
    let mut acc = JetMatrix::zeros(x.algebra(), 2, 2);
    for (g, k) in gens.iter().zip(coords) {
        acc = acc.checked_add(&g.matrix().scale_jet(k))?;
    }
    Ok(AlgebraElement { group: GroupKind::Unitary(2), matrix: acc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{commutator, matrix_commutator, so3_basis};
    use crate::linalg::{eigen_hermitian, JetVector};
    use crate::scalar::Backend;
    use num_rational::BigRational as Q;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    #[test]
    fn constants_validated() {
        assert!(PhysicalConstants::new(q(0, 1), q(1, 1), q(0, 1), q(0, 1)).is_err());
        assert!(PhysicalConstants::new(q(1, 1), q(-1, 1), q(0, 1), q(0, 1)).is_err());
        assert!(PhysicalConstants::new(q(1, 1), q(0, 1), q(0, 1), q(0, 1)).is_ok());
    }

    #[test]
    fn sigma3_on_basis_states() {
        let alg = AlgebraSpec::reals(Backend::Exact);
        let [_, _, s3] = pauli::<Q>(&alg);
        let up = JetVector::unit(&alg, 2, 0);
        let down = JetVector::unit(&alg, 2, 1);
        assert_eq!(s3.apply(&up).unwrap(), up);
        assert_eq!(s3.apply(&down).unwrap(), down.neg());
    }

    #[test]
    fn spin_eigenvalues() {
        let alg = AlgebraSpec::reals(Backend::Exact);
        let c = PhysicalConstants::new(q(3, 7), q(1, 1), q(0, 1), q(0, 1)).unwrap();
        let [_, _, s3] = spin_rep(&c, &alg);
        let values: Vec<_> = eigen_hermitian(&s3).unwrap().into_iter().map(|p| p.value).collect();
        assert_eq!(values[0], SmoothComplex::from_scalars(&alg, q(3, 14), q(0, 1)));
        assert_eq!(values[1], SmoothComplex::from_scalars(&alg, q(-3, 14), q(0, 1)));
    }

    #[test]
    fn spin_commutators() {
        let alg = AlgebraSpec::reals(Backend::Exact);
        let c = PhysicalConstants::new(q(3, 7), q(1, 1), q(0, 1), q(0, 1)).unwrap();
        let s = spin_rep(&c, &alg);
        let i_hbar = SmoothComplex::from_scalars(&alg, q(0, 1), q(3, 7));
        assert_eq!(matrix_commutator(&s[0], &s[1]).unwrap(), s[2].scale(&i_hbar));
    }

    #[test]
    fn mu_is_a_homomorphism() {
        let alg = AlgebraSpec::reals(Backend::Exact);
        let c = PhysicalConstants::new(q(3, 7), q(1, 1), q(0, 1), q(0, 1)).unwrap();
        let l = so3_basis::<Q>(&alg);
        for i in 0..3 {
            for j in 0..3 {
                let lhs = mu(&c, &commutator(&l[i], &l[j]).unwrap()).unwrap();
                let rhs = commutator(&mu(&c, &l[i]).unwrap(), &mu(&c, &l[j]).unwrap()).unwrap();
                assert!(lhs.matrix().checked_sub(rhs.matrix()).unwrap().is_zero());
            }
        }
        assert_eq!(mu(&c, &l[0]).unwrap(), spin_generators(&c, &alg)[0]);
    }
}
