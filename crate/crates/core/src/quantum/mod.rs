//! Two spin-1/2 particles with a spin-spin coupling.

mod table;

use std::sync::Arc;

use thiserror::Error;

use crate::lie::{exp_map, spin_rep, AlgebraElement, GroupKind, LieError, PhysicalConstants};
use crate::linalg::{
    complex_apart, complex_eq, inner_product, is_orthonormal, tolerance, JetMatrix, JetVector, Kronecker, LinalgError,
    SmoothComplex,
};
use crate::scalar::Scalar;
use crate::weil::{AlgebraSpec, GlobalReal, InternalTruth, Jet, WeilError};

pub use table::{eigentable, EigenRow, EigenRowJson, EigenTable};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("state has a norm that is not apart from zero")]
    NotPhysical,
    #[error("nilpotent coefficients present; probabilities need global elements")]
    NotGlobal,
    #[error("measurement basis is not orthonormal")]
    NotOrthonormal,
    #[error("{0}")]
    InvalidArgument(String),
    #[error("{0}")]
    NotEigenvector(String),
    #[error(transparent)]
    Lie(#[from] LieError),
}

impl From<LinalgError> for QuantumError {
    fn from(e: LinalgError) -> Self {
        QuantumError::Lie(LieError::Linalg(e))
    }
}

impl From<WeilError> for QuantumError {
    fn from(e: WeilError) -> Self {
        LinalgError::Weil(e).into()
    }
}

impl QuantumError {
    pub fn name(&self) -> &'static str {
        match self {
            QuantumError::NotPhysical => "NotPhysical",
            QuantumError::NotGlobal => "NotGlobal",
            QuantumError::NotOrthonormal => "NotOrthonormal",
            QuantumError::InvalidArgument(_) => "InvalidArgument",
            QuantumError::NotEigenvector(_) => "NotEigenvector",
            QuantumError::Lie(e) => e.name(),
        }
    }
}

/// A (not necessarily normalized, not necessarily physical) state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<S: Scalar> {
    vector: JetVector<S>,
}

impl<S: Scalar> StateVector<S> {
    pub fn new(vector: JetVector<S>) -> Self {
        StateVector { vector }
    }

    pub fn vector(&self) -> &JetVector<S> {
        &self.vector
    }

    pub fn into_vector(self) -> JetVector<S> {
        self.vector
    }

    pub fn dim(&self) -> usize {
        self.vector.dim()
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        self.vector.algebra()
    }

    /// `|up>` or `|down>` for each particle, first particle leftmost.
    pub fn product(algebra: &Arc<AlgebraSpec>, spins_up: &[bool]) -> Self {
        let n = spins_up.len();
        let k = spins_up.iter().fold(0usize, |acc, &up| acc * 2 + usize::from(!up));
        StateVector { vector: JetVector::unit(algebra, 1 << n, k) }
    }
}

/// `(E1 + E2) 1 - alpha sum_i (S_i x 1)(1 x S_i)` on `C^2 x C^2`.
pub fn build_hamiltonian<S: Scalar>(
    c: &PhysicalConstants<S>,
    algebra: &Arc<AlgebraSpec>,
) -> Result<JetMatrix<S>, QuantumError> {
    let id2 = JetMatrix::identity(algebra, 2);
    let mut coupling = JetMatrix::zeros(algebra, 4, 4);
    for s in spin_rep(c, algebra) {
        let term = s.kron(&id2)?.matmul(&id2.kron(&s)?)?;
        coupling = coupling.checked_add(&term)?;
    }
    let free = JetMatrix::identity(algebra, 4).scale_real(&(c.e1().clone() + c.e2().clone()));
    Ok(free.checked_sub(&coupling.scale_real(c.alpha()))?)
}

/// `(S^2, S_z)` for the total spin `S = S_1 + S_2`.
pub fn total_spin_ops<S: Scalar>(
    c: &PhysicalConstants<S>,
    algebra: &Arc<AlgebraSpec>,
) -> Result<(JetMatrix<S>, JetMatrix<S>), QuantumError> {
    let id2 = JetMatrix::identity(algebra, 2);
    let mut s_sq = JetMatrix::zeros(algebra, 4, 4);
    let mut s_z = None;
    for s in spin_rep(c, algebra) {
        let total = s.kron(&id2)?.checked_add(&id2.kron(&s)?)?;
        s_sq = s_sq.checked_add(&total.matmul(&total)?)?;
        s_z = Some(total);
    }
    Ok((s_sq, s_z.expect("three components")))
}

/// `exp(-(i/hbar) t H) psi0` for a finite time `t`, which may carry
/// nilpotent parts.
pub fn evolve(
    psi0: &StateVector<f64>,
    c: &PhysicalConstants<f64>,
    t: &Jet<f64>,
) -> Result<StateVector<f64>, QuantumError> {
    let h = build_hamiltonian(c, psi0.algebra())?;
    evolve_under(psi0, &h, c.hbar(), t)
}

/// Evolution under an arbitrary hermitian Hamiltonian.
pub fn evolve_under(
    psi0: &StateVector<f64>,
    h: &JetMatrix<f64>,
    hbar: &f64,
    t: &Jet<f64>,
) -> Result<StateVector<f64>, QuantumError> {
    let generator = propagator_generator(h, hbar, t)?;
    let u = exp_map(&generator)?;
    Ok(StateVector::new(u.matrix().apply(&psi0.vector)?))
}

fn propagator_generator<S: Scalar>(h: &JetMatrix<S>, hbar: &S, t: &Jet<S>) -> Result<AlgebraElement<S>, QuantumError> {
    if !(*hbar > S::zero()) {
        return Err(QuantumError::InvalidArgument("hbar must be positive".into()));
    }
    let factor = SmoothComplex::new(Jet::zero(t.algebra()), t.scale(&(-(S::one() / hbar.clone()))))?;
    Ok(AlgebraElement::new(GroupKind::Unitary(h.rows()), h.scale(&factor))?)
}

/// Evolution for a purely nilpotent time step, on either backend: the
/// exponential series of a nilpotent matrix is a finite sum.
pub fn evolve_infinitesimal<S: Scalar>(
    psi0: &StateVector<S>,
    c: &PhysicalConstants<S>,
    dt: &Jet<S>,
) -> Result<StateVector<S>, QuantumError> {
    if !dt.std_part().is_zero() {
        return Err(QuantumError::InvalidArgument("time step must be nilpotent".into()));
    }
    let h = build_hamiltonian(c, psi0.algebra())?;
    let generator = propagator_generator(&h, c.hbar(), dt)?;
    let mut term = psi0.vector.clone();
    let mut sum = term.clone();
    for k in 1..=psi0.algebra().nilpotency_index() {
        term = generator.matrix().apply(&term)?.scale_real(&(S::one() / S::from_i64(i64::from(k))));
        sum = sum.checked_add(&term)?;
    }
    Ok(StateVector::new(sum))
}

/// `<psi, psi>` apart from zero.
pub fn is_physical<S: Scalar>(psi: &StateVector<S>) -> Result<InternalTruth, QuantumError> {
    let norm = inner_product(&psi.vector, &psi.vector)?;
    Ok(complex_apart(&norm, &SmoothComplex::zero(psi.algebra()), tolerance::<S>()))
}

/// Every component equal to zero.
pub fn is_zero<S: Scalar>(psi: &StateVector<S>) -> InternalTruth {
    let zero = SmoothComplex::zero(psi.algebra());
    InternalTruth::all(psi.vector.entries().iter().map(|z| complex_eq(z, &zero, tolerance::<S>())))
}

/// Outcome probabilities `|<e_i, psi>|^2 / <psi, psi>` in an orthonormal
/// basis.
pub fn born<S: Scalar>(psi: &StateVector<S>, basis: &[StateVector<S>]) -> Result<Vec<GlobalReal<S>>, QuantumError> {
    if psi.vector.has_nilpotent_part() || basis.iter().any(|b| b.vector.has_nilpotent_part()) {
        return Err(QuantumError::NotGlobal);
    }
    if is_physical(psi)? != InternalTruth::Holds {
        return Err(QuantumError::NotPhysical);
    }
    let vectors: Vec<JetVector<S>> = basis.iter().map(|b| b.vector.clone()).collect();
    if basis.len() != psi.dim() || is_orthonormal(&vectors)? != InternalTruth::Holds {
        return Err(QuantumError::NotOrthonormal);
    }
    let norm = inner_product(&psi.vector, &psi.vector)?.re().std_part().clone();
    vectors
        .iter()
        .map(|e| {
            let amp = inner_product(e, &psi.vector)?;
            Ok(GlobalReal(amp.norm_sqr().std_part().clone() / norm.clone()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigen_hermitian, is_hermitian, tensor};
    use crate::scalar::Backend;
    use num_rational::BigRational as Q;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    fn constants(hbar: Q, alpha: Q) -> PhysicalConstants<Q> {
        PhysicalConstants::new(hbar, alpha, q(0, 1), q(0, 1)).unwrap()
    }

    #[test]
    fn free_hamiltonian_is_zero() {
        let alg = AlgebraSpec::reals(Backend::Exact);
        let h = build_hamiltonian(&constants(q(1, 1), q(0, 1)), &alg).unwrap();
        assert!(h.is_zero());
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        let alg = AlgebraSpec::reals(Backend::Exact);
        let c = PhysicalConstants::new(q(3, 7), q(5, 2), q(-1, 3), q(4, 1)).unwrap();
        assert_eq!(is_hermitian(&build_hamiltonian(&c, &alg).unwrap()).unwrap(), InternalTruth::Holds);
    }

    #[test]
    fn spin_operators_commute() {
        let alg = AlgebraSpec::reals(Backend::Exact);
        let c = constants(q(2, 3), q(1, 1));
        let (s_sq, s_z) = total_spin_ops(&c, &alg).unwrap();
        let h = build_hamiltonian(&c, &alg).unwrap();
        for (a, b) in [(&s_sq, &s_z), (&h, &s_sq), (&h, &s_z)] {
            assert!(crate::lie::matrix_commutator(a, b).unwrap().is_zero());
        }
    }

    #[test]
    fn physicality_verdicts() {
        let alg = AlgebraSpec::square_zero("e", Backend::Exact).unwrap();
        let up = StateVector::new(JetVector::<Q>::unit(&alg, 2, 0));
        assert_eq!(is_physical(&up).unwrap(), InternalTruth::Holds);
        let e = Jet::generator(&alg, "e").unwrap();
        let small = StateVector::new(up.vector().scale_jet(&e));
        assert_eq!(is_physical(&small).unwrap(), InternalTruth::Fails);
        assert_eq!(is_zero(&small), InternalTruth::Undecided);
        let zero = StateVector::new(JetVector::<Q>::zeros(&alg, 2));
        assert_eq!(is_physical(&zero).unwrap(), InternalTruth::Fails);
        assert_eq!(is_zero(&zero), InternalTruth::Holds);
        assert!(tensor(small.vector(), small.vector()).unwrap().is_zero());
    }

    #[test]
    fn born_examples() {
        let alg = AlgebraSpec::reals(Backend::Exact);
        let z: Vec<_> = (0..2).map(|k| StateVector::new(JetVector::<Q>::unit(&alg, 2, k))).collect();
        let p = born(&z[0], &z).unwrap();
        assert_eq!((p[0].0.clone(), p[1].0.clone()), (q(1, 1), q(0, 1)));
        let plus = StateVector::new(JetVector::from_i64s(&alg, &[1, 1]));
        let p = born(&plus, &z).unwrap();
        assert_eq!((p[0].0.clone(), p[1].0.clone()), (q(1, 2), q(1, 2)));
        let skewed = vec![z[0].clone(), plus.clone()];
        assert_eq!(born(&plus, &skewed).unwrap_err(), QuantumError::NotOrthonormal);
        let zero = StateVector::new(JetVector::<Q>::zeros(&alg, 2));
        assert_eq!(born(&zero, &z).unwrap_err(), QuantumError::NotPhysical);
        let nil_alg = AlgebraSpec::square_zero("e", Backend::Exact).unwrap();
        let e = Jet::generator(&nil_alg, "e").unwrap();
        let fuzzy = StateVector::new(JetVector::from_jets(vec![e.add_scalar(&q(1, 1)), Jet::zero(&nil_alg)]).unwrap());
        let zb: Vec<_> = (0..2).map(|k| StateVector::new(JetVector::<Q>::unit(&nil_alg, 2, k))).collect();
        assert_eq!(born(&fuzzy, &zb).unwrap_err(), QuantumError::NotGlobal);
    }

    #[test]
    fn swap_dynamics() {
        let alg = AlgebraSpec::reals(Backend::Approx);
        let c = PhysicalConstants::<f64>::unit();
        let up_down = StateVector::product(&alg, &[true, false]);
        let basis: Vec<_> = (0..4).map(|k| StateVector::new(JetVector::<f64>::unit(&alg, 4, k))).collect();
        for t in [0.0, 0.4, 1.0, 2.5, std::f64::consts::PI] {
            let psi = evolve(&up_down, &c, &Jet::constant(&alg, t)).unwrap();
            let p = born(&psi, &basis).unwrap();
            assert!((p[2].0 - (t / 2.0).sin().powi(2)).abs() < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn singlet_is_stationary() {
        let alg = AlgebraSpec::reals(Backend::Approx);
        let c = PhysicalConstants::<f64>::unit();
        let singlet = StateVector::new(JetVector::from_i64s(&alg, &[0, 1, -1, 0]));
        let psi = evolve(&singlet, &c, &Jet::constant(&alg, 3.7)).unwrap();
        let overlap = inner_product(singlet.vector(), psi.vector()).unwrap();
        assert!((overlap.norm_sqr().std_part() / 4.0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn infinitesimal_step_exact() {
        let alg = AlgebraSpec::square_zero("e", Backend::Exact).unwrap();
        let c = constants(q(1, 2), q(3, 1));
        let e = Jet::<Q>::generator(&alg, "e").unwrap();
        let psi0 = StateVector::new(JetVector::from_i64s(&alg, &[1, 2, 0, -1]));
        let stepped = evolve_infinitesimal(&psi0, &c, &e).unwrap();
        let h = build_hamiltonian(&c, &alg).unwrap();
        // psi - (i e / hbar) H psi
        let kick = SmoothComplex::new(Jet::zero(&alg), e.scale(&q(-2, 1))).unwrap();
        let expected = psi0.vector().checked_add(&h.apply(psi0.vector()).unwrap().scale(&kick)).unwrap();
        assert_eq!(stepped.vector(), &expected);
    }

    #[test]
    fn s_squared_spectrum() {
        let alg = AlgebraSpec::reals(Backend::Approx);
        let c = PhysicalConstants::<f64>::unit();
        let (s_sq, _) = total_spin_ops(&c, &alg).unwrap();
        let basis = vec![
            JetVector::from_i64s(&alg, &[1, 0, 0, 0]),
            JetVector::from_i64s(&alg, &[0, 1, 1, 0]),
            JetVector::from_i64s(&alg, &[0, 0, 0, 1]),
            JetVector::from_i64s(&alg, &[0, 1, -1, 0]),
        ];
        let pairs = crate::linalg::eigen_hermitian_with_basis(&s_sq, &basis).unwrap();
        let values: Vec<f64> = pairs.iter().map(|p| *p.value.re().std_part()).collect();
        assert_eq!(values, vec![2.0, 2.0, 2.0, 0.0]);
        assert!(eigen_hermitian(&s_sq).is_err());
    }
}
