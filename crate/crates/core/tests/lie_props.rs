mod common;

use std::sync::Arc;

use common::{q, rand_q, rng};
use num_rational::BigRational as Q;
use rand::Rng;
use sdgqm::lie::{
    check_membership_within, commutator, exp_map, matrix_commutator, so3_basis, spin_rep, tangent_at_identity,
    AlgebraElement, GroupKind, LieError, PhysicalConstants,
};
use sdgqm::linalg::{JetMatrix, SmoothComplex};
use sdgqm::scalar::{Backend, Scalar};
use sdgqm::weil::{AlgebraSpec, Jet};

fn levi_civita(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

#[test]
fn so3_structure_constants() {
    let alg = AlgebraSpec::reals(Backend::Exact);
    let l = so3_basis::<Q>(&alg);
    for i in 0..3 {
        for j in 0..3 {
            let mut expected = l[0].scale_real(&q(0, 1));
            for k in 0..3 {
                expected = expected.checked_add(&l[k].scale_real(&q(levi_civita(i, j, k), 1))).unwrap();
            }
            assert_eq!(commutator(&l[i], &l[j]).unwrap(), expected);
        }
    }
}

#[test]
fn spin_structure_constants() {
    let alg = AlgebraSpec::reals(Backend::Exact);
    for hbar in [q(1, 1), q(3, 7), q(5, 2)] {
        let c = PhysicalConstants::new(hbar.clone(), q(1, 1), q(0, 1), q(0, 1)).unwrap();
        let s = spin_rep(&c, &alg);
        let i_hbar = SmoothComplex::from_scalars(&alg, q(0, 1), hbar);
        for i in 0..3 {
            for j in 0..3 {
                let mut expected = JetMatrix::zeros(&alg, 2, 2);
                for k in 0..3 {
                    expected = expected.checked_add(&s[k].scale_real(&q(levi_civita(i, j, k), 1))).unwrap();
                }
                assert_eq!(matrix_commutator(&s[i], &s[j]).unwrap(), expected.scale(&i_hbar));
            }
        }
    }
}

fn rand_generator(r: &mut impl Rng, group: GroupKind, alg: &Arc<AlgebraSpec>) -> JetMatrix<Q> {
    let n = group.dim();
    let mut m = JetMatrix::zeros(alg, n, n);
    let complex = matches!(group, GroupKind::Unitary(_));
    for i in 0..n {
        if complex {
            m.set(i, i, SmoothComplex::from_scalars(alg, q(0, 1), rand_q(r))).unwrap();
        }
        for j in i + 1..n {
            let im = if complex { rand_q(r) } else { q(0, 1) };
            let z = SmoothComplex::from_scalars(alg, rand_q(r), im);
            m.set(j, i, -&z.conj()).unwrap();
            m.set(i, j, z).unwrap();
        }
    }
    m
}

#[test]
fn tangent_round_trip() {
    let mut r = rng(31);
    let reals = AlgebraSpec::reals(Backend::Exact);
    for trial in 0..20 {
        let group = [GroupKind::SO3, GroupKind::Unitary(2), GroupKind::Unitary(3)][trial % 3];
        let x = rand_generator(&mut r, group, &reals);
        let curve = |d: &Jet<Q>| -> Result<JetMatrix<Q>, LieError> {
            let lifted = JetMatrix::new(d.algebra(), x.rows(), x.cols(), x.entries().iter().map(|z| {
                SmoothComplex::new(z.re().lift(d.algebra()).unwrap(), z.im().lift(d.algebra()).unwrap()).unwrap()
            }).collect())?;
            Ok(JetMatrix::identity(d.algebra(), group.dim()).checked_add(&lifted.scale_jet(d))?)
        };
        let tangent = tangent_at_identity(group, curve).unwrap();
        assert_eq!(tangent.matrix(), &x);
        assert_eq!(tangent.group(), group);
    }
}

fn to_f64(m: &JetMatrix<Q>, alg: &Arc<AlgebraSpec>) -> JetMatrix<f64> {
    let entries = m
        .entries()
        .iter()
        .map(|z| SmoothComplex::from_scalars(alg, z.re().std_part().to_f64(), z.im().std_part().to_f64()))
        .collect();
    JetMatrix::new(alg, m.rows(), m.cols(), entries).unwrap()
}

#[test]
fn exponentials_land_in_the_group() {
    let mut r = rng(37);
    let exact = AlgebraSpec::reals(Backend::Exact);
    let alg = AlgebraSpec::reals(Backend::Approx);
    for trial in 0..20 {
        let group = [GroupKind::SO3, GroupKind::Unitary(2), GroupKind::Unitary(4)][trial % 3];
        let x = AlgebraElement::new(group, to_f64(&rand_generator(&mut r, group, &exact), &alg)).unwrap();
        let g = exp_map(&x).unwrap();
        assert!(check_membership_within(g.matrix(), group, 1e-10).unwrap().holds());
    }
}

#[test]
fn jet_flow_identity_on_random_generators() {
    let mut r = rng(41);
    let exact = AlgebraSpec::reals(Backend::Exact);
    let alg = AlgebraSpec::square_zero("e", Backend::Approx).unwrap();
    let e = Jet::<f64>::generator(&alg, "e").unwrap();
    for trial in 0..20 {
        let group = [GroupKind::SO3, GroupKind::Unitary(2)][trial % 2];
        let x = AlgebraElement::new(group, to_f64(&rand_generator(&mut r, group, &exact), &alg)).unwrap();
        let t = r.gen_range(-2.0..2.0);
        let lhs = exp_map(&x.scale_jet(&e.add_scalar(&t))).unwrap();
        let step = JetMatrix::identity(&alg, group.dim()).checked_add(&x.matrix().scale_jet(&e)).unwrap();
        let rhs = step.matmul(exp_map(&x.scale_real(&t)).unwrap().matrix()).unwrap();
        let scale = rhs.max_abs().max(1.0);
        assert!(lhs.matrix().checked_sub(&rhs).unwrap().is_negligible(1e-10 * scale), "trial {trial}");
    }
}
