mod common;

use std::sync::Arc;

use common::{q, rand_complex, rand_q, rand_vector, rational_orthogonal, rng};
use num_rational::BigRational as Q;
use rand::Rng;
use sdgqm::lie::{matrix_commutator, PhysicalConstants};
use sdgqm::linalg::{inner_product, tensor, JetVector, SmoothComplex};
use sdgqm::quantum::{born, build_hamiltonian, eigentable, evolve, total_spin_ops, StateVector};
use sdgqm::scalar::Backend;
use sdgqm::weil::{AlgebraSpec, Generator, Jet};

fn rand_constants(r: &mut impl Rng) -> PhysicalConstants<Q> {
    let hbar = q(r.gen_range(1..=9), r.gen_range(1..=9));
    let alpha = q(r.gen_range(1..=9), r.gen_range(1..=9));
    PhysicalConstants::new(hbar, alpha, rand_q(r), rand_q(r)).unwrap()
}

#[test]
fn observables_commute_and_table_diagonalizes() {
    let alg = AlgebraSpec::reals(Backend::Exact);
    let mut r = rng(43);
    for _ in 0..10 {
        let c = rand_constants(&mut r);
        let h = build_hamiltonian(&c, &alg).unwrap();
        let (s_sq, s_z) = total_spin_ops(&c, &alg).unwrap();
        assert!(matrix_commutator(&h, &s_sq).unwrap().is_zero());
        assert!(matrix_commutator(&h, &s_z).unwrap().is_zero());
        assert!(matrix_commutator(&s_sq, &s_z).unwrap().is_zero());
        for row in eigentable(&c).unwrap().rows {
            let v = &row.eigenvector;
            for (m, value) in [(&h, &row.energy), (&s_sq, &row.s_squared), (&s_z, &row.s_z)] {
                assert!(m.apply(v).unwrap().checked_sub(&v.scale_real(value)).unwrap().is_zero());
            }
        }
    }
}

fn rand_state(r: &mut impl Rng, alg: &Arc<AlgebraSpec>) -> StateVector<f64> {
    let entries = (0..4).map(|_| SmoothComplex::from_scalars(alg, r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)));
    StateVector::new(JetVector::new(alg, entries.collect()).unwrap())
}

fn approx_constants(r: &mut impl Rng) -> PhysicalConstants<f64> {
    PhysicalConstants::new(r.gen_range(0.2..2.0), r.gen_range(0.1..3.0), r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
        .unwrap()
}

#[test]
fn evolution_is_unitary() {
    let alg = AlgebraSpec::reals(Backend::Approx);
    let mut r = rng(47);
    for _ in 0..10 {
        let c = approx_constants(&mut r);
        let psi0 = rand_state(&mut r, &alg);
        let n0 = *inner_product(psi0.vector(), psi0.vector()).unwrap().re().std_part();
        for t in [0.1, 1.0, 10.0] {
            let psi = evolve(&psi0, &c, &Jet::constant(&alg, t)).unwrap();
            let n = *inner_product(psi.vector(), psi.vector()).unwrap().re().std_part();
            assert!((n - n0).abs() <= 1e-10, "t = {t}: {n} vs {n0}");
        }
    }
}

#[test]
fn one_infinitesimal_step_follows_the_schrodinger_equation() {
    let alg = AlgebraSpec::square_zero("e", Backend::Approx).unwrap();
    let eps = Jet::<f64>::generator(&alg, "e").unwrap();
    let mut r = rng(53);
    for _ in 0..10 {
        let c = approx_constants(&mut r);
        let t = f64::from(r.gen_range(-40..=40)) / f64::from(r.gen_range(1..=8));
        let psi0 = rand_state(&mut r, &alg);
        let psi_t = evolve(&psi0, &c, &Jet::constant(&alg, t)).unwrap();
        let psi_next = evolve(&psi0, &c, &eps.add_scalar(&t)).unwrap();
        let h = build_hamiltonian(&c, &alg).unwrap();
        let kick = SmoothComplex::new(Jet::zero(&alg), eps.scale(&(-1.0 / c.hbar()))).unwrap();
        let expected = psi_t.vector().checked_add(&h.apply(psi_t.vector()).unwrap().scale(&kick)).unwrap();
        let diff = psi_next.vector().checked_sub(&expected).unwrap();
        assert!(diff.max_abs() <= 1e-10, "t = {t}: {}", diff.max_abs());
    }
}

#[test]
fn square_zero_states_annihilate_under_tensor() {
    let algebras = [
        AlgebraSpec::square_zero("e", Backend::Exact).unwrap(),
        AlgebraSpec::truncated("h", 3, Backend::Exact).unwrap(),
        AlgebraSpec::new(vec![Generator::new("a", 2), Generator::new("b", 2)], &[], Backend::Exact).unwrap(),
    ];
    let mut r = rng(59);
    for alg in &algebras {
        let g = &alg.generators()[0].name;
        let base = Jet::<Q>::generator(alg, g).unwrap();
        let eps = if alg.dim() == 4 && alg.generators().len() == 1 { base.pow(2) } else { base };
        assert!((&eps * &eps).is_zero());
        for _ in 0..10 {
            let n = r.gen_range(1..=4);
            let psi = JetVector::new(alg, (0..n).map(|_| rand_complex(&mut r, alg)).collect()).unwrap();
            let small = psi.scale_jet(&eps);
            assert!(tensor(&small, &small).unwrap().is_zero());
        }
    }
}

#[test]
fn born_probabilities_form_a_distribution() {
    let alg = AlgebraSpec::reals(Backend::Exact);
    let mut r = rng(61);
    for _ in 0..20 {
        let psi = StateVector::new(rand_vector(&mut r, &alg, 4));
        let basis: Vec<StateVector<Q>> =
            rational_orthogonal(&mut r, &alg, 4).columns().into_iter().map(StateVector::new).collect();
        let p = born(&psi, &basis).unwrap();
        assert!(p.iter().all(|x| x.0 >= q(0, 1)));
        assert_eq!(p.iter().fold(q(0, 1), |acc, x| acc + x.0.clone()), q(1, 1));
    }
    let approx = AlgebraSpec::reals(Backend::Approx);
    let basis: Vec<_> = (0..4).map(|k| StateVector::new(JetVector::<f64>::unit(&approx, 4, k))).collect();
    for _ in 0..20 {
        let p = born(&rand_state(&mut r, &approx), &basis).unwrap();
        assert!(p.iter().all(|x| x.0 >= 0.0));
        assert!((p.iter().map(|x| x.0).sum::<f64>() - 1.0).abs() <= 1e-12);
    }
}
