use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::rng;

fn e(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

#[test]
fn inner_examples() {
    let id3 = SymMatrix::identity(3);
    assert_eq!(inner(&id3, &id3).unwrap(), 3.0);
    assert_eq!(
        inner(&SymMatrix::diag(&[1.0, -1.0]), &SymMatrix::identity(2)).unwrap(),
        0.0
    );
    for n in 2..6 {
        let p = SymMatrix::outer(&e(n, 0));
        assert_eq!(inner(&p, &p).unwrap(), 1.0);
    }
    assert!(inner(&id3, &SymMatrix::identity(2)).is_err());
}

#[test]
fn constructors_symmetrize() {
    let a = SymMatrix::from_row_major(2, &[1.0, 2.0, 4.0, 3.0]).unwrap();
    assert_eq!(a.get(0, 1), 3.0);
    assert_eq!(a.get(1, 0), 3.0);
}

#[test]
fn plane_projector_examples() {
    let p = plane_projector(2, &[e(2, 0)]).unwrap();
    assert_eq!(p, SymMatrix::diag(&[1.0, 0.0]));
    let p = plane_projector(2, &[e(2, 0), e(2, 1)]).unwrap();
    assert_eq!(p, SymMatrix::identity(2));
    let s = 1.0 / 2f64.sqrt();
    let p = plane_projector(2, &[vec![s, s]]).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            assert!((p.get(i, j) - 0.5).abs() < 1e-15);
        }
    }
    assert!(matches!(
        plane_projector(2, &[vec![1.0, 1.0]]),
        Err(crate::Error::NotOrthonormal { .. })
    ));
}

#[test]
fn orthonormalize_examples() {
    let id = SymMatrix::identity(3);
    let s = SymSubspace::orthonormalize(3, &[id.clone(), id.scaled(2.0)]).unwrap();
    assert_eq!(s.dim(), 1);
    assert!(s.same_span(&identity_line(3), 1e-12));
    let s = SymSubspace::orthonormalize(
        2,
        &[SymMatrix::diag(&[1.0, 0.0]), SymMatrix::diag(&[0.0, 1.0])],
    )
    .unwrap();
    assert_eq!(s.dim(), 2);
    assert_eq!(SymSubspace::orthonormalize(3, &[]).unwrap().dim(), 0);
}

#[test]
fn rank_one_projectors_span_everything() {
    let mut r = rng::seeded(11);
    let gens: Vec<SymMatrix> = (0..50)
        .map(|_| SymMatrix::outer(&rng::unit_vec(&mut r, 3)))
        .collect();
    // Oracle: rank of the Gram matrix via its spectrum.
    let g = SymMatrix::from_fn(50, |i, j| gens[i].dot(&gens[j]));
    let ev = eigvalsh(&g).unwrap();
    let rank = ev.iter().filter(|&&x| x > 1e-8 * ev[49]).count();
    assert_eq!(rank, 6);
    assert_eq!(SymSubspace::orthonormalize(3, &gens).unwrap().dim(), rank);
}

#[test]
fn projection_examples() {
    let mut r = rng::seeded(5);
    let a = rng::gaussian_sym(&mut r, 4);
    let p = identity_line(4).project(&a);
    assert!((&p - &SymMatrix::identity(4).scaled(a.trace() / 4.0)).norm() < 1e-12);
    assert!(traceless(4).project(&SymMatrix::identity(4)).norm() < 1e-12);
    let t = traceless(4);
    let b = t.project(&a);
    assert!((&t.project(&b) - &b).norm() < 1e-12);
}

#[test]
fn complement_examples() {
    for n in 2..6 {
        let t = traceless(n);
        assert_eq!(t.dim(), sym_dim(n) - 1);
        assert!(t.max_cross_inner(&identity_line(n)) < 1e-12);
        assert_eq!(SymSubspace::zero(n).complement().dim(), sym_dim(n));
    }
    let mut r = rng::seeded(9);
    let gens: Vec<SymMatrix> = (0..4).map(|_| rng::gaussian_sym(&mut r, 4)).collect();
    let s = SymSubspace::orthonormalize(4, &gens).unwrap();
    let cc = s.complement().complement();
    assert!(cc.same_span(&s, 1e-10));
    assert!(s.complement().gram_defect() < 1e-10);
}

#[test]
fn vec_subspace_complement() {
    let w = VecSubspace::orthonormalize(3, &[vec![1.0, 1.0, 0.0]]);
    let c = w.complement();
    assert_eq!(c.dim(), 2);
    let p = &w.projector() + &c.projector();
    assert!((&p - &SymMatrix::identity(3)).norm() < 1e-12);
}

#[test]
fn projection_partition_of_identity() {
    let mut r = rng::seeded(21);
    for trial in 0..10 {
        let n = 2 + trial % 4;
        let k = 1 + trial % sym_dim(n);
        let gens: Vec<SymMatrix> = (0..k).map(|_| rng::gaussian_sym(&mut r, n)).collect();
        let s = SymSubspace::orthonormalize(n, &gens).unwrap();
        let c = s.complement();
        assert_eq!(s.dim() + c.dim(), sym_dim(n));
        for _ in 0..100 {
            let a = rng::gaussian_sym(&mut r, n);
            let sum = &s.project(&a) + &c.project(&a);
            assert!((&sum - &a).norm() <= 1e-9 * (1.0 + a.norm()));
        }
    }
}

fn arb_sym(n: usize) -> impl Strategy<Value = SymMatrix> {
    prop::collection::vec(-10.0f64..10.0, n * n)
        .prop_map(move |v| SymMatrix::from_row_major(n, &v).unwrap())
}

proptest! {
    #[test]
    fn inner_symmetric_and_positive(a in arb_sym(4), b in arb_sym(4)) {
        prop_assert_eq!(a.dot(&b), b.dot(&a));
        prop_assert!(a.dot(&a) >= 0.0);
        if a.dot(&a) <= 1e-12 { prop_assert!(a.max_abs() <= 1e-6); }
    }

    #[test]
    fn projector_idempotent_and_traces(a in arb_sym(4), seed in any::<u64>(), k in 1usize..4) {
        let mut r = rng::seeded(seed);
        let frame = VecSubspace::orthonormalize(4, &(0..k).map(|_| rng::gaussian_vec(&mut r, 4)).collect::<Vec<_>>());
        let p = plane_projector(4, frame.basis()).unwrap();
        let p2 = p.to_square().mul(&p.to_square());
        prop_assert!(p2.sub(&p.to_square()).norm() < 1e-10);
        let tr: f64 = frame.basis().iter().map(|w| a.quad(w)).sum();
        prop_assert!((a.dot(&p) - tr).abs() < 1e-10 * (1.0 + a.norm()));
        prop_assert!((p.trace() - frame.dim() as f64).abs() < 1e-12);
    }

    #[test]
    fn pythagoras(a in arb_sym(3), seed in any::<u64>()) {
        let mut r = rng::seeded(seed);
        let s = SymSubspace::orthonormalize(3, &[rng::gaussian_sym(&mut r, 3), rng::gaussian_sym(&mut r, 3)]).unwrap();
        let p = s.project(&a);
        let q = &a - &p;
        prop_assert!((a.dot(&a) - p.dot(&p) - q.dot(&q)).abs() < 1e-9 * (1.0 + a.dot(&a)));
    }

    #[test]
    fn svec_round_trip(a in arb_sym(5)) {
        let v = a.svec();
        prop_assert!((SymMatrix::from_svec(5, &v) - a.clone()).norm() < 1e-12);
        prop_assert!((crate::math::dot(&v, &v) - a.dot(&a)).abs() < 1e-9 * (1.0 + a.dot(&a)));
    }
}
