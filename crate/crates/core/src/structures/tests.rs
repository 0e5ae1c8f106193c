use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::math;
use crate::rng;
use crate::symspace::{plane_projector, sym_dim, SymMatrix, SymSubspace, VecSubspace};

fn all_tags() -> Vec<GroupTag> {
    vec![
        GroupTag::with_coords(GroupKind::On, 3).unwrap(),
        GroupTag::with_coords(GroupKind::On, 5).unwrap(),
        GroupTag::with_coords(GroupKind::Un, 1).unwrap(),
        GroupTag::with_coords(GroupKind::Un, 2).unwrap(),
        GroupTag::with_coords(GroupKind::Un, 3).unwrap(),
        GroupTag::with_coords(GroupKind::SpnSp1, 1).unwrap(),
        GroupTag::with_coords(GroupKind::SpnSp1, 2).unwrap(),
        GroupTag::with_coords(GroupKind::SpnS1, 1).unwrap(),
        GroupTag::with_coords(GroupKind::SpnS1, 2).unwrap(),
    ]
}

#[test]
fn quaternion_relations() {
    for n in 1..=3 {
        let q = quaternion_triple(n);
        let id = Square::identity(4 * n);
        for x in [&q.i, &q.j, &q.k] {
            assert!(x.mul(x).add(&id).norm() < 1e-12);
            assert!(x.add(&x.transpose()).norm() < 1e-12);
        }
        // applying I then J equals K
        assert!(q.j.mul(&q.i).sub(&q.k).norm() < 1e-12);
        assert!(q.i.mul(&q.j).add(&q.k).norm() < 1e-12);
    }
    let q = quaternion_triple(1);
    let e1 = [1.0, 0.0, 0.0, 0.0];
    assert_eq!(q.j.mul_vec(&q.i.mul_vec(&e1)), vec![0.0, 0.0, 0.0, 1.0]);
    assert_eq!(q.k.mul_vec(&e1), vec![0.0, 0.0, 0.0, 1.0]);
    let q2 = quaternion_triple(2);
    for r in 0..4 {
        for c in 0..4 {
            assert_eq!(q2.i.get(r, c), q2.i.get(r + 4, c + 4));
            assert_eq!(q2.i.get(r, c + 4), 0.0);
        }
    }
}

#[test]
fn component_dimensions() {
    let dims = |t: GroupTag| {
        irreducible_components(t)
            .unwrap()
            .iter()
            .map(|(_, s)| s.dim())
            .collect::<Vec<_>>()
    };
    assert_eq!(dims(GroupTag::new(GroupKind::On, 3).unwrap()), [1, 5]);
    assert_eq!(dims(GroupTag::new(GroupKind::Un, 2).unwrap()), [1, 0, 2]);
    assert_eq!(
        dims(GroupTag::new(GroupKind::SpnS1, 4).unwrap()),
        [1, 0, 3, 3, 3]
    );
    for n in 1..=3usize {
        assert_eq!(
            dims(GroupTag::with_coords(GroupKind::Un, n).unwrap()),
            [1, n * n - 1, n * n + n]
        );
    }
    for n in 1..=3usize {
        let h = 2 * n * n - n;
        let s = 2 * n * n + n;
        assert_eq!(
            dims(GroupTag::with_coords(GroupKind::SpnSp1, n).unwrap()),
            [1, h - 1, 3 * s]
        );
        assert_eq!(
            dims(GroupTag::with_coords(GroupKind::SpnS1, n).unwrap()),
            [1, h - 1, s, s, s]
        );
    }
    for t in all_tags() {
        let comps = irreducible_components(t).unwrap();
        assert_eq!(
            comps.iter().map(|(_, s)| s.dim()).sum::<usize>(),
            sym_dim(t.ambient())
        );
        for (a, sa) in &comps {
            for (b, sb) in &comps {
                if a != b {
                    assert!(sa.max_cross_inner(sb) < 1e-10);
                }
            }
        }
    }
}

#[test]
fn projector_suite() {
    let mut r = rng::seeded(101);
    for t in all_tags() {
        let p = Projectors::new(t);
        for _ in 0..100 {
            let a = rng::gaussian_sym(&mut r, t.ambient());
            let mut sum = SymMatrix::zeros(t.ambient());
            let parts: Vec<SymMatrix> = t
                .components()
                .iter()
                .map(|&c| p.project(c, &a).unwrap())
                .collect();
            for (k, &c) in t.components().iter().enumerate() {
                sum += &parts[k];
                let again = p.project(c, &parts[k]).unwrap();
                assert!((&again - &parts[k]).norm() < 1e-9);
                for (l, &d) in t.components().iter().enumerate() {
                    if k != l {
                        assert!(p.project(d, &parts[k]).unwrap().norm() < 1e-9);
                    }
                }
            }
            assert!((&sum - &a).norm() < 1e-9);
        }
    }
}

#[test]
fn derived_projector_sum_matches_h_skew() {
    let mut r = rng::seeded(102);
    let t = GroupTag::with_coords(GroupKind::SpnS1, 2).unwrap();
    let t1 = GroupTag::with_coords(GroupKind::SpnSp1, 2).unwrap();
    for _ in 0..100 {
        let a = rng::gaussian_sym(&mut r, 8);
        let s = &(&group_project(t, Component::EI, &a).unwrap()
            + &group_project(t, Component::EJ, &a).unwrap())
            + &group_project(t, Component::EK, &a).unwrap();
        let h = group_project(t1, Component::HSkew, &a).unwrap();
        assert!((&s - &h).max_abs() < 1e-10);
    }
}

#[test]
fn e_i_commutation_pattern() {
    let mut r = rng::seeded(103);
    let t = GroupTag::with_coords(GroupKind::SpnS1, 2).unwrap();
    let q = quaternion_triple(2);
    let a = group_project(t, Component::EI, &rng::gaussian_sym(&mut r, 8))
        .unwrap()
        .to_square();
    assert!(a.mul(&q.i).sub(&q.i.mul(&a)).norm() < 1e-12);
    assert!(a.mul(&q.j).add(&q.j.mul(&a)).norm() < 1e-12);
    assert!(a.mul(&q.k).add(&q.k.mul(&a)).norm() < 1e-12);
}

#[test]
fn projection_examples() {
    let un1 = GroupTag::new(GroupKind::Un, 2).unwrap();
    let a = SymMatrix::diag(&[1.0, 0.0]);
    let csym = &group_project(un1, Component::CSym0, &a).unwrap()
        + &group_project(un1, Component::Id, &a).unwrap();
    assert!((&csym - &SymMatrix::identity(2).scaled(0.5)).norm() < 1e-15);
    let cskew = group_project(un1, Component::CSkew, &a).unwrap();
    assert!((&cskew - &SymMatrix::diag(&[0.5, -0.5])).norm() < 1e-15);
    let sp = GroupTag::new(GroupKind::SpnSp1, 8).unwrap();
    let id = SymMatrix::identity(8);
    assert!((&group_project(sp, Component::Id, &id).unwrap() - &id).norm() < 1e-15);
    assert!(group_project(sp, Component::HSym0, &id).unwrap().norm() < 1e-15);
    assert!(group_project(sp, Component::HSkew, &id).unwrap().norm() < 1e-15);
    assert!(matches!(
        group_project(sp, Component::EI, &id),
        Err(crate::Error::UnknownComponent(_))
    ));
    assert!("nope".parse::<Component>().is_err());
}

#[test]
fn equivariance() {
    let mut r = rng::seeded(104);
    for t in all_tags() {
        let p = Projectors::new(t);
        // Sp(n)·S¹ moves E_J into E_K; those two are checked separately below.
        let comps: Vec<Component> = t
            .components()
            .iter()
            .copied()
            .filter(|c| !matches!(c, Component::EJ | Component::EK))
            .collect();
        let group = MatrixGroup::of_tag(t);
        for _ in 0..50 {
            let g = group.sample(&mut r);
            assert!(g.orthogonality_defect() < 1e-10);
            let a = rng::gaussian_sym(&mut r, t.ambient());
            for &c in &comps {
                let lhs = p.project(c, &g.pullback(&a)).unwrap();
                let rhs = g.pullback(&p.project(c, &a).unwrap());
                assert!((&lhs - &rhs).norm() < 1e-8, "{t} {c}");
            }
            if t.kind() == GroupKind::SpnS1 {
                let jk = |m: &SymMatrix| {
                    &p.project(Component::EJ, m).unwrap() + &p.project(Component::EK, m).unwrap()
                };
                assert!((&jk(&g.pullback(&a)) - &g.pullback(&jk(&a))).norm() < 1e-8);
                let h = MatrixGroup::SpQ8(t.coords()).sample(&mut r);
                for c in [Component::EJ, Component::EK] {
                    let lhs = p.project(c, &h.pullback(&a)).unwrap();
                    let rhs = h.pullback(&p.project(c, &a).unwrap());
                    assert!((&lhs - &rhs).norm() < 1e-8);
                }
            }
        }
    }
}

#[test]
fn dimensions_stable_across_seeds() {
    // Rank of projected random matrices, an oracle independent of the basis construction.
    for t in all_tags() {
        let p = Projectors::new(t);
        for &c in t.components() {
            let reference = p.subspace(c).unwrap().dim();
            for seed in 0..5 {
                let mut r = rng::seeded(seed);
                let gens: Vec<SymMatrix> = (0..sym_dim(t.ambient()) + 4)
                    .map(|_| {
                        p.project(c, &rng::gaussian_sym(&mut r, t.ambient()))
                            .unwrap()
                    })
                    .collect();
                assert_eq!(
                    SymSubspace::orthonormalize(t.ambient(), &gens)
                        .unwrap()
                        .dim(),
                    reference
                );
            }
        }
    }
}

#[test]
fn group_samplers() {
    let un = GroupTag::with_coords(GroupKind::Un, 3).unwrap();
    let i = complex_structure(3);
    for seed in 0..20 {
        let g = sample_group_element(un, seed);
        assert!(g.mul(&i).sub(&i.mul(&g)).norm() < 1e-9);
        assert!(g.orthogonality_defect() < 1e-10);
    }
    let sp = GroupTag::with_coords(GroupKind::SpnSp1, 2).unwrap();
    let q = quaternion_triple(2);
    let imh = [&q.i, &q.j, &q.k];
    for seed in 0..20 {
        let g = sample_group_element(sp, seed);
        assert!(g.orthogonality_defect() < 1e-10);
        for x in imh {
            let y = g.transpose().mul(x).mul(&g);
            // project back onto span{I, J, K}
            let mut rest = y.clone();
            for z in imh {
                let c = (0..64)
                    .map(|k| y.as_slice()[k] * z.as_slice()[k])
                    .sum::<f64>()
                    / 8.0;
                rest = rest.sub(&z.scaled(c));
            }
            assert!(rest.norm() < 1e-9);
        }
    }
}

#[test]
fn reduced_projected_pe_examples() {
    let p = reduced_projected_pe(&[1.0, 0.0, 0.0, 0.0]).unwrap();
    assert!((&p - &SymMatrix::diag(&[1.0, 0.0, 0.0, 0.0])).norm() < 1e-15);
    assert!(reduced_projected_pe(&[2.0, 0.0, 0.0, 0.0]).is_err());
    let t = GroupTag::with_coords(GroupKind::SpnSp1, 2).unwrap();
    let s = component_sum(t, &[Component::Id, Component::HSkew]).unwrap();
    let mut r = rng::seeded(105);
    for _ in 0..100 {
        let e = rng::unit_vec(&mut r, 8);
        let a = reduced_projected_pe(&e).unwrap();
        assert!((a.trace() - 1.0).abs() < 1e-12);
        assert!((&a - &s.project(&SymMatrix::outer(&e))).norm() < 1e-9);
    }
}

fn max_abs_inner(frame: &[Vec<f64>], x: &Square) -> f64 {
    let mut m: f64 = 0.0;
    for u in frame {
        let xu = x.mul_vec(u);
        for v in frame {
            m = m.max(math::dot(v, &xu).abs());
        }
    }
    m
}

#[test]
fn plane_samplers() {
    let mut r = rng::seeded(106);
    let q = quaternion_triple(2);
    let ic = complex_structure(2);
    for _ in 0..100 {
        let w = sample_plane(PlaneFamilyTag::LAG, 4, &mut r).unwrap();
        assert!(plane_projector(4, &w).is_ok());
        assert!(max_abs_inner(&w, &ic) < 1e-10);
        let w = sample_plane(PlaneFamilyTag::CP, 4, &mut r).unwrap();
        assert!(plane_projector(4, &w).is_ok());
        assert!((math::dot(&ic.mul_vec(&w[0]), &w[1]) - 1.0).abs() < 1e-10);
        let w = sample_plane(PlaneFamilyTag::HLAG, 8, &mut r).unwrap();
        let mut all = w.clone();
        for x in [&q.i, &q.j, &q.k] {
            all.extend(w.iter().map(|e| x.mul_vec(e)));
        }
        assert!(plane_projector(8, &all).is_ok());
        let w = sample_plane(PlaneFamilyTag::GlIJK, 8, &mut r).unwrap();
        assert!(plane_projector(8, &w).is_ok());
        assert_eq!(w.len(), 4);
        let w = sample_plane(PlaneFamilyTag::HP, 8, &mut r).unwrap();
        assert!(plane_projector(8, &w).is_ok());
        for a in QuatAxis::ALL {
            let w = sample_plane(PlaneFamilyTag::Lag(a), 8, &mut r).unwrap();
            assert!(max_abs_inner(&w, q.axis(a)) < 1e-10);
            let w = sample_plane(PlaneFamilyTag::QuatCP(a), 8, &mut r).unwrap();
            assert!(plane_projector(8, &w).is_ok());
        }
        let w = sample_plane(PlaneFamilyTag::Grass(3), 5, &mut r).unwrap();
        assert!(plane_projector(5, &w).is_ok());
    }
    let w = sample_plane(PlaneFamilyTag::HLAG, 4, &mut r).unwrap();
    assert_eq!(w.len(), 1);
    let orbit = q.orbit(
        &w[0]
            .iter()
            .chain([0.0; 4].iter())
            .copied()
            .collect::<Vec<_>>(),
    );
    assert!(plane_projector(8, &orbit).is_ok());
}

#[test]
fn gl_ijk_span_is_id_plus_e_i() {
    let mut r = rng::seeded(107);
    let gens: Vec<SymMatrix> = (0..200)
        .map(|_| {
            plane_projector(8, &sample_plane(PlaneFamilyTag::GlIJK, 8, &mut r).unwrap()).unwrap()
        })
        .collect();
    let span = SymSubspace::orthonormalize(8, &gens).unwrap();
    let t = GroupTag::with_coords(GroupKind::SpnS1, 2).unwrap();
    let expected = component_sum(t, &[Component::Id, Component::EI]).unwrap();
    assert_eq!(span.dim(), expected.dim());
    assert!(span.same_span(&expected, 1e-8));
}

#[test]
fn canonical_form_examples() {
    let a = SymMatrix::diag(&[1.0, 1.0, -1.0, -1.0]);
    let f = canonical_form_ei(&a).unwrap();
    assert!((f.lambdas[0] - 1.0).abs() < 1e-12);
    // The frame vector lies in the complex line spanned by e₁ and I e₁ = e₂.
    let e = &f.hframe[0];
    assert!((e[0] * e[0] + e[1] * e[1] - 1.0).abs() < 1e-12);
    let z = canonical_form_ei(&SymMatrix::zeros(8)).unwrap();
    assert!(z.lambdas.iter().all(|&l| l == 0.0));
    assert!(canonical_form_ei(&SymMatrix::identity(4)).is_err());

    let mut r = rng::seeded(108);
    for k in 0..100 {
        let n = 1 + k % 3;
        let t = GroupTag::with_coords(GroupKind::SpnS1, n).unwrap();
        let a = group_project(t, Component::EI, &rng::gaussian_sym(&mut r, 4 * n)).unwrap();
        let f = canonical_form_ei(&a).unwrap();
        assert!((&a - &f.reconstruct()).norm() < 1e-8 * (1.0 + a.norm()));
        let mut expected: Vec<f64> = f.lambdas.iter().flat_map(|&l| [l, l, -l, -l]).collect();
        expected.sort_by(f64::total_cmp);
        let ev = crate::symspace::eigvalsh(&a).unwrap();
        for (x, y) in ev.iter().zip(&expected) {
            assert!((x - y).abs() < 1e-9 * (1.0 + a.norm()));
        }
        let q = quaternion_triple(n);
        let mut all = Vec::new();
        for e in &f.hframe {
            all.extend(q.orbit(e));
        }
        assert!(crate::symspace::frame_defect(&all) < 1e-9);
    }
}

#[test]
fn monge_ampere_examples() {
    let on = GroupTag::new(GroupKind::On, 3).unwrap();
    assert!((monge_ampere_value(on, &SymMatrix::identity(3)).unwrap() - 1.0).abs() < 1e-12);
    let un = GroupTag::new(GroupKind::Un, 2).unwrap();
    let v = monge_ampere_value(un, &SymMatrix::diag(&[3.0, 5.0])).unwrap();
    assert!((v - 4.0).abs() < 1e-12);
    let sp = GroupTag::new(GroupKind::SpnSp1, 4).unwrap();
    assert!((monge_ampere_value(sp, &SymMatrix::identity(4)).unwrap() - 1.0).abs() < 1e-12);
    let s1 = GroupTag::new(GroupKind::SpnS1, 4).unwrap();
    assert!(monge_ampere_value(s1, &SymMatrix::identity(4)).is_err());
    // Complex determinant of a block-diagonal hermitian matrix.
    let un2 = GroupTag::new(GroupKind::Un, 4).unwrap();
    let v = monge_ampere_value(un2, &SymMatrix::diag(&[2.0, 2.0, 3.0, 3.0])).unwrap();
    assert!((v - 6.0).abs() < 1e-12);
}

#[test]
fn vec_frames_from_planes_are_orthonormal() {
    let mut r = rng::seeded(109);
    let w = sample_plane(PlaneFamilyTag::Grass(2), 4, &mut r).unwrap();
    assert_eq!(VecSubspace::orthonormalize(4, &w).dim(), 2);
}
