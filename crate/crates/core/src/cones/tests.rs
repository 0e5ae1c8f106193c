use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::rng;
use crate::structures::{
    component_sum, group_project, Component, GroupKind, GroupTag, PlaneFamilyTag, QuatAxis,
};
use crate::symspace::{eigh, identity_line, SymMatrix, SymSubspace};

fn diag(d: &[f64]) -> SymMatrix {
    SymMatrix::diag(d)
}

fn line(m: SymMatrix) -> SymSubspace {
    SymSubspace::orthonormalize(m.n(), &[m]).unwrap()
}

fn p_c(n: usize) -> (GroupTag, ConeHandle) {
    let g = GroupTag::with_coords(GroupKind::Un, n).unwrap();
    let e = component_sum(g, &[Component::CSkew]).unwrap();
    (g, minimal_cone(e).unwrap())
}

#[test]
fn edge_cone_examples() {
    let cone = minimal_cone(line(diag(&[1.0, -1.0]))).unwrap();
    let v = cone.contains(&diag(&[-3.0, 5.0]), None).unwrap();
    assert_eq!(v.verdict, Verdict::Interior);
    // best translate is t·diag(1,−1) with t = −4, leaving Id
    assert!((v.margin - 1.0).abs() < 1e-7, "{}", v.margin);
    let v = cone.contains(&diag(&[-1.0, -1.0]), None).unwrap();
    assert_eq!(v.verdict, Verdict::Outside);
    assert!((v.margin + 1.0).abs() < 1e-7);
    match v.witness {
        Some(Witness::Polar(z)) => {
            assert!(z.dot(&diag(&[-1.0, -1.0])) < 0.0);
            assert!(crate::symspace::min_eig(&z).unwrap().0 >= -1e-12);
        }
        other => panic!("unexpected witness {other:?}"),
    }
}

#[test]
fn grassmann_example() {
    let cone = ConeHandle::geometric(PlaneFamilyTag::Grass(1), 2, 200, 1).unwrap();
    let v = cone.contains(&diag(&[1.0, -0.1]), None).unwrap();
    assert_eq!(v.verdict, Verdict::Outside);
    assert!((v.margin + 0.1).abs() < 1e-9);
    match v.witness {
        Some(Witness::Plane(f)) => assert!((f[0][1].abs() - 1.0).abs() < 1e-9),
        other => panic!("unexpected witness {other:?}"),
    }
}

#[test]
fn edges_of_named_cones() {
    let n = 4;
    let delta = ConeHandle::laplacian(n);
    assert!(delta.edge_of().unwrap().same_span(&traceless(n), 1e-9));
    let psd = ConeHandle::geometric(PlaneFamilyTag::Grass(1), 3, 100, 2).unwrap();
    assert_eq!(psd.edge_of().unwrap().dim(), 0);
    let lag = ConeHandle::geometric(PlaneFamilyTag::LAG, 4, 100, 3).unwrap();
    let g = GroupTag::with_coords(GroupKind::Un, 2).unwrap();
    let herm0 = component_sum(g, &[Component::CSym0]).unwrap();
    assert!(lag.edge_of().unwrap().same_span(&herm0, 1e-8));
}

#[test]
fn reduced_hessians() {
    let mut r = rng::seeded(11);
    let n = 4;
    let a = rng::gaussian_sym(&mut r, n);
    let delta = ConeHandle::laplacian(n);
    let want = SymMatrix::identity(n).scaled(a.trace() / n as f64);
    assert!((delta.reduced_hessian(&a).unwrap() - want).norm() < 1e-12);
    let psd = ConeHandle::psd(n).unwrap();
    assert!((psd.reduced_hessian(&a).unwrap() - a.clone()).norm() < 1e-12);
    let (g, pc) = p_c(2);
    let want = group_project(g, Component::CSym0, &a).unwrap()
        + group_project(g, Component::Id, &a).unwrap();
    assert!((pc.reduced_hessian(&a).unwrap() - want).norm() < 1e-12);
}

#[test]
fn reduced_constraint_consistency() {
    let (_, pc) = p_c(2);
    let mut r = rng::seeded(12);
    let e = pc.edge_of().unwrap();
    for _ in 0..30 {
        let a =
            &rng::gaussian_sym(&mut r, 4) + &SymMatrix::identity(4).scaled(rng::gaussian(&mut r));
        let c: Vec<f64> = rng::gaussian_vec(&mut r, e.dim());
        let b = &pc.reduced_hessian(&a).unwrap() + &e.combine(&c);
        let v1 = pc.contains(&a, None).unwrap();
        let v2 = pc.contains(&b, None).unwrap();
        assert!(
            (v1.margin - v2.margin).abs() < 1e-6,
            "{} {}",
            v1.margin,
            v2.margin
        );
    }
}

#[test]
fn p_c_margin_matches_closed_form() {
    let (g, pc) = p_c(2);
    let mut r = rng::seeded(13);
    for _ in 0..40 {
        let a = rng::gaussian_sym(&mut r, 4);
        let herm = group_project(g, Component::CSym0, &a).unwrap()
            + group_project(g, Component::Id, &a).unwrap();
        let exact = eigh(&herm).unwrap().min();
        let v = pc.contains(&a, None).unwrap();
        assert!(v.margin <= exact + 1e-9);
        assert!(
            (v.margin - exact).abs() < 1e-7 * (1.0 + a.norm()),
            "{} vs {}",
            v.margin,
            exact
        );
        assert!(v.upper >= exact - 1e-9);
    }
}

#[test]
fn basic_edge_examples() {
    let rep = is_basic_edge(&line(diag(&[1.0, -1.0]))).unwrap();
    assert!(rep.basic);
    let rep = is_basic_edge(&line(diag(&[1.0, 0.0]))).unwrap();
    assert!(!rep.basic);
    let w = rep.witness;
    assert!(crate::symspace::min_eig(&w).unwrap().0 >= -1e-9);
    assert!(matches!(
        minimal_cone(line(diag(&[1.0, 0.0]))),
        Err(Error::NotBasic { .. })
    ));
    for (kind, n) in [
        (GroupKind::On, 3),
        (GroupKind::Un, 2),
        (GroupKind::SpnSp1, 1),
        (GroupKind::SpnS1, 1),
    ] {
        let g = GroupTag::with_coords(kind, n).unwrap();
        for &c in g.edge_components() {
            let s = component_sum(g, &[c]).unwrap();
            if s.dim() == 0 {
                continue;
            }
            assert!(is_basic_edge(&s).unwrap().basic, "{kind:?} {c}");
        }
    }
}

#[test]
fn dichotomy_on_random_edges() {
    // subspaces with a PSD element are not basic; traceless ones are
    let mut r = rng::seeded(14);
    for _ in 0..10 {
        let n = 3;
        let gens: Vec<SymMatrix> = (0..3)
            .map(|_| {
                let a = rng::gaussian_sym(&mut r, n);
                &a - &SymMatrix::identity(n).scaled(a.trace() / n as f64)
            })
            .collect();
        assert!(
            is_basic_edge(&SymSubspace::orthonormalize(n, &gens).unwrap())
                .unwrap()
                .basic
        );
        let mut with_psd = gens.clone();
        with_psd.push(rng::random_psd(&mut r, n, 1));
        let rep = is_basic_edge(&SymSubspace::orthonormalize(n, &with_psd).unwrap()).unwrap();
        // a rank-one PSD generator can still sit in a basic edge only if no PSD combination exists
        assert!(!rep.basic);
    }
}

#[test]
fn minimal_cone_examples() {
    let mut r = rng::seeded(15);
    let n = 3;
    let psd = minimal_cone(SymSubspace::zero(n)).unwrap();
    let delta = minimal_cone(laplacian_edge(n)).unwrap();
    assert!(delta.edge_of().unwrap().same_span(&traceless(n), 1e-8));
    assert!(delta.span_of().unwrap().same_span(&identity_line(n), 1e-8));
    for _ in 0..100 {
        let a =
            &rng::gaussian_sym(&mut r, n) + &SymMatrix::identity(n).scaled(rng::gaussian(&mut r));
        let v = psd.contains(&a, None).unwrap();
        assert!((v.margin - eigh(&a).unwrap().min()).abs() < 1e-9);
        let v = delta.contains(&a, None).unwrap();
        assert!(
            (v.margin - a.trace() / n as f64).abs() < 1e-7,
            "{} {}",
            v.margin,
            a.trace()
        );
    }
}

#[test]
fn support_examples() {
    let h = ConeHandle::halfspace(&diag(&[1.0, 0.0])).unwrap();
    let s = support_of(&h).unwrap();
    assert_eq!(s.support.dim(), 1);
    assert!((s.support.basis()[0][0].abs() - 1.0).abs() < 1e-8);
    let (agree, total) = s.check_extension(&h, 100, 1).unwrap();
    assert_eq!(agree, total);
    assert!(total > 50);
    for cone in [ConeHandle::psd(3).unwrap(), ConeHandle::laplacian(3)] {
        assert_eq!(support_of(&cone).unwrap().support.dim(), 3);
    }
}

#[test]
fn dual_examples() {
    let delta = ConeHandle::laplacian(3);
    let a = diag(&[1.0, 1.0, -1.5]);
    assert_eq!(
        delta.dual_contains(&a, None).unwrap().verdict,
        Verdict::Interior
    );
    assert_eq!(
        delta.dual_contains(&-&a, None).unwrap().verdict,
        Verdict::Outside
    );
    let psd = ConeHandle::psd(2).unwrap();
    let a = diag(&[1.0, -5.0]);
    assert_eq!(
        psd.dual_contains(&a, None).unwrap().verdict,
        Verdict::Interior
    );
    assert_eq!(psd.contains(&a, None).unwrap().verdict, Verdict::Outside);
    let (_, pc) = p_c(2);
    let rep = check_dual_inclusion(&pc, 100, 3).unwrap();
    assert!(rep.violations.is_empty());
}

#[test]
fn minimality_reports() {
    let n = 3;
    let psd = ConeHandle::psd(n).unwrap();
    let rep = check_minimality(&psd, 60, 1).unwrap();
    assert!(rep.clean(), "{:?}", rep.violations);
    assert!(rep.self_duality.self_dual);
    let delta = minimal_cone(laplacian_edge(n)).unwrap();
    let rep = check_minimality(&delta, 60, 2).unwrap();
    assert!(rep.clean(), "{:?}", rep.violations);
    assert!(rep.self_duality.self_dual);
    let (_, pc) = p_c(2);
    let rep = check_minimality(&pc, 60, 3).unwrap();
    assert!(rep.clean(), "{:?}", rep.violations);
    assert!(rep.self_duality.self_dual);
    assert!(rep.polar.checked > 20);
}

#[test]
fn lagrangian_span_is_not_self_dual() {
    let g = GroupTag::with_coords(GroupKind::Un, 2).unwrap();
    let s = component_sum(g, &[Component::Id, Component::CSkew]).unwrap();
    let rep = polar_self_dual(&s, 200, 4).unwrap();
    assert!(!rep.self_dual);
    assert!(rep.worst < -0.2);
    assert!(rep.counterexample.is_some());
}

#[test]
fn cone_properties() {
    let (_, pc) = p_c(2);
    let mut r = rng::seeded(16);
    let e = pc.edge_of().unwrap();
    for _ in 0..40 {
        let a = checks::random_member(&mut r, &e, 1.0);
        let p = rng::random_psd(&mut r, 4, 2);
        assert_ne!(
            pc.contains(&(&a + &p), None).unwrap().verdict,
            Verdict::Outside
        );
        assert_ne!(
            pc.contains(&a.scaled(3.7), None).unwrap().verdict,
            Verdict::Outside
        );
        let b = checks::random_member(&mut r, &e, 1.0);
        assert_ne!(
            pc.contains(&(&a + &b).scaled(0.5), None).unwrap().verdict,
            Verdict::Outside
        );
        // boundary points move inside under a small identity shift
        let v = pc.contains(&a, None).unwrap();
        if v.verdict == Verdict::Boundary {
            let bumped = &a + &SymMatrix::identity(4).scaled(10.0 * v.tol);
            assert_eq!(
                pc.contains(&bumped, None).unwrap().verdict,
                Verdict::Interior
            );
        }
    }
    // edge elements are never interior
    for b in e.basis() {
        assert_ne!(pc.contains(b, None).unwrap().verdict, Verdict::Interior);
    }
    let s = pc.span_of().unwrap();
    assert!(e.max_cross_inner(&s) < 1e-9);
}

#[test]
fn p_c_equals_complex_lines() {
    let (_, pc) = p_c(2);
    let cp = ConeHandle::geometric(PlaneFamilyTag::CP, 4, 200, 5).unwrap();
    let rep = cross_validate_equality(&pc, &cp, 60, 1e-5, 7).unwrap();
    assert_eq!(rep.agreed, rep.compared);
    assert!(rep.compared > 40);
}

#[test]
fn e_i_members_pass_geometric_oracles() {
    let g = GroupTag::with_coords(GroupKind::SpnS1, 1).unwrap();
    let e = component_sum(g, &[Component::EI]).unwrap();
    let cone = minimal_cone(e).unwrap();
    let geo: Vec<ConeHandle> = [
        PlaneFamilyTag::Lag(QuatAxis::I),
        PlaneFamilyTag::QuatCP(QuatAxis::J),
        PlaneFamilyTag::QuatCP(QuatAxis::K),
    ]
    .into_iter()
    .map(|t| ConeHandle::geometric(t, 4, 200, 9).unwrap())
    .collect();
    let rep = cross_validate_inclusion(&cone, &geo, 30, 8).unwrap();
    assert!(rep.failures.is_empty(), "{:?}", rep.failures);
    assert_eq!(rep.members_tested, 30);
}

#[test]
fn halfspace_requires_psd_normal() {
    assert!(ConeHandle::halfspace(&diag(&[1.0, -1.0])).is_err());
    let h = ConeHandle::halfspace(&diag(&[2.0, 0.0])).unwrap();
    assert!((h.margin(&diag(&[3.0, -7.0])).unwrap() - 3.0).abs() < 1e-12);
    let _ = vec![0u8];
}
