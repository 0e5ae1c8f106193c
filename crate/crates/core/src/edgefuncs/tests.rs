use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::cones::minimal_cone;
use crate::dirichlet::GridDomain;
use crate::structures::{component_sum, Component, GroupKind, GroupTag};
use crate::symspace::{traceless, SymMatrix, SymSubspace};

fn cube(n: usize, cells: usize) -> Arc<GridDomain> {
    Arc::new(GridDomain::cube(n, -1.0, 1.0, cells).unwrap())
}

fn p_c1() -> ConeHandle {
    let g = GroupTag::with_coords(GroupKind::Un, 1).unwrap();
    minimal_cone(component_sum(g, &[Component::CSkew]).unwrap()).unwrap()
}

fn catalog() -> Vec<ConeHandle> {
    let un = GroupTag::with_coords(GroupKind::Un, 2).unwrap();
    vec![
        minimal_cone(SymSubspace::zero(4)).unwrap(),
        minimal_cone(traceless(4)).unwrap(),
        minimal_cone(component_sum(un, &[Component::CSkew]).unwrap()).unwrap(),
        minimal_cone(component_sum(un, &[Component::CSym0]).unwrap()).unwrap(),
    ]
}

#[test]
fn make_and_eval() {
    let h = EdgeQuadratic::new(
        &SymSubspace::zero(2),
        1.0,
        vec![2.0, 0.0],
        &SymMatrix::zeros(2),
    )
    .unwrap();
    assert_eq!(h.eval(&[1.0, 0.0]), 3.0);

    let b = SymMatrix::diag(&[1.0, -1.0]);
    let h = EdgeQuadratic::new(&traceless(2), 0.5, vec![1.0, -3.0], &b).unwrap();
    assert!((h.eval(&[1.0, 1.0]) - (0.5 + 1.0 - 3.0)).abs() < 1e-12);

    let err = EdgeQuadratic::new(&traceless(2), 0.0, vec![0.0; 2], &SymMatrix::identity(2));
    assert!(matches!(err, Err(Error::NotInSubspace { .. })));

    // a small residual is projected away
    let mut near = b.clone();
    near.axpy(1e-8, &SymMatrix::identity(2));
    let h = EdgeQuadratic::new(&traceless(2), 0.0, vec![0.0; 2], &near).unwrap();
    assert!(h.hess.trace().abs() < 1e-15);
    assert!((&h.hess - &b).norm() < 1e-12);
}

#[test]
fn through_matches_value_and_gradient() {
    let e = traceless(3);
    let hess = e.combine(&[0.3, -1.2, 0.7, 0.1, 2.0]);
    let x0 = [0.2, -0.4, 0.9];
    let grad = [1.0, -2.0, 0.5];
    let h = EdgeQuadratic::through(&e, &x0, 1.5, &grad, &hess).unwrap();
    assert!((h.eval(&x0) - 1.5).abs() < 1e-12);
    for k in 0..3 {
        let mut xp = x0;
        let mut xm = x0;
        xp[k] += 1e-5;
        xm[k] -= 1e-5;
        let g = (h.eval(&xp) - h.eval(&xm)) / 2e-5;
        assert!((g - grad[k]).abs() < 1e-8);
    }
}

#[test]
fn sampling() {
    let affine = sample_edge_quadratics(&SymSubspace::zero(2), 10, 1.0, 3).unwrap();
    assert_eq!(affine.len(), 10);
    assert!(affine.iter().all(|h| h.hess.norm() == 0.0));

    for cone in catalog() {
        let e = cone.edge_of().unwrap();
        let hs = sample_edge_quadratics(&e, 50, 2.0, 11).unwrap();
        for h in &hs {
            assert!(h.hess.norm() <= 2.0 + 1e-12);
            assert!(math::norm(&h.b) <= 2.0 + 1e-12 && h.c.abs() <= 2.0);
            EdgeQuadratic::new(&e, h.c, h.b.clone(), &h.hess).unwrap();
        }
        assert_eq!(hs, sample_edge_quadratics(&e, 50, 2.0, 11).unwrap());
        assert_ne!(hs, sample_edge_quadratics(&e, 50, 2.0, 12).unwrap());
    }
}

#[test]
fn sub_test_examples() {
    let line = cube(1, 20);
    let flat = SymSubspace::zero(1);
    let h = EdgeQuadratic::new(&flat, 0.3, vec![0.7], &SymMatrix::zeros(1)).unwrap();
    let u = GridField::from_fn(line.clone(), |x| h.eval(x) - 1.0);
    let r = sub_test(&u, &h, 1e-12).unwrap();
    assert!(r.premise && r.holds);

    let one = EdgeQuadratic::new(&flat, 1.0, vec![0.0], &SymMatrix::zeros(1)).unwrap();
    let bowl = GridField::from_fn(line.clone(), |x| x[0] * x[0]);
    let r = sub_test(&bowl, &one, 1e-12).unwrap();
    assert!(r.premise && r.holds);

    let cap = GridField::from_fn(line, |x| 1.0 - x[0] * x[0]);
    let r = sub_test(&cap, &one, 1e-12).unwrap();
    assert!(r.premise && r.holds);
    let zero = one.shifted(-1.0);
    let r = sub_test(&cap, &zero, 1e-12).unwrap();
    assert!(r.premise && !r.holds);
    assert!((r.interior_excess - 1.0).abs() < 1e-12);

    // failed premise is vacuous
    let r = sub_test(&cap, &zero.shifted(-0.5), 1e-12).unwrap();
    assert!(!r.premise && r.holds);
}

#[test]
fn witness_examples() {
    let line = cube(1, 20);
    let psd1 = minimal_cone(SymSubspace::zero(1)).unwrap();
    let cap = GridField::from_fn(line.clone(), |x| -x[0] * x[0]);
    let center = line.nearest(&[0.0]).unwrap();
    let w = violation_witness(&cap, &psd1, center)
        .unwrap()
        .expect("witness");
    // P = 2, e = 0, α = 1
    assert!((w.lambda_min - 2.0).abs() < 1e-9);
    assert!(w.quadratic.b[0].abs() < 1e-12);
    assert!((w.quadratic.c + w.margin).abs() < 1e-12);
    let r = w.confirm(0.0).unwrap();
    assert!(r.premise && !r.holds);
    let bowl = GridField::from_fn(line, |x| x[0] * x[0]);
    assert!(violation_witness(&bowl, &psd1, center).unwrap().is_none());

    let plane = cube(2, 16);
    let u = GridField::from_fn(plane.clone(), |x| -(x[0] * x[0] + x[1] * x[1]));
    let node = plane.nearest(&[0.25, -0.125]).unwrap();
    let w = violation_witness(&u, &p_c1(), node)
        .unwrap()
        .expect("witness");
    let r = w.confirm(0.0).unwrap();
    assert!(r.premise && !r.holds);
}

#[test]
fn edge_quadratics_are_harmonic_on_the_grid() {
    let dom = cube(4, 4);
    for (k, cone) in catalog().into_iter().enumerate() {
        let e = cone.edge_of().unwrap();
        for h in sample_edge_quadratics(&e, 4, 3.0, 40 + k as u64).unwrap() {
            let u = GridField::from_fn(dom.clone(), |x| h.eval(x));
            for &node in dom.interior().iter().step_by(5) {
                let a = discrete_hessian(&u, node).unwrap();
                assert!(cone.contains(&a, None).unwrap().verdict.is_member());
                assert!(cone.contains(&-&a, None).unwrap().verdict.is_member());
            }
        }
    }
}

// A grid function `h − bump` with a convex bump at `center` and `h` an edge quadratic.
fn bumped(dom: &Arc<GridDomain>, h: &EdgeQuadratic, center: &[f64], depth: f64) -> GridField {
    let center = center.to_vec();
    let h = h.clone();
    GridField::from_fn(dom.clone(), move |x| {
        let r2: f64 = x.iter().zip(&center).map(|(a, b)| (a - b) * (a - b)).sum();
        h.eval(x) - depth * (r2 + r2 * r2)
    })
}

#[test]
fn witness_iff_outside_the_dual() {
    let dom = cube(4, 6);
    let mut rng = rng::seeded(0xed6e);
    for cone in catalog() {
        let e = cone.edge_of().unwrap();
        for trial in 0..12 {
            let hess = rng::gaussian_sym(&mut rng, 4);
            let u = GridField::from_fn(dom.clone(), |x| 0.5 * hess.quad(x) + 0.1 * x[0]);
            let node = dom.interior()[(trial * 37) % dom.interior().len()];
            let v = cone
                .dual_contains(&discrete_hessian(&u, node).unwrap(), None)
                .unwrap();
            if v.verdict == Verdict::Boundary {
                continue;
            }
            let w = violation_witness(&u, &cone, node).unwrap();
            assert_eq!(w.is_some(), v.verdict == Verdict::Outside);
            if let Some(w) = w {
                let r = w.confirm(0.0).unwrap();
                assert!(r.premise && !r.holds, "{r:?}");
            }
        }
        let h = &sample_edge_quadratics(&e, 1, 1.0, 5).unwrap()[0];
        let center = dom.coords(dom.interior()[dom.interior().len() / 2]);
        let u = bumped(&dom, h, &center, 0.4);
        let node = dom.nearest(&center).unwrap();
        let w = violation_witness(&u, &cone, node)
            .unwrap()
            .expect("bump center");
        let r = w.confirm(0.0).unwrap();
        assert!(r.premise && !r.holds);
    }
}

#[test]
fn dual_subharmonic_grids_are_sub() {
    let dom = cube(2, 12);
    let cones = [minimal_cone(SymSubspace::zero(2)).unwrap(), p_c1()];
    let mut rng = rng::seeded(0x5ab);
    for cone in &cones {
        let e = cone.edge_of().unwrap();
        for trial in 0..3 {
            let p = rng::random_psd(&mut rng, 2, 2);
            let g = &sample_edge_quadratics(&e, 1, 1.0, trial).unwrap()[0];
            let u = GridField::from_fn(dom.clone(), |x| {
                g.eval(x) + 0.5 * p.quad(x) + 0.05 * x[0].powi(4)
            });
            for &node in dom.interior() {
                let v = cone
                    .dual_contains(&discrete_hessian(&u, node).unwrap(), None)
                    .unwrap();
                assert!(v.verdict.is_member());
                assert!(violation_witness(&u, cone, node).unwrap().is_none());
            }
            for h in sample_edge_quadratics(&e, 200, 2.0, 100 + trial).unwrap() {
                let worst = dom
                    .boundary()
                    .iter()
                    .map(|&i| u.value(i) - h.eval(&dom.coords(i)))
                    .fold(f64::MIN, f64::max);
                let h = h.shifted(worst);
                let r = sub_test(&u, &h, 1e-9).unwrap();
                assert!(r.premise && r.holds, "{r:?}");
            }
        }
    }
}
