use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::cones::{laplacian_edge, minimal_cone, ConeHandle};
use crate::rng;
use crate::structures::{component_sum, Component, GroupKind, GroupTag};
use crate::symspace::{SymMatrix, SymSubspace};

fn square(cells: usize) -> Arc<GridDomain> {
    Arc::new(GridDomain::cube(2, -1.0, 1.0, cells).unwrap())
}

#[test]
fn hessian_is_exact_on_quadratics() {
    let mut r = rng::seeded(1);
    for n in 1..=4 {
        let dom = Arc::new(GridDomain::cube(n, -1.0, 1.0, 6).unwrap());
        let b = rng::gaussian_sym(&mut r, n);
        let lin = rng::gaussian_vec(&mut r, n);
        let u = GridField::from_fn(dom.clone(), |x| {
            0.5 * b.quad(x) + crate::math::dot(&lin, x) + 3.0
        });
        for &i in dom.interior().iter().take(20) {
            let a = discrete_hessian(&u, i).unwrap();
            assert!((a - b.clone()).max_abs() < 1e-9 * (1.0 + b.max_abs()));
        }
        let aff = GridField::from_fn(dom.clone(), |x| 1.0 + crate::math::dot(&lin, x));
        assert!(discrete_hessian(&aff, dom.interior()[0]).unwrap().max_abs() < 1e-10);
    }
    let dom = square(4);
    let u = GridField::from_fn(dom.clone(), |x| x[0] * x[1]);
    let center = dom.nearest(&[0.0, 0.0]).unwrap();
    let a = discrete_hessian(&u, center).unwrap();
    assert!(
        (a - SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()).max_abs() < 1e-12
    );
    assert!(discrete_hessian(&u, dom.boundary()[0]).is_err());
}

#[test]
fn ball_masks() {
    let dom = GridDomain::ball(&[0.0, 0.0], 1.0, 0.25).unwrap();
    for &i in dom.interior() {
        assert!(crate::math::norm(&dom.coords(i)) < 1.0);
        for nb in dom.stencil_neighbors(i) {
            assert_ne!(dom.kind(nb), NodeKind::Exterior);
        }
    }
    for &i in dom.boundary() {
        assert!(crate::math::norm(&dom.coords(i)) >= 1.0 - 1e-12);
        assert!((crate::math::norm(&dom.boundary_point(i)) - 1.0).abs() < 1e-12);
    }
    let cut = dom
        .interior()
        .iter()
        .filter(|&&i| dom.is_cut_node(i))
        .count();
    assert!(cut > 0 && cut < dom.interior().len());
    assert!(!dom.is_cut_node(dom.nearest(&[0.0, 0.0]).unwrap()));
    let cube = GridDomain::cube(2, -1.0, 1.0, 8).unwrap();
    assert!(cube.interior().iter().all(|&i| !cube.is_cut_node(i)));
}

#[test]
fn laplace_1d_is_linear() {
    let dom = Arc::new(GridDomain::cube(1, 0.0, 1.0, 10).unwrap());
    let phi = GridField::with_boundary(
        dom,
        &BoundaryFn::Affine {
            c: 0.0,
            b: vec![1.0],
        },
        0.0,
    )
    .unwrap();
    let sol = perron_solve(
        &ConeHandle::laplacian(1),
        &phi,
        &PerronOptions {
            tol: 1e-12,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(sol.converged);
    for &i in phi.domain().interior() {
        assert!((sol.field.value(i) - phi.domain().coords(i)[0]).abs() < 1e-9);
    }
}

#[test]
fn laplace_disk_saddle() {
    let phi_fn = BoundaryFn::saddle(2).unwrap();
    let cross = PerronOptions {
        scheme: Scheme::Cross,
        ..Default::default()
    };
    let mut errs = Vec::new();
    for h in [0.25, 0.125, 1.0 / 16.0] {
        let dom = Arc::new(GridDomain::ball(&[0.0, 0.0], 1.0, h).unwrap());
        let phi = GridField::with_boundary(dom.clone(), &phi_fn, 0.0).unwrap();
        let err = |opts: &PerronOptions| {
            let sol = perron_solve(&ConeHandle::laplacian(2), &phi, opts).unwrap();
            assert!(sol.converged);
            dom.interior()
                .iter()
                .map(|&i| (sol.field.value(i) - phi_fn.eval(&dom.coords(i))).abs())
                .fold(0.0, f64::max)
        };
        // the directional scheme is exact on edge quadratics
        assert!(err(&PerronOptions::default()) < 1e-6);
        let e = err(&cross);
        assert!(e < 5.0 * h * h, "h = {h}: {e}");
        errs.push(e);
    }
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
}

#[test]
fn psd_box_affine_is_exact() {
    let dom = square(8);
    let data = BoundaryFn::Affine {
        c: 0.3,
        b: vec![1.0, -2.0],
    };
    let phi = GridField::with_boundary(dom.clone(), &data, 0.0).unwrap();
    let sol = perron_solve(
        &ConeHandle::psd(2).unwrap(),
        &phi,
        &PerronOptions::default(),
    )
    .unwrap();
    assert!(sol.converged);
    for &i in dom.interior() {
        assert!((sol.field.value(i) - data.eval(&dom.coords(i))).abs() < 1e-6);
    }
}

#[test]
fn bisection_and_red_black_agree_with_shift() {
    let dom = square(6);
    let data = BoundaryFn::Trig {
        amplitude: 1.0,
        k: vec![1.3, 0.7],
        phase: 0.2,
    };
    let phi = GridField::with_boundary(dom.clone(), &data, 0.0).unwrap();
    let cone = ConeHandle::psd(2).unwrap();
    let cross = PerronOptions {
        tol: 1e-10,
        scheme: Scheme::Cross,
        ..Default::default()
    };
    let base = perron_solve(&cone, &phi, &cross).unwrap();
    let bis = perron_solve(
        &cone,
        &phi,
        &PerronOptions {
            update: NodeUpdate::Bisection,
            ..cross.clone()
        },
    )
    .unwrap();
    let rb = perron_solve(
        &cone,
        &phi,
        &PerronOptions {
            order: SweepOrder::RedBlack,
            ..cross.clone()
        },
    )
    .unwrap();
    assert!(base.field.max_diff(&bis.field) < 1e-7);
    assert!(base.field.max_diff(&rb.field) < 1e-7);
    let dir = PerronOptions {
        tol: 1e-10,
        ..Default::default()
    };
    let a = perron_solve(&cone, &phi, &dir).unwrap();
    let b = perron_solve(
        &cone,
        &phi,
        &PerronOptions {
            order: SweepOrder::RedBlack,
            ..dir.clone()
        },
    )
    .unwrap();
    assert!(a.field.max_diff(&b.field) < 1e-7);
}

#[test]
fn solutions_are_harmonic_at_every_node() {
    let dom = square(6);
    let data = BoundaryFn::Trig {
        amplitude: 1.0,
        k: vec![2.0, 1.0],
        phase: 0.0,
    };
    let phi = GridField::with_boundary(dom.clone(), &data, 0.0).unwrap();
    let g = GroupTag::with_coords(GroupKind::Un, 1).unwrap();
    let cone = minimal_cone(component_sum(g, &[Component::CSkew]).unwrap()).unwrap();
    let sol = perron_solve(
        &cone,
        &phi,
        &PerronOptions {
            scheme: Scheme::Cross,
            ..Default::default()
        },
    )
    .unwrap();
    for &i in dom.interior() {
        let a = discrete_hessian(&sol.field, i).unwrap();
        assert!(cone.margin(&a).unwrap().abs() < 1e-5);
    }
}

#[test]
fn complex_line_collapses_to_laplacian() {
    let dom = square(8);
    let data = BoundaryFn::MaxAffine(vec![(0.0, vec![1.0, 0.5]), (0.2, vec![-1.0, 0.3])]);
    let phi = GridField::with_boundary(dom.clone(), &data, 0.0).unwrap();
    let g = GroupTag::with_coords(GroupKind::Un, 1).unwrap();
    let pc = minimal_cone(component_sum(g, &[Component::CSkew]).unwrap()).unwrap();
    let opts = PerronOptions {
        tol: 1e-11,
        ..Default::default()
    };
    let a = perron_solve(&pc, &phi, &opts).unwrap();
    let b = perron_solve(&ConeHandle::laplacian(2), &phi, &opts).unwrap();
    assert!(a.field.max_diff(&b.field) < 1e-6);
}

#[test]
fn comparison_and_maximum_principle() {
    let dom = square(6);
    let mut r = rng::seeded(4);
    let cone = ConeHandle::psd(2).unwrap();
    for _ in 0..3 {
        let k = rng::gaussian_vec(&mut r, 2);
        let data = BoundaryFn::Trig {
            amplitude: 1.0,
            k,
            phase: rng::gaussian(&mut r),
        };
        let low = GridField::with_boundary(dom.clone(), &data, 0.0).unwrap();
        let bump = 0.3 * rng::uniform(&mut r);
        let high =
            GridField::from_values(dom.clone(), low.values().iter().map(|v| v + bump).collect())
                .unwrap();
        let s1 = perron_solve(&cone, &low, &PerronOptions::default()).unwrap();
        let s2 = perron_solve(&cone, &high, &PerronOptions::default()).unwrap();
        for &i in dom.interior() {
            assert!(s1.field.value(i) <= s2.field.value(i) + 1e-8);
            assert!(s1.field.value(i) <= low.boundary_max() + 1e-8);
        }
    }
}

#[test]
fn trivially_extended_halfspace_reduces_to_slices() {
    let dom = square(6);
    let data = BoundaryFn::Trig {
        amplitude: 1.0,
        k: vec![1.0, 2.0],
        phase: 0.3,
    };
    let phi = GridField::with_boundary(dom.clone(), &data, 0.0).unwrap();
    let cone = ConeHandle::halfspace(&SymMatrix::diag(&[1.0, 0.0])).unwrap();
    let sol = perron_solve(
        &cone,
        &phi,
        &PerronOptions {
            tol: 1e-12,
            ..Default::default()
        },
    )
    .unwrap();
    // each fixed-y slice solves u'' = 0 with the slice's end values
    let line = Arc::new(GridDomain::cube(1, -1.0, 1.0, 6).unwrap());
    for j in 1..6 {
        let y = -1.0 + j as f64 * dom.h();
        let slice = GridField::with_boundary(
            line.clone(),
            &BoundaryFn::Affine {
                c: 0.5 * (data.eval(&[1.0, y]) + data.eval(&[-1.0, y])),
                b: vec![0.5 * (data.eval(&[1.0, y]) - data.eval(&[-1.0, y]))],
            },
            0.0,
        )
        .unwrap();
        let s1 = perron_solve(
            &ConeHandle::laplacian(1),
            &slice,
            &PerronOptions {
                tol: 1e-12,
                ..Default::default()
            },
        )
        .unwrap();
        for i in 1..6 {
            let v2 = sol.field.value(dom.index_of(&[i, j]).unwrap());
            assert!((v2 - s1.field.value(i)).abs() < 1e-8);
        }
    }
}

#[test]
fn envelope_examples() {
    let line = Arc::new(GridDomain::cube(1, -1.0, 1.0, 4).unwrap());
    let zero = SymSubspace::zero(1);
    let phi = GridField::with_boundary(
        line.clone(),
        &BoundaryFn::Affine {
            c: 1.0,
            b: vec![0.0],
        },
        0.0,
    )
    .unwrap();
    assert!((edge_envelope(&zero, &phi, &[0.0], None).unwrap().value - 1.0).abs() < 1e-9);
    let phi = GridField::with_boundary(
        line,
        &BoundaryFn::Affine {
            c: 0.5,
            b: vec![0.5],
        },
        0.0,
    )
    .unwrap();
    let v = edge_envelope(&zero, &phi, &[0.0], None).unwrap();
    assert!((v.value - 0.5).abs() < 1e-9);
    assert!(v.stable);
    let disk = Arc::new(GridDomain::ball(&[0.0, 0.0], 1.0, 0.125).unwrap());
    let phi = GridField::with_boundary(disk, &BoundaryFn::saddle(2).unwrap(), 0.0).unwrap();
    let v = edge_envelope(&laplacian_edge(2), &phi, &[0.0, 0.0], None).unwrap();
    assert!(v.value.abs() < 1e-8, "{}", v.value);
}

#[test]
fn envelope_below_perron() {
    let dom = square(8);
    let data = BoundaryFn::MaxAffine(vec![(0.0, vec![1.0, 0.5]), (0.2, vec![-1.0, 0.3])]);
    let phi = GridField::with_boundary(dom.clone(), &data, 0.0).unwrap();
    let rep = envelope_report(
        &ConeHandle::psd(2).unwrap(),
        &phi,
        10,
        1,
        &PerronOptions::default(),
    )
    .unwrap();
    rep.check_ordering(1e-6).unwrap();
    assert!(rep.max_gap() <= 10.0 * dom.h());
}

#[test]
#[ignore]
fn measure_envelope_excess() {
    extern crate std;
    for cells in [8, 16, 32] {
        let dom = square(cells);
        let data = BoundaryFn::MaxAffine(vec![(0.0, vec![1.0, 0.5]), (0.2, vec![-1.0, 0.3])]);
        let phi = GridField::with_boundary(dom.clone(), &data, 0.0).unwrap();
        let rep = envelope_report(
            &ConeHandle::psd(2).unwrap(),
            &phi,
            30,
            1,
            &PerronOptions::default(),
        )
        .unwrap();
        let smooth = BoundaryFn::Trig {
            amplitude: 1.0,
            k: vec![1.3, 0.7],
            phase: 0.2,
        };
        let phi2 = GridField::with_boundary(dom.clone(), &smooth, 0.0).unwrap();
        let rep2 = envelope_report(
            &ConeHandle::psd(2).unwrap(),
            &phi2,
            30,
            1,
            &PerronOptions::default(),
        )
        .unwrap();
        let cross = PerronOptions {
            scheme: Scheme::Cross,
            ..Default::default()
        };
        let rep3 = envelope_report(&ConeHandle::psd(2).unwrap(), &phi, 30, 1, &cross).unwrap();
        std::println!("  cross: maxaffine excess {:.3e}", rep3.max_excess());
        std::println!(
            "cells {cells}: maxaffine excess {:.3e} gap {:.3e}; trig excess {:.3e} gap {:.3e}",
            rep.max_excess(),
            rep.max_gap(),
            rep2.max_excess(),
            rep2.max_gap()
        );
    }
}
