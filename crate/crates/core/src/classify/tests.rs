use super::*;
use crate::structures::Projectors;

fn tag(kind: GroupKind, n: usize) -> GroupTag {
    GroupTag::with_coords(kind, n).unwrap()
}

#[test]
fn catalog_counts_and_identifications() {
    let on = enumerate_basic_edges(tag(GroupKind::On, 3)).unwrap();
    assert_eq!(on.len(), 2);
    assert_eq!(on[0].identification, "P");
    assert!(on[0].edge.is_zero());
    assert!(on[1].edge.same_span(&traceless(3), 1e-10));

    let un = enumerate_basic_edges(tag(GroupKind::Un, 3)).unwrap();
    assert_eq!(un.len(), 4);
    let ids: Vec<&str> = un.iter().map(|e| e.identification.as_str()).collect();
    assert_eq!(ids, ["P", "P(LAG)", "P_C", "Laplacian"]);
    assert!(un[3].edge.same_span(&traceless(6), 1e-10));

    let sp = enumerate_basic_edges(tag(GroupKind::SpnSp1, 2)).unwrap();
    assert_eq!(sp.len(), 4);
    assert!(sp[3].edge.same_span(&traceless(8), 1e-10));

    let s1 = enumerate_basic_edges(tag(GroupKind::SpnS1, 2)).unwrap();
    assert_eq!(s1.len(), 16);
    let new: Vec<String> = s1.iter().filter(|e| is_new(e)).map(|e| e.label()).collect();
    assert_eq!(new.len(), 6);
    assert!(new.contains(&String::from("e_i")));
    assert!(new.contains(&String::from("h_sym0+e_j+e_k")));
}

#[test]
fn ijk_entry_matches_its_edge_formula() {
    let t = tag(GroupKind::SpnS1, 2);
    let entry = enumerate_basic_edges(t)
        .unwrap()
        .into_iter()
        .find(|e| e.components == [Component::HSym0, Component::EJ, Component::EK])
        .unwrap();
    // ℍ-symmetric traceless plus the J and K parts of the ℍ-skew component
    let p = Projectors::new(t);
    let gens: Vec<SymMatrix> = crate::symspace::standard_basis(8)
        .iter()
        .flat_map(|b| {
            let skew = group_project_skew(&p, b);
            let mut ij = p.project(Component::EJ, &skew).unwrap();
            ij += &p.project(Component::EK, &skew).unwrap();
            [p.project(Component::HSym0, b).unwrap(), ij]
        })
        .collect();
    let expected = SymSubspace::orthonormalize(8, &gens).unwrap();
    assert!(entry.edge.same_span(&expected, 1e-10));
}

fn group_project_skew(p: &Projectors, b: &SymMatrix) -> SymMatrix {
    let sp1 = GroupTag::new(GroupKind::SpnSp1, p.tag().ambient()).unwrap();
    Projectors::new(sp1).project(Component::HSkew, b).unwrap()
}

#[test]
fn invariance_examples() {
    let on = tag(GroupKind::On, 3);
    assert!(invariance_check(&traceless(3), on, 50, 1).unwrap());
    let un = tag(GroupKind::Un, 2);
    let c_skew = component_sum(un, &[Component::CSkew]).unwrap();
    assert!(invariance_check(&c_skew, un, 50, 2).unwrap());

    let s1 = tag(GroupKind::SpnS1, 2);
    let e_i = component_sum(s1, &[Component::EI]).unwrap();
    assert!(!invariance_check(&e_i, tag(GroupKind::SpnSp1, 2), 50, 3).unwrap());
    // right multiplication by (1 + j)/√2 alone already moves E_I
    let q = crate::structures::quaternion_triple(2);
    let s = 1.0 / crate::math::sqrt(2.0);
    let g = q.right_scalar(s, 0.0, s, 0.0);
    let worst = e_i
        .basis()
        .iter()
        .map(|b| e_i.residual(&g.pullback(b)))
        .fold(0.0, f64::max);
    assert!(worst > 0.5, "{worst}");
}

#[test]
fn own_and_designated_invariance() {
    let report = classification_report(2, 1, 30, 7).unwrap();
    assert_eq!(report.counts(), [2, 4, 4, 16]);
    assert!(report.failures().is_empty(), "{:#?}", report.failures());
    // ℍ¹ has no traceless ℍ-symmetric part
    let s1 = &report.groups[3].1;
    assert!(s1.iter().any(|e| e.degenerate));
}

#[test]
fn named_cones() {
    for name in CONE_NAMES {
        let n = if name == "P_EI" || name == "P_IJK" {
            2
        } else {
            1
        };
        let cone = named_cone(name, n).unwrap();
        assert!(cone.as_edge().is_some(), "{name}");
    }
    assert!(named_cone("nope", 2).is_err());
    assert_eq!(named_cone("P_C", 2).unwrap().n(), 4);
}
