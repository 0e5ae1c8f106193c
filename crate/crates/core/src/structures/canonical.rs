use alloc::vec::Vec;

use super::quaternion::quaternion_triple;
use super::{Component, GroupKind, GroupTag, Projectors};
use crate::error::{Error, Result};
use crate::symspace::{eigh, eigvalsh, SymMatrix};

/// `A = Σ λ_j (P_{e_j} + P_{Ie_j} − P_{Je_j} − P_{Ke_j})` for `A ∈ E_I`.
#[derive(Debug, Clone)]
pub struct CanonicalFormEI {
    /// Non-negative, descending.
    pub lambdas: Vec<f64>,
    /// `ℍ`-orthonormal vectors `e_j`.
    pub hframe: Vec<Vec<f64>>,
}

impl CanonicalFormEI {
    pub fn reconstruct(&self) -> SymMatrix {
        let big_n = self.hframe.first().map_or(0, |e| e.len());
        let q = quaternion_triple(big_n / 4);
        let mut a = SymMatrix::zeros(big_n);
        for (l, e) in self.lambdas.iter().zip(&self.hframe) {
            let [e0, ie, je, ke] = q.orbit(e);
            a.add_outer(*l, &e0);
            a.add_outer(*l, &ie);
            a.add_outer(-*l, &je);
            a.add_outer(-*l, &ke);
        }
        a
    }
}

/// Groups the spectrum of `A ∈ E_I` into quaternionic lines.
///
/// An eigenvector `e` for `λ` gives `Ie` for `λ` and `Je, Ke` for `−λ`, so
/// the top eigenvector of `A` restricted to the orthogonal complement of the
/// lines found so far always starts a new line with `λ ≥ 0`.
pub fn canonical_form_ei(a: &SymMatrix) -> Result<CanonicalFormEI> {
    let big_n = a.n();
    let tag = GroupTag::new(GroupKind::SpnS1, big_n)?;
    let proj = Projectors::new(tag);
    let scale = 1.0 + a.norm();
    let residual = (a - &proj.project(Component::EI, a)?).norm();
    if residual > 1e-8 * scale {
        return Err(Error::NotInSubspace { residual });
    }
    let q = quaternion_triple(big_n / 4);
    let shift = 2.0 * scale;
    let mut lines: Vec<Vec<f64>> = Vec::new();
    let mut lambdas = Vec::new();
    let mut hframe = Vec::new();
    for _ in 0..big_n / 4 {
        // A on the complement, pushed far below zero on the span of found lines.
        let mut p = SymMatrix::zeros(big_n);
        for v in &lines {
            p.add_outer(1.0, v);
        }
        let complement = SymMatrix::identity(big_n) - p.clone();
        let mut m = complement.to_square().congruence(a);
        m.axpy(-shift, &p);
        let s = eigh(&m)?;
        let e = s.vector(big_n - 1);
        lambdas.push(a.quad(&e).max(0.0));
        lines.extend(q.orbit(&e));
        hframe.push(e);
    }
    let form = CanonicalFormEI { lambdas, hframe };
    let res = (a - &form.reconstruct()).norm();
    if res > 1e-8 * scale {
        return Err(Error::NotInSubspace { residual: res });
    }
    Ok(form)
}

/// Mean of consecutive clusters of `size` ascending values, failing if any
/// cluster spreads more than `tol`.
fn cluster_values(values: &[f64], size: usize, tol: f64) -> Result<Vec<f64>> {
    values
        .chunks(size)
        .map(|c| {
            let gap = c[c.len() - 1] - c[0];
            if gap > tol {
                Err(Error::PairingFailure { gap, tol })
            } else {
                Ok(c.iter().sum::<f64>() / c.len() as f64)
            }
        })
        .collect()
}

/// Determinant-type operator of the group: real `det A`; the complex
/// determinant of the hermitian part; the quaternionic determinant of the
/// `ℍ`-hermitian part.
pub fn monge_ampere_value(g: GroupTag, a: &SymMatrix) -> Result<f64> {
    a.check_dim(g.ambient())?;
    let tol = 1e-7 * (1.0 + a.norm());
    let (sym, size) = match g.kind() {
        GroupKind::On => return Ok(eigvalsh(a)?.iter().product()),
        GroupKind::Un => {
            let p = Projectors::new(g);
            let s = &p.project(Component::CSym0, a)? + &p.project(Component::Id, a)?;
            (s, 2)
        }
        GroupKind::SpnSp1 => {
            let p = Projectors::new(g);
            let s = &p.project(Component::HSym0, a)? + &p.project(Component::Id, a)?;
            (s, 4)
        }
        GroupKind::SpnS1 => {
            return Err(Error::Unsupported(
                "no Monge–Ampère operator is attached to Sp(n)·S¹".into(),
            ));
        }
    };
    let ev = eigvalsh(&sym)?;
    Ok(cluster_values(&ev, size, tol)?.iter().product())
}
