//! Complex and quaternionic structures as real matrices, the group-invariant
//! decompositions of `Sym²(ℝᴺ)`, plane families, group samplers, canonical
//! forms and Monge–Ampère values.
//!
//! For a skew structure `X` with `X² = −Id` write `σ_X(A) = −XAX = XAXᵀ`.
//! On `ℍⁿ` the three involutions `σ_I, σ_J, σ_K` commute and compose like the
//! Klein four-group, so `Sym²(ℝ^{4n})` splits into their joint eigenspaces:
//! the `ℍ`-symmetric part (all `+1`) and `E_I, E_J, E_K` (`+1` on one axis,
//! `−1` on the other two). Each projector is the character average
//! `¼(A ± σ_I(A) ± σ_J(A) ± σ_K(A))`.

mod canonical;
mod groups;
pub(crate) mod planes;
mod quaternion;

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use canonical::{canonical_form_ei, monge_ampere_value, CanonicalFormEI};
pub use groups::{sample_group_element, MatrixGroup};
pub use planes::{sample_plane, PlaneFamilyTag};
pub use quaternion::{
    complex_structure, quaternion_triple, standard_vectors, structured_gram_schmidt, QuatAxis,
    QuaternionTriple,
};

use crate::error::{Error, Result};
use crate::symspace::{standard_basis, Square, SymMatrix, SymSubspace};

/// The four invariance groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupKind {
    On,
    Un,
    SpnSp1,
    SpnS1,
}

impl GroupKind {
    pub const ALL: [GroupKind; 4] = [
        GroupKind::On,
        GroupKind::Un,
        GroupKind::SpnSp1,
        GroupKind::SpnS1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GroupKind::On => "on",
            GroupKind::Un => "un",
            GroupKind::SpnSp1 => "spn-sp1",
            GroupKind::SpnS1 => "spn-s1",
        }
    }

    /// Real dimensions per coordinate: 1, 2 or 4.
    pub fn divisor(self) -> usize {
        match self {
            GroupKind::On => 1,
            GroupKind::Un => 2,
            GroupKind::SpnSp1 | GroupKind::SpnS1 => 4,
        }
    }
}

impl FromStr for GroupKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "on" | "o" => Ok(GroupKind::On),
            "un" | "u" => Ok(GroupKind::Un),
            "spn-sp1" | "spnsp1" => Ok(GroupKind::SpnSp1),
            "spn-s1" | "spns1" => Ok(GroupKind::SpnS1),
            other => Err(Error::InvalidInput(alloc::format!(
                "unknown group `{other}`"
            ))),
        }
    }
}

/// A group together with its ambient real dimension `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupTag {
    kind: GroupKind,
    ambient: usize,
}

impl GroupTag {
    pub fn new(kind: GroupKind, ambient: usize) -> Result<Self> {
        if ambient == 0 || ambient % kind.divisor() != 0 || ambient > crate::symspace::MAX_DIM {
            return Err(Error::UnsupportedDimension(ambient));
        }
        Ok(Self { kind, ambient })
    }

    /// Tag for `n` coordinates over ℝ, ℂ or ℍ (so `N = n`, `2n` or `4n`).
    pub fn with_coords(kind: GroupKind, n: usize) -> Result<Self> {
        Self::new(kind, n * kind.divisor())
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Number of real, complex or quaternionic coordinates.
    pub fn coords(&self) -> usize {
        self.ambient / self.kind.divisor()
    }

    /// Component names in canonical order; the first is always `Id`.
    pub fn components(&self) -> &'static [Component] {
        use Component::*;
        match self.kind {
            GroupKind::On => &[Id, Sym0],
            GroupKind::Un => &[Id, CSym0, CSkew],
            GroupKind::SpnSp1 => &[Id, HSym0, HSkew],
            GroupKind::SpnS1 => &[Id, HSym0, EI, EJ, EK],
        }
    }

    /// Components other than `Id`, from which invariant edges are assembled.
    pub fn edge_components(&self) -> &'static [Component] {
        &self.components()[1..]
    }

    pub fn supports(&self, c: Component) -> bool {
        self.components().contains(&c)
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(N={})", self.kind.name(), self.ambient)
    }
}

/// Names of the irreducible components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    /// `ℝ·Id`
    Id,
    /// Traceless symmetric matrices.
    Sym0,
    /// Traceless complex-hermitian symmetric (commute with `I`).
    CSym0,
    /// Complex-hermitian skew (anticommute with `I`).
    CSkew,
    /// Traceless quaternionic-hermitian symmetric (commute with `I, J, K`).
    HSym0,
    /// `Im ℍ ⊗ Herm^{ℍ-skew}`.
    HSkew,
    /// Commute with `I`, anticommute with `J` and `K`.
    EI,
    /// Commute with `J`, anticommute with `I` and `K`.
    EJ,
    /// Commute with `K`, anticommute with `I` and `J`.
    EK,
}

impl Component {
    pub const ALL: [Component; 9] = [
        Component::Id,
        Component::Sym0,
        Component::CSym0,
        Component::CSkew,
        Component::HSym0,
        Component::HSkew,
        Component::EI,
        Component::EJ,
        Component::EK,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Component::Id => "id",
            Component::Sym0 => "sym0",
            Component::CSym0 => "c_sym0",
            Component::CSkew => "c_skew",
            Component::HSym0 => "h_sym0",
            Component::HSkew => "h_skew",
            Component::EI => "e_i",
            Component::EJ => "e_j",
            Component::EK => "e_k",
        }
    }
}

impl FromStr for Component {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.to_ascii_lowercase().replace('-', "_");
        Component::ALL
            .iter()
            .copied()
            .find(|c| c.name() == t)
            .ok_or_else(|| Error::UnknownComponent(s.to_string()))
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `σ_X(A) = −XAX`.
fn sigma(x: &Square, a: &SymMatrix) -> SymMatrix {
    x.congruence(a)
}

fn trace_part(a: &SymMatrix) -> SymMatrix {
    let n = a.n();
    SymMatrix::identity(n).scaled(a.trace() / n as f64)
}

/// Precomputed structures for a tag, so that repeated projections do not
/// rebuild them.
#[derive(Debug, Clone)]
pub struct Projectors {
    tag: GroupTag,
    complex: Option<Square>,
    quat: Option<QuaternionTriple>,
}

impl Projectors {
    pub fn new(tag: GroupTag) -> Self {
        let (complex, quat) = match tag.kind {
            GroupKind::On => (None, None),
            GroupKind::Un => (Some(complex_structure(tag.coords())), None),
            GroupKind::SpnSp1 | GroupKind::SpnS1 => (None, Some(quaternion_triple(tag.coords()))),
        };
        Self { tag, complex, quat }
    }

    pub fn tag(&self) -> GroupTag {
        self.tag
    }

    pub fn project(&self, c: Component, a: &SymMatrix) -> Result<SymMatrix> {
        a.check_dim(self.tag.ambient)?;
        if !self.tag.supports(c) {
            return Err(Error::UnknownComponent(alloc::format!(
                "{} for group {}",
                c.name(),
                self.tag.kind.name()
            )));
        }
        if c == Component::Id {
            return Ok(trace_part(a));
        }
        let out = match (self.tag.kind, c) {
            (GroupKind::On, Component::Sym0) => a - &trace_part(a),
            (GroupKind::Un, _) => {
                let ia = sigma(self.complex.as_ref().expect("complex structure"), a);
                match c {
                    Component::CSym0 => (a + &ia).scaled(0.5) - trace_part(a),
                    _ => (a - &ia).scaled(0.5),
                }
            }
            (_, _) => {
                let q = self.quat.as_ref().expect("quaternionic structure");
                let (si, sj, sk) = (sigma(&q.i, a), sigma(&q.j, a), sigma(&q.k, a));
                let signs = match c {
                    Component::HSym0 => [1.0, 1.0, 1.0],
                    Component::EI => [1.0, -1.0, -1.0],
                    Component::EJ => [-1.0, 1.0, -1.0],
                    Component::EK => [-1.0, -1.0, 1.0],
                    _ => [0.0; 3],
                };
                if c == Component::HSkew {
                    let mut out = a.scaled(0.75);
                    out.axpy(-0.25, &si);
                    out.axpy(-0.25, &sj);
                    out.axpy(-0.25, &sk);
                    out
                } else {
                    let mut out = a.scaled(0.25);
                    out.axpy(0.25 * signs[0], &si);
                    out.axpy(0.25 * signs[1], &sj);
                    out.axpy(0.25 * signs[2], &sk);
                    if c == Component::HSym0 {
                        out -= &trace_part(a);
                    }
                    out
                }
            }
        };
        Ok(out)
    }

    /// Orthonormal basis of a component, as the image of its projector.
    pub fn subspace(&self, c: Component) -> Result<SymSubspace> {
        let n = self.tag.ambient;
        let gens: Vec<SymMatrix> = standard_basis(n)
            .iter()
            .map(|b| self.project(c, b))
            .collect::<Result<_>>()?;
        SymSubspace::orthonormalize(n, &gens)
    }
}

/// Closed-form projection of `A` onto a named component.
pub fn group_project(g: GroupTag, c: Component, a: &SymMatrix) -> Result<SymMatrix> {
    Projectors::new(g).project(c, a)
}

/// All components of the tag's decomposition, in canonical order.
pub fn irreducible_components(g: GroupTag) -> Result<Vec<(Component, SymSubspace)>> {
    let p = Projectors::new(g);
    g.components()
        .iter()
        .map(|&c| Ok((c, p.subspace(c)?)))
        .collect()
}

/// Direct sum of the named components.
pub fn component_sum(g: GroupTag, comps: &[Component]) -> Result<SymSubspace> {
    let p = Projectors::new(g);
    let mut out = SymSubspace::zero(g.ambient());
    for &c in comps {
        out = out.sum(&p.subspace(c)?)?;
    }
    Ok(out)
}

/// Orthogonal projection of `P_e` onto `ℝ·Id ⊕ Im ℍ ⊗ Herm^{ℍ-skew}` on `ℍⁿ`:
/// `(1/4n) Id + ¼(3P_e − P_{Ie} − P_{Je} − P_{Ke})`.
pub fn reduced_projected_pe(e: &[f64]) -> Result<SymMatrix> {
    let big_n = e.len();
    if big_n == 0 || big_n % 4 != 0 {
        return Err(Error::UnsupportedDimension(big_n));
    }
    let norm = crate::math::norm(e);
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotUnit { norm });
    }
    let q = quaternion_triple(big_n / 4);
    let [e0, ie, je, ke] = q.orbit(e);
    let mut out = SymMatrix::identity(big_n).scaled(1.0 / big_n as f64);
    out.add_outer(0.75, &e0);
    out.add_outer(-0.25, &ie);
    out.add_outer(-0.25, &je);
    out.add_outer(-0.25, &ke);
    Ok(out)
}

#[cfg(test)]
mod tests;
