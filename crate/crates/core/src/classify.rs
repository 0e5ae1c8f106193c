//! Invariant basic edges of the four groups: every sum of non-identity
//! irreducible components is traceless, hence basic, and gives a minimal cone.
//! Invariance under the own group and under designated larger groups is
//! checked by sampling, so conclusions about exact invariance groups are
//! sampled evidence only.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::cones::{is_basic_edge, minimal_cone, ConeHandle};
use crate::error::{Error, Result};
use crate::rng;
use crate::structures::{
    component_sum, Component, GroupKind, GroupTag, MatrixGroup, Projectors, QuatAxis,
};
use crate::symspace::{traceless, SymMatrix, SymSubspace};

/// Residual above which a conjugated basis element counts as leaving `E`.
pub const INVARIANCE_TOL: f64 = 1e-8;
/// Residual a sample must exceed to count as evidence of non-invariance.
pub const NON_INVARIANCE_TOL: f64 = 1e-4;

/// The group under which a tag's components are enumerated. For `Sp(n)·S¹`
/// this is `Sp(n)·Q8`: `E_J` and `E_K` are not preserved by the `I` circle,
/// but all four quaternionic components are preserved by `Sp(n)` and the
/// unit quaternions `±1, ±i, ±j, ±k`.
pub fn enumeration_group(tag: GroupTag) -> MatrixGroup {
    match tag.kind() {
        GroupKind::SpnS1 => MatrixGroup::SpQ8(tag.coords()),
        _ => MatrixGroup::of_tag(tag),
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub group: GroupTag,
    pub components: Vec<Component>,
    pub edge: SymSubspace,
    pub cone: ConeHandle,
    /// Larger group the edge is claimed to be invariant under, if any.
    pub larger: Option<MatrixGroup>,
    /// The known cone this entry coincides with.
    pub identification: String,
    /// Some component is zero-dimensional at this size.
    pub degenerate: bool,
    /// Outcome of the basic-edge test.
    pub basic: bool,
}

impl CatalogEntry {
    pub fn label(&self) -> String {
        if self.components.is_empty() {
            return String::from("{}");
        }
        let names: Vec<&str> = self.components.iter().map(|c| c.name()).collect();
        names.join("+")
    }
}

fn axis_name(a: QuatAxis) -> &'static str {
    a.name()
}

/// Designated larger group and identification for a subset of a tag's
/// components.
fn route(tag: GroupTag, comps: &[Component]) -> (Option<MatrixGroup>, String) {
    use Component::*;
    let n = tag.coords();
    let has = |c: Component| comps.contains(&c);
    let big = MatrixGroup::Orthogonal(tag.ambient());
    match tag.kind() {
        GroupKind::On => match comps {
            [] => (None, "P".into()),
            _ => (None, "Laplacian".into()),
        },
        GroupKind::Un => match (has(CSym0), has(CSkew)) {
            (false, false) => (Some(big), "P".into()),
            (true, false) => (None, "P(LAG)".into()),
            (false, true) => (None, "P_C".into()),
            (true, true) => (Some(big), "Laplacian".into()),
        },
        GroupKind::SpnSp1 => match (has(HSym0), has(HSkew)) {
            (false, false) => (Some(big), "P".into()),
            (true, false) => (None, "P(HLAG)".into()),
            (false, true) => (None, "P_H".into()),
            (true, true) => (Some(big), "Laplacian".into()),
        },
        GroupKind::SpnS1 => {
            let axes: Vec<QuatAxis> = [(EI, QuatAxis::I), (EJ, QuatAxis::J), (EK, QuatAxis::K)]
                .iter()
                .filter(|(c, _)| has(*c))
                .map(|&(_, a)| a)
                .collect();
            let e0 = has(HSym0);
            let missing = |axes: &[QuatAxis]| {
                [QuatAxis::I, QuatAxis::J, QuatAxis::K]
                    .into_iter()
                    .find(|a| !axes.contains(a))
                    .expect("two axes")
            };
            match (axes.len(), e0) {
                (0, false) => (Some(MatrixGroup::SpSp1(n)), "P".into()),
                (0, true) => (Some(MatrixGroup::SpSp1(n)), "P(HLAG)".into()),
                (3, false) => (Some(MatrixGroup::SpSp1(n)), "P_H".into()),
                (3, true) => (Some(MatrixGroup::SpSp1(n)), "Laplacian".into()),
                (1, false) => {
                    let a = axes[0];
                    (
                        Some(MatrixGroup::SpS1(n, a)),
                        format!("E_{} cone (new)", axis_name(a)),
                    )
                }
                (1, true) => {
                    let a = axes[0];
                    (
                        Some(MatrixGroup::QuatUnitary(n, a)),
                        format!("P(LAG) for {}", axis_name(a)),
                    )
                }
                (2, false) => {
                    let a = missing(&axes);
                    (
                        Some(MatrixGroup::QuatUnitary(n, a)),
                        format!("P_C for {}", axis_name(a)),
                    )
                }
                _ => {
                    let a = missing(&axes);
                    (
                        Some(MatrixGroup::SpS1(n, a)),
                        format!("GL_IJK cone for {} (new)", axis_name(a)),
                    )
                }
            }
        }
    }
}

/// Whether an entry is one of the cones whose invariance group is not
/// contained in `Sp(n)·Sp(1)`-invariant examples.
pub fn is_new(entry: &CatalogEntry) -> bool {
    entry.group.kind() == GroupKind::SpnS1 && matches!(entry.larger, Some(MatrixGroup::SpS1(..)))
}

/// All sums of non-identity components of the tag, with their basic-edge test, in
/// subset-bitmask order over [`GroupTag::edge_components`].
pub fn enumerate_basic_edges(tag: GroupTag) -> Result<Vec<CatalogEntry>> {
    let comps = tag.edge_components();
    let n = tag.ambient();
    let p = Projectors::new(tag);
    let dims: Vec<usize> = comps
        .iter()
        .map(|&c| p.subspace(c).map(|s| s.dim()))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(1 << comps.len());
    for mask in 0usize..1 << comps.len() {
        let chosen: Vec<Component> = (0..comps.len())
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| comps[k])
            .collect();
        let edge = if chosen.len() == comps.len() && tag.kind() == GroupKind::On {
            traceless(n)
        } else {
            component_sum(tag, &chosen)?
        };
        let basic = is_basic_edge(&edge)?.basic;
        let cone = minimal_cone(edge.clone())?;
        let (larger, identification) = route(tag, &chosen);
        let degenerate = (0..comps.len()).any(|k| mask >> k & 1 == 1 && dims[k] == 0);
        out.push(CatalogEntry {
            group: tag,
            components: chosen,
            edge,
            cone,
            larger,
            identification,
            degenerate,
            basic,
        });
    }
    Ok(out)
}

/// Per-sample residuals `max_B ‖π_{E^⊥}(g*B)‖` over an orthonormal basis of `E`.
pub fn invariance_residuals(
    e: &SymSubspace,
    group: MatrixGroup,
    samples: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if group.ambient() != e.n() {
        return Err(Error::DimensionMismatch {
            expected: e.n(),
            found: group.ambient(),
        });
    }
    let mut r = rng::seeded(seed);
    Ok((0..samples)
        .map(|_| {
            let g = group.sample(&mut r);
            e.basis()
                .iter()
                .map(|b| e.residual(&g.pullback(b)))
                .fold(0.0, f64::max)
        })
        .collect())
}

/// `g*E = E` for all sampled `g` in the tag's enumeration group.
pub fn invariance_check(e: &SymSubspace, tag: GroupTag, samples: usize, seed: u64) -> Result<bool> {
    Ok(
        invariance_residuals(e, enumeration_group(tag), samples, seed)?
            .iter()
            .all(|&r| r <= INVARIANCE_TOL),
    )
}

#[derive(Debug, Clone)]
pub struct InvarianceResult {
    pub group: MatrixGroup,
    pub samples: usize,
    pub max_residual: f64,
    /// Samples with residual above [`NON_INVARIANCE_TOL`].
    pub above: usize,
}

impl InvarianceResult {
    fn new(e: &SymSubspace, group: MatrixGroup, samples: usize, seed: u64) -> Result<Self> {
        let res = invariance_residuals(e, group, samples, seed)?;
        Ok(Self {
            group,
            samples,
            max_residual: res.iter().copied().fold(0.0, f64::max),
            above: res.iter().filter(|&&r| r > NON_INVARIANCE_TOL).count(),
        })
    }

    pub fn invariant(&self) -> bool {
        self.max_residual <= INVARIANCE_TOL
    }
}

#[derive(Debug, Clone)]
pub struct EntryReport {
    pub group: GroupTag,
    pub label: String,
    pub dim: usize,
    pub identification: String,
    pub basic: bool,
    /// `max |⟨B, Id⟩|` over the orthonormal basis.
    pub trace_defect: f64,
    pub degenerate: bool,
    pub own: InvarianceResult,
    pub larger: Option<InvarianceResult>,
    /// `Sp(n)·Sp(1)` samples, for entries claimed not to be invariant under it.
    pub not_sp_sp1: Option<InvarianceResult>,
}

impl EntryReport {
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.basic {
            out.push(format!("{} {}: not basic", self.group, self.label));
        }
        if self.trace_defect > 1e-10 {
            out.push(format!(
                "{} {}: not orthogonal to Id ({:.2e})",
                self.group, self.label, self.trace_defect
            ));
        }
        if !self.own.invariant() {
            out.push(format!(
                "{} {}: not invariant under {} (residual {:.2e})",
                self.group,
                self.label,
                self.own.group.label(),
                self.own.max_residual
            ));
        }
        if let Some(l) = &self.larger {
            if !l.invariant() {
                out.push(format!(
                    "{} {}: not invariant under designated {} (residual {:.2e})",
                    self.group,
                    self.label,
                    l.group.label(),
                    l.max_residual
                ));
            }
        }
        if let Some(x) = &self.not_sp_sp1 {
            if x.above * 100 < 95 * x.samples {
                out.push(format!(
                    "{} {}: only {}/{} Sp(n)·Sp(1) samples move E",
                    self.group, self.label, x.above, x.samples
                ));
            }
        }
        out
    }
}

/// Checks one group's catalog.
pub fn classify_group(tag: GroupTag, samples: usize, seed: u64) -> Result<Vec<EntryReport>> {
    let id = SymMatrix::identity(tag.ambient());
    enumerate_basic_edges(tag)?
        .into_iter()
        .enumerate()
        .map(|(k, entry)| {
            let s = rng::derive_seed(seed, k as u64);
            let trace_defect = entry
                .edge
                .basis()
                .iter()
                .map(|b| b.dot(&id).abs())
                .fold(0.0, f64::max);
            let own = InvarianceResult::new(&entry.edge, enumeration_group(tag), samples, s)?;
            let larger = entry
                .larger
                .map(|g| InvarianceResult::new(&entry.edge, g, samples, s + 1))
                .transpose()?;
            let not_sp_sp1 = if is_new(&entry) {
                Some(InvarianceResult::new(
                    &entry.edge,
                    MatrixGroup::SpSp1(tag.coords()),
                    samples,
                    s + 2,
                )?)
            } else {
                None
            };
            Ok(EntryReport {
                group: tag,
                label: entry.label(),
                dim: entry.edge.dim(),
                identification: entry.identification,
                basic: entry.basic,
                trace_defect,
                degenerate: entry.degenerate,
                own,
                larger,
                not_sp_sp1,
            })
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct ClassificationReport {
    pub groups: Vec<(GroupTag, Vec<EntryReport>)>,
}

impl ClassificationReport {
    pub fn failures(&self) -> Vec<String> {
        self.groups
            .iter()
            .flat_map(|(_, es)| es.iter().flat_map(|e| e.failures()))
            .collect()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.groups.iter().map(|(_, es)| es.len()).collect()
    }
}

/// The full catalog: `O(n)` and `U(n)` with `n` coordinates, the two
/// quaternionic groups with `n_quat` coordinates.
pub fn classification_report(
    n: usize,
    n_quat: usize,
    samples: usize,
    seed: u64,
) -> Result<ClassificationReport> {
    let tags = [
        GroupTag::with_coords(GroupKind::On, n)?,
        GroupTag::with_coords(GroupKind::Un, n)?,
        GroupTag::with_coords(GroupKind::SpnSp1, n_quat)?,
        GroupTag::with_coords(GroupKind::SpnS1, n_quat)?,
    ];
    let groups = tags
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            Ok((
                t,
                classify_group(t, samples, rng::derive_seed(seed, k as u64))?,
            ))
        })
        .collect::<Result<_>>()?;
    Ok(ClassificationReport { groups })
}

/// Named minimal cones. `n` counts real, complex or quaternionic coordinates
/// as the name implies.
pub fn named_cone(name: &str, n: usize) -> Result<ConeHandle> {
    use Component::*;
    let q = |c: &[Component]| component_sum(GroupTag::with_coords(GroupKind::SpnS1, n)?, c);
    let edge = match name {
        "P" => SymSubspace::zero(n),
        "laplace" => traceless(n),
        "P_C" => component_sum(GroupTag::with_coords(GroupKind::Un, n)?, &[CSkew])?,
        "P_LAG" => component_sum(GroupTag::with_coords(GroupKind::Un, n)?, &[CSym0])?,
        "P_H" => component_sum(GroupTag::with_coords(GroupKind::SpnSp1, n)?, &[HSkew])?,
        "P_HLAG" => q(&[HSym0])?,
        "P_IJK" => q(&[HSym0, EJ, EK])?,
        "P_EI" => q(&[EI])?,
        other => return Err(Error::InvalidInput(format!("unknown cone `{other}`"))),
    };
    minimal_cone(edge)
}

/// Names accepted by [`named_cone`].
pub const CONE_NAMES: [&str; 8] = [
    "P", "laplace", "P_C", "P_LAG", "P_H", "P_HLAG", "P_IJK", "P_EI",
];

#[cfg(test)]
mod tests;
