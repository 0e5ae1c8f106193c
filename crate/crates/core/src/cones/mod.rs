//! Cone descriptions and their oracles.
//!
//! Three kinds of cone are supported:
//!
//! - [`EdgeCone`]: the minimal cone `E + 𝒫` of a basic edge `E`, with margin
//!   `max_{e ∈ E} λ_min(A − e)`;
//! - [`GeometricCone`]: `{A : tr(A|_W) ≥ 0 ∀ W}` for a plane family, with
//!   margin `min_W tr(A|_W)/k`;
//! - [`HalfspaceCone`]: `{A : ⟨A, N⟩ ≥ 0}` for a unit `N ⪰ 0`, with margin `⟨A, N⟩`.

mod basic;
mod checks;
mod edge;
mod geometric;
mod support;

use alloc::vec::Vec;

pub use basic::{is_basic_edge, BasicEdgeReport, BASIC_BAND};
pub use checks::{
    check_dual_inclusion, check_minimality, cross_validate_equality, cross_validate_inclusion,
    polar_self_dual, random_member, CheckCount, CrossValidation, DualInclusionReport,
    InclusionReport, MinimalityReport, SelfDualityReport, Violation,
};
pub use edge::{maximize_min_eig, MarginOptions, MarginSolution, PdWitness};
pub use geometric::{
    restricted_trace, GeometricCone, DEFAULT_DESCENTS, DEFAULT_EDGE_BUDGET, DEFAULT_FRAME_BUDGET,
};
pub use support::{support_of, Support};

use crate::error::{Error, Result};
use crate::math;
use crate::structures::PlaneFamilyTag;
use crate::symspace::{min_eig, traceless, SymMatrix, SymSubspace};

/// Default dead band `1e-7·(1 + ‖A‖)`.
pub fn default_tol(a: &SymMatrix) -> f64 {
    1e-7 * (1.0 + a.norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Interior,
    Boundary,
    Outside,
}

impl Verdict {
    pub fn from_margin(margin: f64, tol: f64) -> Self {
        if margin > tol {
            Verdict::Interior
        } else if margin < -tol {
            Verdict::Outside
        } else {
            Verdict::Boundary
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Interior => "interior",
            Verdict::Boundary => "boundary",
            Verdict::Outside => "outside",
        }
    }

    /// Member of the (closed) cone.
    pub fn is_member(self) -> bool {
        self != Verdict::Outside
    }
}

/// Evidence attached to a verdict.
#[derive(Debug, Clone)]
pub enum Witness {
    /// `e ∈ E` with `λ_min(A − e)` equal to the margin.
    EdgeTranslate(SymMatrix),
    /// A plane achieving the geometric margin.
    Plane(Vec<Vec<f64>>),
    /// A unit-trace element `Z` of the polar cone with `⟨A, Z⟩ < 0`.
    Polar(SymMatrix),
    /// The half-space normal.
    Normal(SymMatrix),
}

#[derive(Debug, Clone)]
pub struct MembershipVerdict {
    pub verdict: Verdict,
    pub margin: f64,
    /// Certified upper bound on the margin (equal to `margin` when exact).
    pub upper: f64,
    pub tol: f64,
    /// The optimizer stopped before certifying the verdict.
    pub stalled: bool,
    pub witness: Option<Witness>,
}

/// The minimal cone `E + 𝒫` of a basic edge.
#[derive(Debug, Clone)]
pub struct EdgeCone {
    edge: SymSubspace,
    span: SymSubspace,
    pd: PdWitness,
}

impl EdgeCone {
    pub fn new(edge: SymSubspace) -> Result<Self> {
        let report = is_basic_edge(&edge)?;
        if !report.basic {
            return Err(Error::NotBasic {
                lambda_min: report.edge_side.unwrap_or(0.0),
            });
        }
        let span = edge.complement();
        let lambda_min = min_eig(&report.witness)?.0;
        Ok(Self {
            edge,
            span,
            pd: PdWitness {
                matrix: report.witness,
                lambda_min,
            },
        })
    }

    pub fn edge(&self) -> &SymSubspace {
        &self.edge
    }

    pub fn span(&self) -> &SymSubspace {
        &self.span
    }

    /// Positive definite element of the span found by the basic-edge test.
    pub fn span_witness(&self) -> &SymMatrix {
        &self.pd.matrix
    }

    pub fn solve(&self, a: &SymMatrix, opts: &MarginOptions) -> Result<MarginSolution> {
        a.check_dim(self.edge.n())?;
        maximize_min_eig(a, &self.edge, &self.pd, opts)
    }

    /// Decomposition `A = e + P` with `e ∈ E` and `λ_min(P)` equal to the margin.
    pub fn decompose(&self, a: &SymMatrix) -> Result<(SymMatrix, SymMatrix, MarginSolution)> {
        let sol = self.solve(a, &MarginOptions::precise(0.1 * default_tol(a)))?;
        let e = self.edge.combine(&sol.coords);
        let p = a - &e;
        Ok((e, p, sol))
    }
}

/// `{A : ⟨A, N⟩ ≥ 0}` with `N ⪰ 0`, `‖N‖ = 1`.
#[derive(Debug, Clone)]
pub struct HalfspaceCone {
    normal: SymMatrix,
}

impl HalfspaceCone {
    pub fn new(normal: &SymMatrix) -> Result<Self> {
        let nn = normal.norm();
        if nn == 0.0 {
            return Err(Error::InvalidInput("zero half-space normal".into()));
        }
        let unit = normal.scaled(1.0 / nn);
        let lmin = min_eig(&unit)?.0;
        if lmin < -1e-12 {
            return Err(Error::InvalidInput(alloc::format!(
                "half-space normal must be positive semidefinite (λ_min = {lmin:.3e})"
            )));
        }
        Ok(Self { normal: unit })
    }

    pub fn normal(&self) -> &SymMatrix {
        &self.normal
    }
}

#[derive(Debug, Clone)]
pub enum ConeHandle {
    Edge(EdgeCone),
    Geometric(GeometricCone),
    Halfspace(HalfspaceCone),
}

/// Options for [`ConeHandle::contains_with`].
#[derive(Debug, Clone, Default)]
pub struct ContainsOptions {
    /// Dead band; defaults to [`default_tol`].
    pub tol: Option<f64>,
    /// Stop as soon as the verdict is certified instead of refining the margin.
    pub verdict_only: bool,
    /// Starting coordinates in the edge basis (edge cones only).
    pub warm_start: Option<Vec<f64>>,
}

impl ConeHandle {
    /// Minimal cone of `E`; refused unless `E` is a basic edge.
    pub fn edge_cone(edge: SymSubspace) -> Result<Self> {
        Ok(ConeHandle::Edge(EdgeCone::new(edge)?))
    }

    pub fn psd(n: usize) -> Result<Self> {
        Self::edge_cone(SymSubspace::zero(n))
    }

    pub fn halfspace(normal: &SymMatrix) -> Result<Self> {
        Ok(ConeHandle::Halfspace(HalfspaceCone::new(normal)?))
    }

    /// `Δ = {tr A ≥ 0}` as a half-space.
    pub fn laplacian(n: usize) -> Self {
        ConeHandle::Halfspace(HalfspaceCone {
            normal: SymMatrix::identity(n).scaled(1.0 / math::sqrt(n as f64)),
        })
    }

    pub fn geometric(
        tag: PlaneFamilyTag,
        big_n: usize,
        frame_budget: usize,
        seed: u64,
    ) -> Result<Self> {
        Ok(ConeHandle::Geometric(GeometricCone::new(
            tag,
            big_n,
            frame_budget,
            seed,
        )?))
    }

    pub fn n(&self) -> usize {
        match self {
            ConeHandle::Edge(c) => c.edge.n(),
            ConeHandle::Geometric(c) => c.n(),
            ConeHandle::Halfspace(c) => c.normal.n(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ConeHandle::Edge(_) => "edge",
            ConeHandle::Geometric(_) => "geometric",
            ConeHandle::Halfspace(_) => "halfspace",
        }
    }

    pub fn as_edge(&self) -> Option<&EdgeCone> {
        match self {
            ConeHandle::Edge(c) => Some(c),
            _ => None,
        }
    }

    /// Rate `κ` in `margin(A − s·Id) = margin(A) − κ s`.
    pub fn shift_rate(&self) -> f64 {
        match self {
            ConeHandle::Halfspace(c) => c.normal.trace(),
            _ => 1.0,
        }
    }

    pub fn contains(&self, a: &SymMatrix, tol: Option<f64>) -> Result<MembershipVerdict> {
        self.contains_with(
            a,
            &ContainsOptions {
                tol,
                ..Default::default()
            },
        )
    }

    pub fn contains_with(
        &self,
        a: &SymMatrix,
        opts: &ContainsOptions,
    ) -> Result<MembershipVerdict> {
        a.check_dim(self.n())?;
        let tol = opts.tol.unwrap_or_else(|| default_tol(a));
        match self {
            ConeHandle::Halfspace(c) => {
                let m = a.dot(&c.normal);
                Ok(MembershipVerdict {
                    verdict: Verdict::from_margin(m, tol),
                    margin: m,
                    upper: m,
                    tol,
                    stalled: false,
                    witness: Some(Witness::Normal(c.normal.clone())),
                })
            }
            ConeHandle::Geometric(c) => {
                let (m, frame) = c.margin(a)?;
                Ok(MembershipVerdict {
                    verdict: Verdict::from_margin(m, tol),
                    margin: m,
                    upper: m,
                    tol,
                    stalled: false,
                    witness: Some(Witness::Plane(frame)),
                })
            }
            ConeHandle::Edge(c) => {
                let mut mo = MarginOptions::precise(0.1 * tol);
                if opts.verdict_only {
                    mo.verdict_tol = Some(tol);
                }
                mo.warm_start = opts.warm_start.clone();
                let sol = c.solve(a, &mo)?;
                let converged = sol.gap() <= 0.1 * tol;
                let verdict = if sol.lower > tol {
                    Verdict::Interior
                } else if sol.upper < -tol {
                    Verdict::Outside
                } else if converged {
                    Verdict::from_margin(sol.lower, tol)
                } else {
                    Verdict::Boundary
                };
                let stalled = !converged && verdict == Verdict::Boundary;
                let witness = if verdict == Verdict::Outside {
                    Witness::Polar(sol.certificate.clone())
                } else {
                    Witness::EdgeTranslate(c.edge.combine(&sol.coords))
                };
                Ok(MembershipVerdict {
                    verdict,
                    margin: sol.lower,
                    upper: sol.upper,
                    tol,
                    stalled,
                    witness: Some(witness),
                })
            }
        }
    }

    /// Margin refined to the default certified accuracy.
    pub fn margin(&self, a: &SymMatrix) -> Result<f64> {
        Ok(self.contains(a, None)?.margin)
    }

    /// Dual cone `F̃ = ∼(−Int F)`: margin `−margin(−A)`.
    pub fn dual_contains(&self, a: &SymMatrix, tol: Option<f64>) -> Result<MembershipVerdict> {
        self.dual_contains_with(
            a,
            &ContainsOptions {
                tol,
                ..Default::default()
            },
        )
    }

    pub fn dual_contains_with(
        &self,
        a: &SymMatrix,
        opts: &ContainsOptions,
    ) -> Result<MembershipVerdict> {
        let neg = -a;
        let v = self.contains_with(&neg, opts)?;
        let margin = -v.upper;
        let upper = -v.margin;
        let verdict = match v.verdict {
            Verdict::Interior => Verdict::Outside,
            Verdict::Outside => Verdict::Interior,
            Verdict::Boundary => Verdict::Boundary,
        };
        Ok(MembershipVerdict {
            verdict,
            margin,
            upper,
            tol: v.tol,
            stalled: v.stalled,
            witness: v.witness,
        })
    }

    /// The edge `F ∩ (−F)`.
    pub fn edge_of(&self) -> Result<SymSubspace> {
        match self {
            ConeHandle::Edge(c) => Ok(c.edge.clone()),
            ConeHandle::Halfspace(c) => {
                let line =
                    SymSubspace::from_orthonormal(c.normal.n(), alloc::vec![c.normal.clone()])?;
                Ok(line.complement())
            }
            ConeHandle::Geometric(c) => c.edge(c.edge_budget),
        }
    }

    /// The span of the polar cone, `E^⊥`.
    pub fn span_of(&self) -> Result<SymSubspace> {
        match self {
            ConeHandle::Edge(c) => Ok(c.span.clone()),
            ConeHandle::Halfspace(c) => {
                SymSubspace::from_orthonormal(c.normal.n(), alloc::vec![c.normal.clone()])
            }
            ConeHandle::Geometric(_) => Ok(self.edge_of()?.complement()),
        }
    }

    /// Reduced hessian `π_S(A)`.
    pub fn reduced_hessian(&self, a: &SymMatrix) -> Result<SymMatrix> {
        a.check_dim(self.n())?;
        Ok(self.span_of()?.project(a))
    }
}

/// `E + 𝒫` for a basic edge `E`.
pub fn minimal_cone(edge: SymSubspace) -> Result<ConeHandle> {
    ConeHandle::edge_cone(edge)
}

/// The Laplacian cone's edge: traceless matrices.
pub fn laplacian_edge(n: usize) -> SymSubspace {
    traceless(n)
}

#[cfg(test)]
mod tests;
