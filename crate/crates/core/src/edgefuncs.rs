//! Edge quadratics, the "sub the edge functions" test on grids, and the
//! local witness that refutes it at a node whose Hessian leaves the dual cone.
//!
//! An edge quadratic is `h(x) = c + ⟨b, x⟩ + ½⟨Bx, x⟩` with `B ∈ E`, so both
//! `h` and `−h` are subharmonic for `E + 𝒫`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::cones::{ConeHandle, Verdict};
use crate::dirichlet::{discrete_hessian, GridDomain, GridField, NodeKind};
use crate::error::{Error, Result};
use crate::math;
use crate::rng;
use crate::symspace::{SymMatrix, SymSubspace};

/// Largest distance from `E` that [`EdgeQuadratic::new`] projects away.
pub const PROJECTION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeQuadratic {
    pub c: f64,
    pub b: Vec<f64>,
    pub hess: SymMatrix,
}

impl EdgeQuadratic {
    /// Builds `h`, projecting `B` onto `E` when it is within
    /// `PROJECTION_TOL·(1 + ‖B‖)` and refusing otherwise.
    pub fn new(edge: &SymSubspace, c: f64, b: Vec<f64>, hess: &SymMatrix) -> Result<Self> {
        hess.check_dim(edge.n())?;
        if b.len() != edge.n() {
            return Err(Error::DimensionMismatch {
                expected: edge.n(),
                found: b.len(),
            });
        }
        let proj = edge.project(hess);
        let residual = (hess - &proj).norm();
        if residual > PROJECTION_TOL * (1.0 + hess.norm()) {
            return Err(Error::NotInSubspace { residual });
        }
        Ok(Self { c, b, hess: proj })
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.c + math::dot(&self.b, x) + 0.5 * self.hess.quad(x)
    }

    pub fn shifted(&self, s: f64) -> Self {
        Self {
            c: self.c + s,
            ..self.clone()
        }
    }

    /// The quadratic with value `value`, gradient `grad` and Hessian `hess` at `x0`.
    pub fn through(
        edge: &SymSubspace,
        x0: &[f64],
        value: f64,
        grad: &[f64],
        hess: &SymMatrix,
    ) -> Result<Self> {
        let bx0 = hess.mul_vec(x0);
        let b: Vec<f64> = grad.iter().zip(&bx0).map(|(g, v)| g - v).collect();
        let c = value - math::dot(grad, x0) + 0.5 * hess.quad(x0);
        Self::new(edge, c, b, hess)
    }
}

/// `count` edge quadratics with `B` uniform in the radius ball of `E`,
/// `b` uniform in the radius ball of `ℝⁿ` and `c` uniform in `[−radius, radius]`.
pub fn sample_edge_quadratics(
    edge: &SymSubspace,
    count: usize,
    radius: f64,
    seed: u64,
) -> Result<Vec<EdgeQuadratic>> {
    if !(radius >= 0.0) {
        return Err(Error::InvalidInput("radius must be non-negative".into()));
    }
    let n = edge.n();
    let k = edge.dim();
    let mut r = rng::seeded(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let hess = if k == 0 {
            SymMatrix::zeros(n)
        } else {
            let dir = rng::unit_vec(&mut r, k);
            let s = radius * math::pow(rng::uniform(&mut r), 1.0 / k as f64);
            edge.combine(&dir.iter().map(|x| s * x).collect::<Vec<_>>())
        };
        let dir = rng::unit_vec(&mut r, n);
        let s = radius * math::pow(rng::uniform(&mut r), 1.0 / n as f64);
        let b = dir.iter().map(|x| s * x).collect();
        let c = radius * (2.0 * rng::uniform(&mut r) - 1.0);
        out.push(EdgeQuadratic::new(edge, c, b, &hess)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubTest {
    /// `u ≤ h + tol` on every boundary node.
    pub premise: bool,
    /// `u ≤ h + tol` on every interior node, or the premise failed.
    pub holds: bool,
    /// `max (u − h)` over boundary nodes.
    pub boundary_excess: f64,
    /// `max (u − h)` over interior nodes.
    pub interior_excess: f64,
}

/// Whether `u ≤ h` on the boundary forces `u ≤ h` inside; vacuously true
/// (with `premise == false`) when the boundary inequality fails.
pub fn sub_test(u: &GridField, h: &EdgeQuadratic, tol: f64) -> Result<SubTest> {
    let dom = u.domain();
    if h.n() != dom.n() {
        return Err(Error::DimensionMismatch {
            expected: dom.n(),
            found: h.n(),
        });
    }
    let excess = |nodes: &[usize]| {
        nodes
            .iter()
            .map(|&i| u.value(i) - h.eval(&dom.coords(i)))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let boundary_excess = excess(dom.boundary());
    let interior_excess = excess(dom.interior());
    let premise = boundary_excess <= tol;
    Ok(SubTest {
        premise,
        holds: !premise || interior_excess <= tol,
        boundary_excess,
        interior_excess,
    })
}

/// A local refutation of "sub the edge functions" at an interior node.
#[derive(Debug, Clone)]
pub struct ViolationWitness {
    pub node: usize,
    pub center: Vec<f64>,
    /// Already shifted down by `margin`.
    pub quadratic: EdgeQuadratic,
    pub radius: f64,
    pub margin: f64,
    /// `λ_min(P)` in `−A = e + P`.
    pub lambda_min: f64,
    /// `u` restricted to the ball of the given radius about the node.
    pub local: GridField,
}

impl ViolationWitness {
    /// Re-runs [`sub_test`] on the local ball; a valid witness has
    /// `premise && !holds`.
    pub fn confirm(&self, tol: f64) -> Result<SubTest> {
        sub_test(&self.local, &self.quadratic, tol)
    }
}

/// Restriction of `u` to the lattice ball of radius `radius` about node
/// `node`; fails when the ball leaves `u`'s node set.
pub fn restrict_to_ball(u: &GridField, node: usize, radius: f64) -> Result<GridField> {
    let dom = u.domain();
    let center = dom.coords(node);
    let local = Arc::new(GridDomain::ball(&center, radius, dom.h())?);
    let mut values = alloc::vec![0.0; local.len()];
    for idx in 0..local.len() {
        if local.kind(idx) == NodeKind::Exterior {
            continue;
        }
        let global = dom
            .nearest(&local.coords(idx))
            .filter(|&g| dom.kind(g) != NodeKind::Exterior)
            .ok_or_else(|| Error::InvalidInput("local ball leaves the grid".into()))?;
        values[idx] = u.value(global);
    }
    GridField::from_values(local, values)
}

/// Looks for an edge quadratic that touches `u` from above at `node` while
/// lying above `u` on the surrounding sphere of radius `3h` (or `2h`, `h`
/// when the larger ball does not fit inside the grid).
///
/// With `A` the discrete Hessian at the node, a witness exists when
/// `−A ∈ Int F`. Writing `−A = e + P` with `e ∈ E`, `P ≻ 0`, the quadratic
/// matching `u`'s value and gradient with Hessian `−e` exceeds `u` by about
/// `½⟨P(x − x₀), x − x₀⟩ ≥ α|x − x₀|²` with `α = ½λ_min(P)`. It is lowered by
/// `½min(αr², gap)`, `gap` being the smallest excess over `u` on the sphere;
/// the first radius with a positive gap is used.
/// Returns `None` when `A` lies in the dual cone or in its dead band.
pub fn violation_witness(
    u: &GridField,
    cone: &ConeHandle,
    node: usize,
) -> Result<Option<ViolationWitness>> {
    let edge_cone = cone
        .as_edge()
        .ok_or_else(|| Error::Unsupported("violation witnesses need an edge cone".into()))?;
    let dom = u.domain();
    let a = discrete_hessian(u, node)?;
    if cone.dual_contains(&a, None)?.verdict != Verdict::Outside {
        return Ok(None);
    }
    let (e, _p, sol) = edge_cone.decompose(&-&a)?;
    if !(sol.lower > 0.0) {
        return Err(Error::Unsupported(
            "decomposition stalled near the dual boundary".into(),
        ));
    }
    let h = dom.h();
    let x0 = dom.coords(node);
    let i = node as isize;
    let grad: Vec<f64> = dom
        .axis_offsets
        .iter()
        .map(|&(p, m)| (u.values()[(i + p) as usize] - u.values()[(i + m) as usize]) / (2.0 * h))
        .collect();
    let alpha = 0.5 * sol.lower;
    let through = EdgeQuadratic::through(edge_cone.edge(), &x0, u.value(node), &grad, &-&e)?;
    let mut fitted = false;
    for k in [3.0, 2.0, 1.0] {
        let Ok(local) = restrict_to_ball(u, node, k * h) else {
            continue;
        };
        fitted = true;
        let ld = local.domain();
        let gap = ld
            .boundary()
            .iter()
            .map(|&j| through.eval(&ld.coords(j)) - local.value(j))
            .fold(f64::INFINITY, f64::min);
        if gap > 0.0 {
            let radius = k * h;
            let margin = 0.5 * (alpha * radius * radius).min(gap);
            let quadratic = through.shifted(-margin);
            return Ok(Some(ViolationWitness {
                node,
                center: x0,
                quadratic,
                radius,
                margin,
                lambda_min: sol.lower,
                local,
            }));
        }
    }
    if !fitted {
        return Err(Error::InvalidInput(
            "no stencil ball fits around the node".into(),
        ));
    }
    // u is far from quadratic at the stencil scale
    Err(Error::Unsupported(
        "no sphere around the node stays below the edge quadratic".into(),
    ))
}

#[cfg(test)]
mod tests;
