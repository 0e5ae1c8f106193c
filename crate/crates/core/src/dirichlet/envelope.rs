//! Edge-quadratic envelope `U_E(x) = sup{h(x) : h edge quadratic, h ≤ φ on ∂Ω}`.
//!
//! The constraints are linear in the coefficients `(c, b, β)` of
//! `h(y) = c + ⟨b, y⟩ + ½ Σ β_k ⟨E_k y, y⟩`, so each value is one LP with
//! the boundary points of the grid as samples and a box bound on the coefficients.
//! On a ball whose field carries its boundary function, the points where the
//! stencil crosses the sphere are sampled too, since the solver imposes the
//! data there.

use alloc::vec::Vec;

use super::{perron_solve, GridField, PerronOptions, PerronSolution};
use crate::cones::ConeHandle;
use crate::error::{Error, Result};
use crate::lp;
use crate::rng;
use crate::symspace::SymSubspace;

#[derive(Debug, Clone)]
pub struct EnvelopeValue {
    pub value: f64,
    /// Value with the coefficient bound doubled.
    pub value_doubled: f64,
    pub bound: f64,
    /// Doubling the bound changed the value by less than `1e-6`.
    pub stable: bool,
    /// Optimal coefficients `(c, b, β)`.
    pub coefficients: Vec<f64>,
}

fn features(edge: &SymSubspace, y: &[f64]) -> Vec<f64> {
    let mut row = Vec::with_capacity(1 + y.len() + edge.dim());
    row.push(1.0);
    row.extend_from_slice(y);
    row.extend(edge.basis().iter().map(|b| 0.5 * b.quad(y)));
    row
}

/// `U_E(x)` with coefficient bound `bound` (default `1e3·(1 + max|φ|)`).
pub fn edge_envelope(
    edge: &SymSubspace,
    phi: &GridField,
    x: &[f64],
    bound: Option<f64>,
) -> Result<EnvelopeValue> {
    let dom = phi.domain();
    if edge.n() != dom.n() || x.len() != dom.n() {
        return Err(Error::DimensionMismatch {
            expected: dom.n(),
            found: edge.n(),
        });
    }
    let mut rows = Vec::with_capacity(dom.boundary().len());
    let mut rhs = Vec::with_capacity(dom.boundary().len());
    let mut phi_max = 0.0f64;
    for &i in dom.boundary() {
        rows.push(features(edge, &dom.boundary_point(i)));
        rhs.push(phi.value(i));
        phi_max = phi_max.max(phi.value(i).abs());
    }
    if let Some(data) = phi.boundary_fn() {
        for p in dom.crossing_points() {
            let v = data.eval(&p);
            rows.push(features(edge, &p));
            rhs.push(v);
            phi_max = phi_max.max(v.abs());
        }
    }
    let bound = bound.unwrap_or(1e3 * (1.0 + phi_max));
    let g = features(edge, x);
    let first = lp::maximize_bounded(&g, &rows, &rhs, bound)?;
    let second = lp::maximize_bounded(&g, &rows, &rhs, 2.0 * bound)?;
    Ok(EnvelopeValue {
        value: first.value,
        value_doubled: second.value,
        bound,
        stable: (second.value - first.value).abs() < 1e-6,
        coefficients: first.z,
    })
}

#[derive(Debug, Clone)]
pub struct EnvelopeSample {
    pub node: usize,
    pub envelope: f64,
    pub perron: f64,
    pub stable: bool,
}

impl EnvelopeSample {
    /// `H − U_E`; nonnegative up to discretization.
    pub fn gap(&self) -> f64 {
        self.perron - self.envelope
    }
}

#[derive(Debug, Clone)]
pub struct EnvelopeReport {
    pub perron: PerronSolution,
    pub samples: Vec<EnvelopeSample>,
}

impl EnvelopeReport {
    pub fn max_gap(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.gap().abs())
            .fold(0.0, f64::max)
    }

    /// Largest excess `U_E − H` (positive means an ordering violation).
    pub fn max_excess(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| -s.gap())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Fails on the first sample with `U_E > H + tol`.
    pub fn check_ordering(&self, tol: f64) -> Result<()> {
        for s in &self.samples {
            if s.envelope > s.perron + tol {
                return Err(Error::OrderingViolation {
                    node: s.node,
                    envelope: s.envelope,
                    perron: s.perron,
                });
            }
        }
        Ok(())
    }
}

/// Perron solution and envelope at `nodes` sampled interior nodes (all of
/// them when fewer exist).
pub fn envelope_report(
    cone: &ConeHandle,
    phi: &GridField,
    nodes: usize,
    seed: u64,
    opts: &PerronOptions,
) -> Result<EnvelopeReport> {
    let edge = cone.edge_of()?;
    let perron = perron_solve(cone, phi, opts)?;
    let dom = phi.domain();
    let mut pool: Vec<usize> = dom.interior().to_vec();
    let mut r = rng::seeded(seed);
    let take = nodes.min(pool.len());
    // partial Fisher–Yates for a deterministic sample
    for k in 0..take {
        let j = k + (rng::uniform(&mut r) * (pool.len() - k) as f64) as usize % (pool.len() - k);
        pool.swap(k, j);
    }
    let mut chosen: Vec<usize> = pool[..take].to_vec();
    chosen.sort_unstable();
    let mut samples = Vec::with_capacity(take);
    for node in chosen {
        let env = edge_envelope(&edge, phi, &dom.coords(node), None)?;
        samples.push(EnvelopeSample {
            node,
            envelope: env.value,
            perron: perron.field.value(node),
            stable: env.stable,
        });
    }
    Ok(EnvelopeReport { perron, samples })
}
