use alloc::vec::Vec;

use super::edge::{maximize_min_eig, MarginOptions, PdWitness};
use crate::error::{Error, Result};
use crate::math;
use crate::symspace::{SymMatrix, SymSubspace};

/// Tolerance band for the basic-edge dichotomy.
pub const BASIC_BAND: f64 = 1e-7;

/// Outcome of the basic-edge test.
#[derive(Debug, Clone)]
pub struct BasicEdgeReport {
    pub basic: bool,
    /// `max λ_min(X)/‖X‖` over nonzero `X ∈ E`, or `None` when `E ⊥ Id`
    /// (then no nonzero PSD matrix can lie in `E`).
    pub edge_side: Option<f64>,
    /// `max λ_min(X)/‖X‖` over nonzero `X ∈ S = E^⊥`, or `None` when `S ⊥ Id`.
    pub span_side: Option<f64>,
    /// Unit-norm maximizer: positive definite in `S` when basic, PSD in `E` otherwise.
    pub witness: SymMatrix,
}

/// Best `λ_min(X)/‖X‖` over nonzero `X` in the subspace.
///
/// A nonzero PSD matrix has positive trace, so the sign of this maximum is
/// decided on the affine slice `{X : tr X = 1}`, where `λ_min` is concave and
/// the certified maximizer of the edge-margin machinery applies.
fn slice_max(v: &SymSubspace) -> Result<Option<(f64, SymMatrix)>> {
    let n = v.n();
    let id = SymMatrix::identity(n);
    let pid = v.project(&id);
    let t = pid.dot(&pid);
    if t <= 1e-24 * n as f64 {
        return Ok(None);
    }
    let base = pid.scaled(1.0 / t);
    let u = pid.scaled(1.0 / math::sqrt(t));
    let gens: Vec<SymMatrix> = v
        .basis()
        .iter()
        .map(|b| {
            let mut r = b.clone();
            r.axpy(-b.dot(&u), &u);
            r
        })
        .collect();
    let dirs = SymSubspace::orthonormalize(n, &gens)?;
    let pd = PdWitness {
        matrix: id.scaled(1.0 / math::sqrt(n as f64)),
        lambda_min: 1.0 / math::sqrt(n as f64),
    };
    let mut opts = MarginOptions::precise(1e-10);
    opts.starts = 3;
    let sol = maximize_min_eig(&base, &dirs, &pd, &opts)?;
    let mut x = base.clone();
    for (c, b) in sol.coords.iter().zip(dirs.basis()) {
        x.axpy(-c, b);
    }
    let nx = x.norm();
    Ok(Some((sol.lower / nx, x.scaled(1.0 / nx))))
}

/// Decides whether `E ∩ 𝒫 = {0}`.
///
/// Exactly one of "some nonzero `X ∈ E` is PSD" and "some `X ∈ S` is
/// positive definite" holds; both sides are computed and a violation of the
/// dichotomy (within [`BASIC_BAND`]) is reported as indeterminate.
pub fn is_basic_edge(e: &SymSubspace) -> Result<BasicEdgeReport> {
    let s = e.complement();
    let edge = slice_max(e)?;
    let span = slice_max(&s)?;
    let edge_holds = edge.as_ref().is_some_and(|(v, _)| *v >= -BASIC_BAND);
    let span_holds = span.as_ref().is_some_and(|(v, _)| *v > BASIC_BAND);
    let ev = edge.as_ref().map(|p| p.0);
    let sv = span.as_ref().map(|p| p.0);
    if edge_holds == span_holds {
        return Err(Error::Indeterminate {
            edge_side: ev.unwrap_or(f64::NEG_INFINITY),
            span_side: sv.unwrap_or(f64::NEG_INFINITY),
        });
    }
    let witness = if span_holds {
        span.expect("span side").1
    } else {
        edge.expect("edge side").1
    };
    Ok(BasicEdgeReport {
        basic: span_holds,
        edge_side: ev,
        span_side: sv,
        witness,
    })
}
