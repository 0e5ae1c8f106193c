use alloc::vec::Vec;

use super::{ConeHandle, ContainsOptions, Verdict};
use crate::error::{Error, Result};
use crate::math;
use crate::rng;
use crate::symspace::{Square, SymMatrix, SymSubspace, VecSubspace};

/// Residual below which a direction counts as lying in the edge.
pub const SUPPORT_ACCEPT: f64 = 1e-9;
/// Residual above which a direction is clearly not in the edge.
pub const SUPPORT_REJECT: f64 = 1e-6;

/// The support of a cone: `V = span{e : P_e ∈ E}` and `W = V^⊥`.
#[derive(Debug, Clone)]
pub struct Support {
    pub kernel: VecSubspace,
    pub support: VecSubspace,
    /// `‖π_S(P_e)‖²` at each accepted direction.
    pub residuals: Vec<f64>,
    /// Smallest residual over the final (rejected) search, if any.
    pub last_rejected: Option<f64>,
}

impl Support {
    /// Compares `contains(A)` with `contains(P_W A P_W)` on random matrices.
    /// Returns `(agreeing, compared)`; dead-band cases are not compared.
    pub fn check_extension(
        &self,
        cone: &ConeHandle,
        samples: usize,
        seed: u64,
    ) -> Result<(usize, usize)> {
        let n = cone.n();
        let pw = self.support.projector().to_square();
        let mut r = rng::seeded(seed);
        let (mut agree, mut total) = (0, 0);
        for _ in 0..samples {
            let a = &rng::gaussian_sym(&mut r, n)
                + &SymMatrix::identity(n).scaled(rng::gaussian(&mut r));
            let opts = ContainsOptions {
                verdict_only: true,
                ..Default::default()
            };
            let v1 = cone.contains_with(&a, &opts)?;
            let v2 = cone.contains_with(&pw.congruence(&a), &opts)?;
            if v1.verdict == Verdict::Boundary || v2.verdict == Verdict::Boundary {
                continue;
            }
            total += 1;
            if v1.verdict == v2.verdict {
                agree += 1;
            }
        }
        Ok((agree, total))
    }
}

/// Local minimization of `r(y) = Σ_k (yᵀ M_k y)²` on the unit sphere by
/// Levenberg–Marquardt steps in the tangent space.
fn minimize_residual(mats: &[SymMatrix], y0: Vec<f64>) -> Result<(f64, Vec<f64>)> {
    let d = y0.len();
    let eval = |y: &[f64]| -> f64 {
        mats.iter()
            .map(|m| {
                let q = m.quad(y);
                q * q
            })
            .sum()
    };
    let mut y = y0;
    let mut ry = eval(&y);
    let mut damping = 1e-3;
    for _ in 0..200 {
        if ry < 1e-28 {
            break;
        }
        // residuals and tangent Jacobian
        let q: Vec<f64> = mats.iter().map(|m| m.quad(&y)).collect();
        let jac: Vec<Vec<f64>> = mats
            .iter()
            .map(|m| {
                let g: Vec<f64> = m.mul_vec(&y).iter().map(|v| 2.0 * v).collect();
                let c = math::dot(&g, &y);
                g.iter().zip(&y).map(|(gi, yi)| gi - c * yi).collect()
            })
            .collect();
        let mut jtj = Square::zeros(d);
        let mut jtq = alloc::vec![0.0; d];
        for (row, qk) in jac.iter().zip(&q) {
            for i in 0..d {
                jtq[i] += row[i] * qk;
                for j in 0..d {
                    jtj.set(i, j, jtj.get(i, j) + row[i] * row[j]);
                }
            }
        }
        let mut improved = false;
        for _ in 0..20 {
            let mut m = jtj.clone();
            for i in 0..d {
                m.set(i, i, m.get(i, i) + damping * (1.0 + jtj.get(i, i)));
            }
            let rhs: Vec<f64> = jtq.iter().map(|v| -v).collect();
            let step = m.solve(&rhs)?;
            let cand: Vec<f64> = y.iter().zip(&step).map(|(a, b)| a + b).collect();
            let nc = math::norm(&cand);
            let cand: Vec<f64> = cand.iter().map(|v| v / nc).collect();
            let rc = eval(&cand);
            if rc < ry {
                y = cand;
                ry = rc;
                damping = (damping * 0.3).max(1e-12);
                improved = true;
                break;
            }
            damping *= 10.0;
        }
        if !improved {
            break;
        }
    }
    Ok((ry, y))
}

/// Finds `V = span{e : |e| = 1, P_e ∈ E}` by deflation and returns `W = V^⊥`.
///
/// At each stage `r(e) = ‖P_e − π_E(P_e)‖²` is minimized from 20 starts over
/// unit vectors orthogonal to the directions found so far. Minima below
/// [`SUPPORT_ACCEPT`] are accepted; minima in the band up to
/// [`SUPPORT_REJECT`] are reported as indeterminate.
pub fn support_of(cone: &ConeHandle) -> Result<Support> {
    let n = cone.n();
    let edge = cone.edge_of()?;
    let span = edge.complement();
    find_support(n, &span)
}

pub(crate) fn find_support(n: usize, span: &SymSubspace) -> Result<Support> {
    let mut found: Vec<Vec<f64>> = Vec::new();
    let mut residuals = Vec::new();
    let mut last_rejected = None;
    let mut r = rng::seeded(0x5_0009);
    loop {
        let kernel = VecSubspace::orthonormalize(n, &found);
        let search = kernel.complement();
        let d = search.dim();
        if d == 0 {
            break;
        }
        let q = Square::from_columns(
            &(0..n)
                .map(|i| {
                    if i < d {
                        search.basis()[i].clone()
                    } else {
                        alloc::vec![0.0; n]
                    }
                })
                .collect::<Vec<_>>(),
        );
        // reduced matrices Qᵀ S_k Q on the search space (top-left d×d block)
        let mats: Vec<SymMatrix> = span
            .basis()
            .iter()
            .map(|s| {
                let full = q.pullback(s);
                SymMatrix::from_fn(d, |i, j| full.get(i, j))
            })
            .collect();
        let mut best = (f64::INFINITY, Vec::new());
        for _ in 0..20 {
            let y0 = rng::unit_vec(&mut r, d);
            let (ry, y) = minimize_residual(&mats, y0)?;
            if ry < best.0 {
                best = (ry, y);
            }
            if best.0 < SUPPORT_ACCEPT * 1e-6 {
                break;
            }
        }
        if best.0 < SUPPORT_ACCEPT {
            let e: Vec<f64> = (0..n)
                .map(|i| (0..d).map(|k| search.basis()[k][i] * best.1[k]).sum())
                .collect();
            found.push(e);
            residuals.push(best.0);
        } else if best.0 <= SUPPORT_REJECT {
            return Err(Error::IndeterminateDirection { residual: best.0 });
        } else {
            last_rejected = Some(best.0);
            break;
        }
    }
    let kernel = VecSubspace::orthonormalize(n, &found);
    let support = kernel.complement();
    Ok(Support {
        kernel,
        support,
        residuals,
        last_rejected,
    })
}
