//! Certified maximization of `c ↦ λ_min(A − Σ c_k B_k)` over a subspace.
//!
//! The map is concave. It is maximized through the smoothed minimum
//! eigenvalue with a decreasing smoothing parameter. Every iterate yields a
//! lower bound (the exact `λ_min` at that point), and the smoothing gradient
//! `Z` turns into an upper bound: after projecting `Z` onto the orthogonal
//! complement of the subspace and adding a multiple of a positive definite
//! matrix from that complement, `Z'` is PSD and orthogonal to every `B_k`, so
//! `λ_min(A − Σ c_k B_k) · tr Z' ≤ ⟨A, Z'⟩` for all `c`.

use alloc::vec::Vec;

use crate::error::Result;
use crate::math;
use crate::optim::{maximize_bfgs, soft_min, BfgsOptions};
use crate::rng;
use crate::symspace::{eigh, min_eig, SymMatrix, SymSubspace};

#[derive(Debug, Clone)]
pub struct MarginOptions {
    /// Stop once the certified gap is below this.
    pub target_gap: f64,
    /// Stop as soon as the sign relative to `±verdict_tol` is certified.
    pub verdict_tol: Option<f64>,
    pub starts: usize,
    pub max_iter: usize,
    pub warm_start: Option<Vec<f64>>,
    pub seed: u64,
}

impl MarginOptions {
    pub fn precise(target_gap: f64) -> Self {
        Self {
            target_gap,
            verdict_tol: None,
            starts: 5,
            max_iter: 500,
            warm_start: None,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MarginSolution {
    /// Exact `λ_min(A − Σ c_k B_k)` at the returned coordinates.
    pub lower: f64,
    /// Certified upper bound on the maximum.
    pub upper: f64,
    pub coords: Vec<f64>,
    /// PSD matrix orthogonal to the subspace with `⟨A, Z⟩ = upper · tr Z`.
    pub certificate: SymMatrix,
    pub iterations: usize,
}

impl MarginSolution {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }
}

/// A PSD matrix orthogonal to the subspace, needed to repair certificates.
#[derive(Debug, Clone)]
pub struct PdWitness {
    pub matrix: SymMatrix,
    pub lambda_min: f64,
}

fn certificate(
    a: &SymMatrix,
    z: &SymMatrix,
    dirs: &SymSubspace,
    pd: &PdWitness,
) -> Result<(f64, SymMatrix)> {
    let mut zs = z - &dirs.project(z);
    let lmin = min_eig(&zs)?.0;
    // a hair more than needed so roundoff cannot leave Z' indefinite
    let delta = if lmin < 0.0 {
        -lmin * (1.0 + 1e-9) / pd.lambda_min
    } else {
        0.0
    };
    zs.axpy(delta, &pd.matrix);
    let tr = zs.trace();
    Ok((a.dot(&zs) / tr, zs.scaled(1.0 / tr)))
}

/// Maximizes `λ_min(A − Σ c_k B_k)` over coordinates in the orthonormal basis of `dirs`.
pub fn maximize_min_eig(
    a: &SymMatrix,
    dirs: &SymSubspace,
    pd: &PdWitness,
    opts: &MarginOptions,
) -> Result<MarginSolution> {
    let n = a.n();
    let k = dirs.dim();
    let scale = 1.0 + a.norm();
    if k == 0 {
        let s = eigh(a)?;
        let v = s.vector(0);
        let z = SymMatrix::outer(&v);
        return Ok(MarginSolution {
            lower: s.min(),
            upper: s.min(),
            coords: Vec::new(),
            certificate: z,
            iterations: 0,
        });
    }
    let basis = dirs.basis();
    let shifted = |c: &[f64]| {
        let mut m = a.clone();
        for (ck, b) in c.iter().zip(basis) {
            m.axpy(-ck, b);
        }
        m
    };

    let mut starts: Vec<(Vec<f64>, f64)> = Vec::new();
    if let Some(w) = &opts.warm_start {
        if w.len() == k {
            starts.push((w.clone(), 1e-4 * scale));
        }
    }
    starts.push((dirs.coords(a), 0.05 * scale));
    starts.push((alloc::vec![0.0; k], 0.05 * scale));
    let mut r = rng::seeded(opts.seed);
    while starts.len() < opts.starts.max(1) + usize::from(opts.warm_start.is_some()) {
        let c: Vec<f64> = rng::gaussian_vec(&mut r, k)
            .into_iter()
            .map(|x| x * scale / math::sqrt(k as f64))
            .collect();
        starts.push((c, 0.05 * scale));
    }

    let mut best: Option<MarginSolution> = None;
    let mut best_upper = f64::INFINITY;
    let mut best_cert = SymMatrix::zeros(n);
    let mut total_iter = 0;
    let mu_floor = 1e-11 * scale;
    'starts: for (c0, mu0) in starts {
        let mut c = c0;
        let mut mu = mu0;
        let mut used = 0;
        loop {
            let remaining = opts.max_iter.saturating_sub(used);
            if remaining == 0 {
                break;
            }
            let grad_tol = (1e-2 * mu / scale).max(1e-12);
            let f = |x: &[f64]| {
                let s = soft_min(&shifted(x), mu)?;
                let g: Vec<f64> = basis.iter().map(|b| -s.grad.dot(b)).collect();
                Ok((s.value, g))
            };
            let out = maximize_bfgs(
                f,
                &c,
                &BfgsOptions {
                    max_iter: remaining,
                    grad_tol,
                    f_tol: 0.0,
                    initial_step: 0.1 * scale,
                },
            )?;
            used += out.iterations.max(1);
            total_iter += out.iterations;
            c = out.x;
            let s = soft_min(&shifted(&c), mu)?;
            let lower = s.lambda_min;
            let (upper, cert) = certificate(a, &s.grad, dirs, pd)?;
            if upper < best_upper {
                best_upper = upper;
                best_cert = cert;
            }
            if best.as_ref().map_or(true, |b| lower > b.lower) {
                best = Some(MarginSolution {
                    lower,
                    upper: best_upper,
                    coords: c.clone(),
                    certificate: best_cert.clone(),
                    iterations: 0,
                });
            }
            let lb = best.as_ref().map_or(f64::NEG_INFINITY, |b| b.lower);
            if best_upper - lb <= opts.target_gap {
                break 'starts;
            }
            if let Some(t) = opts.verdict_tol {
                if lb > t || best_upper < -t {
                    break 'starts;
                }
            }
            if mu <= mu_floor {
                break;
            }
            mu = (mu * 0.1).max(mu_floor);
        }
    }
    let mut sol = best.expect("at least one start");
    sol.upper = best_upper;
    sol.certificate = best_cert;
    sol.iterations = total_iter;
    Ok(sol)
}
