//! Smooth surrogates for extreme eigenvalues and a dense BFGS maximizer.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::math;
use crate::symspace::{eigh, SymMatrix};

/// Smoothed minimum eigenvalue
/// `f_μ(M) = λ_min − μ ln Σ_i exp(−(λ_i − λ_min)/μ)`, which satisfies
/// `λ_min − μ ln n ≤ f_μ ≤ λ_min`, together with its gradient
/// `Z = Σ w_i v_i v_iᵀ` (a density matrix: `Z ⪰ 0`, `tr Z = 1`).
pub struct SoftMin {
    pub value: f64,
    pub lambda_min: f64,
    pub grad: SymMatrix,
}

pub fn soft_min(m: &SymMatrix, mu: f64) -> Result<SoftMin> {
    let s = eigh(m)?;
    let lmin = s.eigenvalues[0];
    let n = m.n();
    let mut w: Vec<f64> = s
        .eigenvalues
        .iter()
        .map(|&l| math::exp(-(l - lmin) / mu))
        .collect();
    let total: f64 = w.iter().sum();
    for x in w.iter_mut() {
        *x /= total;
    }
    let mut z = SymMatrix::zeros(n);
    for k in 0..n {
        if w[k] > 1e-18 {
            z.add_outer(w[k], &s.vector(k));
        }
    }
    Ok(SoftMin {
        value: lmin - mu * math::ln(total),
        lambda_min: lmin,
        grad: z,
    })
}

pub struct BfgsOptions {
    pub max_iter: usize,
    /// Stop when the gradient norm falls below this.
    pub grad_tol: f64,
    /// Stop when an iteration improves the objective by less than this.
    pub f_tol: f64,
    pub initial_step: f64,
}

pub struct BfgsOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
}

/// Maximizes a smooth function by BFGS with an Armijo backtracking line search.
/// `f` returns the value and gradient.
pub fn maximize_bfgs(
    mut f: impl FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
    x0: &[f64],
    opts: &BfgsOptions,
) -> Result<BfgsOutcome> {
    let k = x0.len();
    let mut x = x0.to_vec();
    let (mut fx, mut g) = f(&x)?;
    if k == 0 {
        return Ok(BfgsOutcome { x, iterations: 0 });
    }
    // Inverse Hessian approximation of −f (positive definite).
    let mut h = vec![0.0; k * k];
    let reset = |h: &mut Vec<f64>, scale: f64| {
        h.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..k {
            h[i * k + i] = scale;
        }
    };
    let gn0 = math::norm(&g);
    reset(
        &mut h,
        if gn0 > 0.0 {
            opts.initial_step / gn0.max(1e-300)
        } else {
            1.0
        },
    );
    let mut iterations = 0;
    for it in 0..opts.max_iter {
        iterations = it + 1;
        let gn = math::norm(&g);
        if gn <= opts.grad_tol {
            break;
        }
        // ascent direction d = H g
        let mut d: Vec<f64> = (0..k)
            .map(|i| (0..k).map(|j| h[i * k + j] * g[j]).sum())
            .collect();
        let mut slope = math::dot(&d, &g);
        if slope <= 0.0 {
            reset(&mut h, opts.initial_step / gn);
            d = g.iter().map(|v| v * opts.initial_step / gn).collect();
            slope = math::dot(&d, &g);
        }
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let xn: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + step * b).collect();
            let (fv, gv) = f(&xn)?;
            if fv >= fx + 1e-4 * step * slope {
                accepted = Some((xn, fv, gv));
                break;
            }
            step *= 0.5;
        }
        let Some((xn, fv, gv)) = accepted else {
            break;
        };
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        // y for the convex function −f
        let y: Vec<f64> = g.iter().zip(&gv).map(|(a, b)| a - b).collect();
        let sy = math::dot(&s, &y);
        let improvement = fv - fx;
        x = xn;
        fx = fv;
        g = gv;
        if sy > 1e-300 {
            if it == 0 {
                let yy = math::dot(&y, &y);
                reset(&mut h, sy / yy);
            }
            let rho = 1.0 / sy;
            let hy: Vec<f64> = (0..k)
                .map(|i| (0..k).map(|j| h[i * k + j] * y[j]).sum())
                .collect();
            let yhy = math::dot(&y, &hy);
            for i in 0..k {
                for j in 0..k {
                    h[i * k + j] += -rho * (hy[i] * s[j] + s[i] * hy[j])
                        + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
        }
        if improvement.abs() <= opts.f_tol {
            break;
        }
    }
    Ok(BfgsOutcome { x, iterations })
}
