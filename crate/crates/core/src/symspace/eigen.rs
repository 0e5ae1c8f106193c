use alloc::vec::Vec;

use super::matrix::{Square, SymMatrix};
use crate::error::{Error, Result};
use crate::math;

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `A = V Λ Vᵀ` with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Orthogonal matrix whose columns are the eigenvectors.
    pub eigenvectors: Square,
}

impl Spectrum {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.eigenvectors.column(k)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    pub fn reconstruct(&self) -> SymMatrix {
        let n = self.eigenvalues.len();
        let mut a = SymMatrix::zeros(n);
        for k in 0..n {
            a.add_outer(self.eigenvalues[k], &self.vector(k));
        }
        a
    }
}

/// Symmetric eigen-decomposition by the cyclic Jacobi method.
///
/// Deterministic: rotations are applied in a fixed order and the output is
/// sorted ascending (stable with respect to the final diagonal order).
pub fn eigh(a: &SymMatrix) -> Result<Spectrum> {
    let n = a.n();
    let mut m: Vec<f64> = a.as_slice().to_vec();
    let mut v = Square::identity(n);
    let scale = a.norm();
    if n == 1 || scale == 0.0 {
        return Ok(Spectrum {
            eigenvalues: (0..n).map(|i| m[i * n + i]).collect(),
            eigenvectors: v,
        });
    }
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += m[i * n + j] * m[i * n + j];
            }
        }
        if off <= (1e-15 * scale) * (1e-15 * scale) {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + math::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / math::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    if !converged {
        return Err(Error::NonConvergence { sweeps: MAX_SWEEPS });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[x * n + x].total_cmp(&m[y * n + y]));
    let eigenvalues = order.iter().map(|&k| m[k * n + k]).collect();
    let cols: Vec<Vec<f64>> = order.iter().map(|&k| v.column(k)).collect();
    Ok(Spectrum {
        eigenvalues,
        eigenvectors: Square::from_columns(&cols),
    })
}

/// Smallest eigenvalue and a unit eigenvector for it.
pub fn min_eig(a: &SymMatrix) -> Result<(f64, Vec<f64>)> {
    let s = eigh(a)?;
    Ok((s.eigenvalues[0], s.vector(0)))
}

/// Eigenvalues only.
pub fn eigvalsh(a: &SymMatrix) -> Result<Vec<f64>> {
    Ok(eigh(a)?.eigenvalues)
}
