//! Rank and null space of a tall sample matrix, used to recover edges of
//! geometric cones from sampled generators without forming a Gram matrix.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Upper-triangular factor of a tall matrix, accumulated row by row with
/// Givens rotations so that arbitrarily many rows fit in `d × d` storage.
pub struct StreamingQr {
    d: usize,
    r: Vec<f64>,
}

impl StreamingQr {
    pub fn new(d: usize) -> Self {
        Self {
            d,
            r: vec![0.0; d * d],
        }
    }

    pub fn push_row(&mut self, row: &[f64]) {
        let d = self.d;
        let mut x = row.to_vec();
        for k in 0..d {
            let a = self.r[k * d + k];
            let b = x[k];
            if b == 0.0 {
                continue;
            }
            let h = math::hypot(a, b);
            let c = a / h;
            let s = b / h;
            for j in k..d {
                let rj = self.r[k * d + j];
                let xj = x[j];
                self.r[k * d + j] = c * rj + s * xj;
                x[j] = -s * rj + c * xj;
            }
        }
    }

    /// Singular values (descending) and right singular vectors of the
    /// accumulated matrix, via one-sided Jacobi on `R`.
    pub fn svd(&self) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let d = self.d;
        // Columns of `u` are the columns of R·V as the rotation accumulates.
        let mut u: Vec<Vec<f64>> = (0..d)
            .map(|j| (0..d).map(|i| self.r[i * d + j]).collect())
            .collect();
        let mut v: Vec<Vec<f64>> = (0..d)
            .map(|j| {
                let mut e = vec![0.0; d];
                e[j] = 1.0;
                e
            })
            .collect();
        let mut converged = false;
        for _ in 0..80 {
            let mut rotated = false;
            for p in 0..d {
                for q in p + 1..d {
                    let alpha = math::dot(&u[p], &u[p]);
                    let beta = math::dot(&u[q], &u[q]);
                    let gamma = math::dot(&u[p], &u[q]);
                    if gamma.abs() <= 1e-15 * math::sqrt(alpha * beta) || gamma == 0.0 {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (2.0 * gamma);
                    let t = zeta.signum() / (zeta.abs() + math::sqrt(1.0 + zeta * zeta));
                    let t = if zeta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / math::sqrt(1.0 + t * t);
                    let s = c * t;
                    for k in 0..d {
                        let (a, b) = (u[p][k], u[q][k]);
                        u[p][k] = c * a - s * b;
                        u[q][k] = s * a + c * b;
                        let (a, b) = (v[p][k], v[q][k]);
                        v[p][k] = c * a - s * b;
                        v[q][k] = s * a + c * b;
                    }
                }
            }
            if !rotated {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence { sweeps: 80 });
        }
        let mut order: Vec<usize> = (0..d).collect();
        let sig: Vec<f64> = u.iter().map(|c| math::norm(c)).collect();
        order.sort_by(|&a, &b| sig[b].total_cmp(&sig[a]));
        Ok((
            order.iter().map(|&k| sig[k]).collect(),
            order.iter().map(|&k| v[k].clone()).collect(),
        ))
    }

    /// Numerical rank and an orthonormal basis of the null space, with
    /// singular values `≤ rel_tol · σ_max` treated as zero.
    pub fn null_space(&self, rel_tol: f64) -> Result<(usize, Vec<Vec<f64>>)> {
        let (sig, v) = self.svd()?;
        let smax = sig.first().copied().unwrap_or(0.0);
        let rank = sig
            .iter()
            .filter(|&&s| s > rel_tol * smax && s > 0.0)
            .count();
        Ok((rank, v[rank..].to_vec()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_dependent_rows() {
        let mut qr = StreamingQr::new(3);
        for k in 0..20 {
            let t = k as f64;
            qr.push_row(&[t, 2.0 * t + 1.0, 1.0]);
        }
        let (rank, null) = qr.null_space(1e-8).unwrap();
        assert_eq!(rank, 2);
        let z = &null[0];
        let r = [1.0, 3.0, 1.0];
        assert!(math::dot(&r, z).abs() < 1e-12);
        let r = [2.0, 5.0, 1.0];
        assert!(math::dot(&r, z).abs() < 1e-12);
    }
}
