//! Dense revised simplex for small linear programs.
//!
//! The envelope problems have few variables (the edge-quadratic coefficients)
//! and many constraints (one per boundary sample), so they are solved through
//! their dual, which is in standard form with a slack basis available at once.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Solution of `minimize cᵀx subject to Ax = b, x ≥ 0`.
#[derive(Debug, Clone)]
pub struct StandardSolution {
    pub value: f64,
    pub x: Vec<f64>,
    /// Simplex multipliers `y` with `Aᵀy ≤ c` at optimality.
    pub duals: Vec<f64>,
    pub iterations: usize,
}

const PIVOT_TOL: f64 = 1e-11;

fn invert(m: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .ok_or_else(|| Error::LinearProgram("empty basis".into()))?;
        if a[piv][col].abs() < 1e-13 {
            return Err(Error::LinearProgram("singular basis".into()));
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let d = a[col][col];
        for j in 0..n {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for i in 0..n {
            if i != col {
                let f = a[i][col];
                if f != 0.0 {
                    for j in 0..n {
                        a[i][j] -= f * a[col][j];
                        inv[i][j] -= f * inv[col][j];
                    }
                }
            }
        }
    }
    Ok(inv)
}

/// Revised simplex from a given feasible basis. `columns[j]` is column `j`
/// of `A`. Dantzig pricing, switching to Bland's rule after a run of
/// degenerate pivots.
pub fn solve_standard(
    columns: &[Vec<f64>],
    b: &[f64],
    c: &[f64],
    mut basis: Vec<usize>,
    max_iter: usize,
) -> Result<StandardSolution> {
    let m = b.len();
    let ncols = columns.len();
    if basis.len() != m || c.len() != ncols {
        return Err(Error::LinearProgram("inconsistent problem shape".into()));
    }
    let basis_matrix = |basis: &[usize]| -> Vec<Vec<f64>> {
        (0..m)
            .map(|i| basis.iter().map(|&j| columns[j][i]).collect())
            .collect()
    };
    let mut binv = invert(&basis_matrix(&basis))?;
    let mut xb: Vec<f64> = (0..m)
        .map(|i| (0..m).map(|k| binv[i][k] * b[k]).sum())
        .collect();
    if xb.iter().any(|&v| v < -1e-9) {
        return Err(Error::LinearProgram("starting basis is infeasible".into()));
    }
    let mut in_basis = vec![false; ncols];
    for &j in &basis {
        in_basis[j] = true;
    }
    let mut degenerate_run = 0;
    let mut iterations = 0;
    loop {
        // multipliers y = c_Bᵀ B⁻¹
        let y: Vec<f64> = (0..m)
            .map(|k| (0..m).map(|i| c[basis[i]] * binv[i][k]).sum())
            .collect();
        let scale = 1.0 + c.iter().fold(0.0f64, |s, v| s.max(v.abs()));
        let bland = degenerate_run > 50;
        let mut entering = None;
        let mut best = -1e-10 * scale;
        for j in 0..ncols {
            if in_basis[j] {
                continue;
            }
            let rc = c[j] - columns[j].iter().zip(&y).map(|(a, y)| a * y).sum::<f64>();
            if rc < best {
                entering = Some(j);
                if bland {
                    break;
                }
                best = rc;
            }
        }
        let Some(q) = entering else {
            let mut x = vec![0.0; ncols];
            for (i, &j) in basis.iter().enumerate() {
                x[j] = xb[i].max(0.0);
            }
            let value = c.iter().zip(&x).map(|(c, x)| c * x).sum();
            return Ok(StandardSolution {
                value,
                x,
                duals: y,
                iterations,
            });
        };
        if iterations >= max_iter {
            return Err(Error::LinearProgram("iteration limit reached".into()));
        }
        iterations += 1;
        let d: Vec<f64> = (0..m)
            .map(|i| (0..m).map(|k| binv[i][k] * columns[q][k]).sum())
            .collect();
        let mut leave = None;
        let mut ratio = f64::INFINITY;
        for i in 0..m {
            if d[i] > PIVOT_TOL {
                let r = xb[i].max(0.0) / d[i];
                let better = match leave {
                    None => true,
                    Some(l) => {
                        r < ratio - 1e-14
                            || (r <= ratio + 1e-14
                                && (if bland {
                                    basis[i] < basis[l]
                                } else {
                                    d[i] > d[l]
                                }))
                    }
                };
                if better {
                    ratio = r;
                    leave = Some(i);
                }
            }
        }
        let Some(p) = leave else {
            return Err(Error::LinearProgram("unbounded".into()));
        };
        degenerate_run = if ratio <= 1e-14 {
            degenerate_run + 1
        } else {
            0
        };
        for i in 0..m {
            if i != p {
                xb[i] -= ratio * d[i];
            }
        }
        xb[p] = ratio;
        let dp = d[p];
        let row_p: Vec<f64> = binv[p].iter().map(|v| v / dp).collect();
        for i in 0..m {
            if i != p && d[i] != 0.0 {
                let f = d[i];
                for k in 0..m {
                    binv[i][k] -= f * row_p[k];
                }
            }
        }
        binv[p] = row_p;
        in_basis[basis[p]] = false;
        in_basis[q] = true;
        basis[p] = q;
        if iterations % 64 == 0 {
            binv = invert(&basis_matrix(&basis))?;
            xb = (0..m)
                .map(|i| (0..m).map(|k| binv[i][k] * b[k]).sum())
                .collect();
        }
    }
}

/// Solution of a bounded inequality LP.
#[derive(Debug, Clone)]
pub struct BoundedSolution {
    pub value: f64,
    pub z: Vec<f64>,
    /// Whether some coordinate of `z` sits on the bound.
    pub at_bound: bool,
}

/// `maximize gᵀz subject to ⟨rows[k], z⟩ ≤ rhs[k], |z_i| ≤ bound`, solved via
/// the dual `minimize rhsᵀy + bound·Σ(s⁺ + s⁻)` over
/// `Σ y_k rows[k] + s⁺ − s⁻ = g`, `y, s ≥ 0`. Duplicate constraints are
/// merged, keeping the smallest right-hand side.
pub fn maximize_bounded(
    g: &[f64],
    rows: &[Vec<f64>],
    rhs: &[f64],
    bound: f64,
) -> Result<BoundedSolution> {
    let m = g.len();
    if rows.len() != rhs.len() || rows.iter().any(|r| r.len() != m) {
        return Err(Error::LinearProgram("inconsistent constraint shape".into()));
    }
    if !(bound > 0.0) {
        return Err(Error::LinearProgram("bound must be positive".into()));
    }
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| {
        rows[a]
            .iter()
            .zip(&rows[b])
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut costs: Vec<f64> = Vec::new();
    for &k in &order {
        if let Some(last) = columns.last() {
            if last
                .iter()
                .zip(&rows[k])
                .all(|(a, b)| (a - b).abs() <= 1e-13 * (1.0 + a.abs()))
            {
                let c = costs.last_mut().unwrap();
                *c = c.min(rhs[k]);
                continue;
            }
        }
        columns.push(rows[k].clone());
        costs.push(rhs[k]);
    }
    let first_slack = columns.len();
    let mut basis = Vec::with_capacity(m);
    for i in 0..m {
        let mut plus = vec![0.0; m];
        plus[i] = 1.0;
        let minus: Vec<f64> = plus.iter().map(|v| -v).collect();
        columns.push(plus);
        columns.push(minus);
        costs.push(bound);
        costs.push(bound);
        basis.push(first_slack + 2 * i + usize::from(g[i] < 0.0));
    }
    let sol = solve_standard(&columns, g, &costs, basis, 50_000)?;
    let z = sol.duals;
    let at_bound = z.iter().any(|v| v.abs() >= bound * (1.0 - 1e-9));
    Ok(BoundedSolution {
        value: sol.value,
        z,
        at_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_envelope_on_interval() {
        // h = c + b·x with h(±1) ≤ φ(±1), maximize h(0) = c
        let rows = vec![vec![1.0, 1.0], vec![1.0, -1.0]];
        let s = maximize_bounded(&[1.0, 0.0], &rows, &[1.0, 1.0], 100.0).unwrap();
        assert!((s.value - 1.0).abs() < 1e-12);
        let s = maximize_bounded(&[1.0, 0.0], &rows, &[1.0, 0.0], 100.0).unwrap();
        assert!((s.value - 0.5).abs() < 1e-12);
        assert!((s.z[0] - 0.5).abs() < 1e-12 && (s.z[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bound_is_active_when_unconstrained() {
        let s = maximize_bounded(&[1.0, 2.0], &[vec![1.0, 0.0]], &[3.0], 10.0).unwrap();
        assert!((s.value - 23.0).abs() < 1e-10);
        assert!(s.at_bound);
    }

    #[test]
    fn duplicates_keep_tightest() {
        let rows = vec![vec![1.0], vec![1.0], vec![1.0]];
        let s = maximize_bounded(&[1.0], &rows, &[5.0, 2.0, 4.0], 100.0).unwrap();
        assert!((s.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn matches_brute_force_on_random_2d() {
        use crate::rng;
        let mut r = rng::seeded(3);
        for _ in 0..50 {
            let rows: Vec<Vec<f64>> = (0..12).map(|_| rng::gaussian_vec(&mut r, 2)).collect();
            let rhs: Vec<f64> = (0..12).map(|_| 1.0 + rng::uniform(&mut r)).collect();
            let g = rng::gaussian_vec(&mut r, 2);
            let bound = 5.0;
            let s = maximize_bounded(&g, &rows, &rhs, bound).unwrap();
            // brute force over vertices from all pairs of active constraints
            let mut all: Vec<(Vec<f64>, f64)> =
                rows.iter().cloned().zip(rhs.iter().copied()).collect();
            for i in 0..2 {
                let mut e = vec![0.0; 2];
                e[i] = 1.0;
                all.push((e.clone(), bound));
                all.push((e.iter().map(|v| -v).collect(), bound));
            }
            let mut best = f64::NEG_INFINITY;
            for a in 0..all.len() {
                for b in a + 1..all.len() {
                    let (p, q) = (&all[a].0, &all[b].0);
                    let det = p[0] * q[1] - p[1] * q[0];
                    if det.abs() < 1e-12 {
                        continue;
                    }
                    let z = [
                        (all[a].1 * q[1] - p[1] * all[b].1) / det,
                        (p[0] * all[b].1 - all[a].1 * q[0]) / det,
                    ];
                    if all
                        .iter()
                        .all(|(row, rh)| row[0] * z[0] + row[1] * z[1] <= rh + 1e-9)
                    {
                        best = best.max(g[0] * z[0] + g[1] * z[1]);
                    }
                }
            }
            assert!((s.value - best).abs() < 1e-8, "{} vs {}", s.value, best);
            let primal: f64 = g.iter().zip(&s.z).map(|(a, b)| a * b).sum();
            assert!((primal - best).abs() < 1e-8);
        }
    }
}
