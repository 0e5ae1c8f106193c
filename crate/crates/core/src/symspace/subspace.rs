use alloc::vec;
use alloc::vec::Vec;

use super::matrix::{standard_basis, sym_dim, SymMatrix};
use crate::error::{Error, Result};
use crate::math;

/// Frobenius inner product `tr(AB)`.
pub fn inner(a: &SymMatrix, b: &SymMatrix) -> Result<f64> {
    b.check_dim(a.n())?;
    Ok(a.dot(b))
}

/// Orthogonal projector `P_W = Σ w_i w_iᵀ` onto the span of an orthonormal frame.
pub fn plane_projector(n: usize, frame: &[Vec<f64>]) -> Result<SymMatrix> {
    for w in frame {
        if w.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: w.len(),
            });
        }
    }
    let defect = frame_defect(frame);
    if defect > 1e-10 {
        return Err(Error::NotOrthonormal { defect });
    }
    let mut p = SymMatrix::zeros(n);
    for w in frame {
        p.add_outer(1.0, w);
    }
    Ok(p)
}

/// Largest entrywise deviation of the frame's Gram matrix from the identity.
pub fn frame_defect(frame: &[Vec<f64>]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, u) in frame.iter().enumerate() {
        for (j, v) in frame.iter().enumerate() {
            let g = math::dot(u, v) - if i == j { 1.0 } else { 0.0 };
            d = d.max(g.abs());
        }
    }
    d
}

/// A linear subspace of `Sym²(ℝⁿ)` with a Frobenius-orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SymSubspace {
    n: usize,
    basis: Vec<SymMatrix>,
}

impl SymSubspace {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            basis: Vec::new(),
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            n,
            basis: standard_basis(n),
        }
    }

    /// Wraps a basis that is already orthonormal (checked to 1e-10).
    pub fn from_orthonormal(n: usize, basis: Vec<SymMatrix>) -> Result<Self> {
        for b in &basis {
            b.check_dim(n)?;
        }
        let s = Self { n, basis };
        let defect = s.gram_defect();
        if defect > 1e-10 {
            return Err(Error::NotOrthonormal { defect });
        }
        Ok(s)
    }

    /// Gram–Schmidt in the Frobenius metric with one re-orthogonalization
    /// pass. Generators whose residual falls below `1e-9·(1 + |g|)` are dropped.
    pub fn orthonormalize(n: usize, gens: &[SymMatrix]) -> Result<Self> {
        let mut basis: Vec<SymMatrix> = Vec::new();
        for g in gens {
            g.check_dim(n)?;
            if basis.len() == sym_dim(n) {
                break;
            }
            let mut r = g.clone();
            for _ in 0..2 {
                for b in &basis {
                    let c = r.dot(b);
                    r.axpy(-c, b);
                }
            }
            let nr = r.norm();
            if nr >= 1e-9 * (1.0 + g.norm()) {
                basis.push(r.scaled(1.0 / nr));
            }
        }
        Ok(Self { n, basis })
    }

    /// Span of `self ∪ other`.
    pub fn sum(&self, other: &SymSubspace) -> Result<Self> {
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().cloned());
        Self::orthonormalize(self.n, &gens)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SymMatrix] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn gram_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                let g = a.dot(b) - if i == j { 1.0 } else { 0.0 };
                d = d.max(g.abs());
            }
        }
        d
    }

    /// Coordinates `⟨A, B_k⟩` in the stored basis.
    pub fn coords(&self, a: &SymMatrix) -> Vec<f64> {
        self.basis.iter().map(|b| a.dot(b)).collect()
    }

    /// `Σ c_k B_k`.
    pub fn combine(&self, c: &[f64]) -> SymMatrix {
        let mut out = SymMatrix::zeros(self.n);
        for (ck, b) in c.iter().zip(&self.basis) {
            out.axpy(*ck, b);
        }
        out
    }

    /// Orthogonal projection `π(A) = Σ ⟨A, B_k⟩ B_k`.
    pub fn project(&self, a: &SymMatrix) -> SymMatrix {
        assert_eq!(a.n(), self.n, "dimension mismatch in subspace projection");
        self.combine(&self.coords(a))
    }

    pub fn try_project(&self, a: &SymMatrix) -> Result<SymMatrix> {
        a.check_dim(self.n)?;
        Ok(self.project(a))
    }

    /// `‖A − π(A)‖`.
    pub fn residual(&self, a: &SymMatrix) -> f64 {
        (a - &self.project(a)).norm()
    }

    pub fn contains_matrix(&self, a: &SymMatrix, tol: f64) -> bool {
        self.residual(a) <= tol * (1.0 + a.norm())
    }

    /// Orthogonal complement in `Sym²(ℝⁿ)`.
    ///
    /// Built by pivoted Gram–Schmidt over the standard orthonormal basis:
    /// at each step the candidate with the largest residual is taken, which
    /// keeps the result well conditioned and deterministic.
    pub fn complement(&self) -> SymSubspace {
        let n = self.n;
        let target = sym_dim(n) - self.dim();
        let mut cands: Vec<SymMatrix> = standard_basis(n)
            .into_iter()
            .map(|e| &e - &self.project(&e))
            .collect();
        let mut out: Vec<SymMatrix> = Vec::with_capacity(target);
        while out.len() < target {
            let (k, nr) = cands
                .iter()
                .enumerate()
                .map(|(k, c)| (k, c.norm()))
                .fold((0, -1.0), |best, x| if x.1 > best.1 { x } else { best });
            if nr < 1e-12 {
                break;
            }
            let mut b = cands.swap_remove(k).scaled(1.0 / nr);
            for _ in 0..2 {
                for s in self.basis.iter().chain(out.iter()) {
                    let c = b.dot(s);
                    b.axpy(-c, s);
                }
            }
            let nb = b.norm();
            b = b.scaled(1.0 / nb);
            for c in cands.iter_mut() {
                let d = c.dot(&b);
                c.axpy(-d, &b);
            }
            out.push(b);
        }
        SymSubspace { n, basis: out }
    }

    /// Largest residual of a basis element of either space against the other;
    /// zero iff the spans coincide.
    pub fn span_distance(&self, other: &SymSubspace) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        let a = self.basis.iter().map(|b| other.residual(b));
        let b = other.basis.iter().map(|b| self.residual(b));
        a.chain(b).fold(0.0, f64::max)
    }

    pub fn same_span(&self, other: &SymSubspace, tol: f64) -> bool {
        self.span_distance(other) <= tol
    }

    /// Largest `|⟨B_i, C_j⟩|` between the two bases.
    pub fn max_cross_inner(&self, other: &SymSubspace) -> f64 {
        let mut m: f64 = 0.0;
        for a in &self.basis {
            for b in &other.basis {
                m = m.max(a.dot(b).abs());
            }
        }
        m
    }

    /// Image under a linear map applied to every basis element, re-orthonormalized.
    pub fn map(&self, f: impl Fn(&SymMatrix) -> SymMatrix) -> Result<SymSubspace> {
        let gens: Vec<SymMatrix> = self.basis.iter().map(f).collect();
        Self::orthonormalize(self.n, &gens)
    }
}

/// A linear subspace of `ℝⁿ` with an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct VecSubspace {
    n: usize,
    basis: Vec<Vec<f64>>,
}

impl VecSubspace {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            basis: Vec::new(),
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            n,
            basis: (0..n)
                .map(|i| {
                    let mut e = vec![0.0; n];
                    e[i] = 1.0;
                    e
                })
                .collect(),
        }
    }

    /// Gram–Schmidt with re-orthogonalization; near-dependent vectors dropped.
    pub fn orthonormalize(n: usize, gens: &[Vec<f64>]) -> Self {
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for g in gens {
            if basis.len() == n {
                break;
            }
            let mut r = g.clone();
            for _ in 0..2 {
                for b in &basis {
                    let c = math::dot(&r, b);
                    for (x, y) in r.iter_mut().zip(b) {
                        *x -= c * y;
                    }
                }
            }
            let nr = math::norm(&r);
            if nr >= 1e-9 * (1.0 + math::norm(g)) {
                basis.push(r.into_iter().map(|x| x / nr).collect());
            }
        }
        Self { n, basis }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for b in &self.basis {
            let c = math::dot(v, b);
            for (x, y) in out.iter_mut().zip(b) {
                *x += c * y;
            }
        }
        out
    }

    pub fn projector(&self) -> SymMatrix {
        let mut p = SymMatrix::zeros(self.n);
        for b in &self.basis {
            p.add_outer(1.0, b);
        }
        p
    }

    pub fn complement(&self) -> VecSubspace {
        let mut gens = self.basis.clone();
        gens.extend(Self::full(self.n).basis);
        let all = Self::orthonormalize(self.n, &gens);
        VecSubspace {
            n: self.n,
            basis: all.basis[self.dim()..].to_vec(),
        }
    }
}
