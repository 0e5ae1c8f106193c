use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::math;

/// Largest ambient dimension handled by the dense routines.
pub const MAX_DIM: usize = 16;

/// A real symmetric `n × n` matrix, stored densely in row-major order.
///
/// Every constructor symmetrizes its input, so `a[i][j] == a[j][i]` holds
/// bit-for-bit on every value of this type.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    a: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            a: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = 1.0;
        }
        m
    }

    pub fn diag(d: &[f64]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n);
        for (i, &v) in d.iter().enumerate() {
            m.a[i * n + i] = v;
        }
        m
    }

    /// Builds from row-major data, replacing it by `(A + Aᵀ)/2`.
    pub fn from_row_major(n: usize, data: &[f64]) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.a[i * n + j] = 0.5 * (data[i * n + j] + data[j * n + i]);
            }
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::from_row_major(n, &data)
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = if i == j {
                    f(i, i)
                } else {
                    0.5 * (f(i, j) + f(j, i))
                };
                m.set(i, j, v);
            }
        }
        m
    }

    /// Orthogonal projector `e eᵀ / |e|²` onto the line through `e`.
    pub fn outer(v: &[f64]) -> Self {
        let mut m = Self::zeros(v.len());
        m.add_outer(1.0, v);
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    /// Sets entries `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
        self.a[j * self.n + i] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.a
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.a[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        if self.n != n {
            Err(Error::DimensionMismatch {
                expected: n,
                found: self.n,
            })
        } else {
            Ok(())
        }
    }

    /// `self += s · v vᵀ`
    pub fn add_outer(&mut self, s: f64, v: &[f64]) {
        let n = self.n;
        for i in 0..n {
            let si = s * v[i];
            for j in 0..n {
                self.a[i * n + j] += si * v[j];
            }
        }
    }

    /// `self += s · other`
    pub fn axpy(&mut self, s: f64, other: &SymMatrix) {
        debug_assert_eq!(self.n, other.n);
        for (x, y) in self.a.iter_mut().zip(&other.a) {
            *x += s * y;
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            n: self.n,
            a: self.a.iter().map(|x| s * x).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.a[i * self.n + i]).sum()
    }

    /// Frobenius inner product `tr(AB)`; panics on dimension mismatch.
    #[inline]
    pub fn dot(&self, other: &SymMatrix) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch in Frobenius product");
        self.a.iter().zip(&other.a).map(|(x, y)| x * y).sum()
    }

    pub fn norm(&self) -> f64 {
        math::sqrt(self.dot(self))
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Quadratic form `vᵀ A v`.
    pub fn quad(&self, v: &[f64]) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for i in 0..n {
            let mut r = 0.0;
            for j in 0..n {
                r += self.a[i * n + j] * v[j];
            }
            s += v[i] * r;
        }
        s
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|i| (0..n).map(|j| self.a[i * n + j] * v[j]).sum())
            .collect()
    }

    pub fn to_square(&self) -> Square {
        Square {
            n: self.n,
            a: self.a.clone(),
        }
    }

    /// Isometric coordinates: diagonal entries, then `√2·a_ij` for `i < j`.
    pub fn svec(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            out.push(self.get(i, i));
        }
        for i in 0..n {
            for j in i + 1..n {
                out.push(core::f64::consts::SQRT_2 * self.get(i, j));
            }
        }
        out
    }

    pub fn from_svec(n: usize, v: &[f64]) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = v[i];
        }
        let mut k = n;
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, v[k] / core::f64::consts::SQRT_2);
                k += 1;
            }
        }
        m
    }

    /// Block-diagonal embedding `A ⊕ 0` into dimension `m ≥ n`.
    pub fn zero_extend(&self, m: usize) -> Self {
        let mut out = Self::zeros(m);
        for i in 0..self.n {
            for j in 0..self.n {
                out.a[i * m + j] = self.get(i, j);
            }
        }
        out
    }
}

/// Dimension of `Sym²(ℝⁿ)`.
pub const fn sym_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Orthonormal basis of `Sym²(ℝⁿ)`: `E_ii`, then `(E_ij + E_ji)/√2`.
pub fn standard_basis(n: usize) -> Vec<SymMatrix> {
    (0..sym_dim(n))
        .map(|k| {
            let mut v = vec![0.0; sym_dim(n)];
            v[k] = 1.0;
            SymMatrix::from_svec(n, &v)
        })
        .collect()
}

impl Add for &SymMatrix {
    type Output = SymMatrix;
    fn add(self, rhs: &SymMatrix) -> SymMatrix {
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }
}

impl Sub for &SymMatrix {
    type Output = SymMatrix;
    fn sub(self, rhs: &SymMatrix) -> SymMatrix {
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }
}

impl Add for SymMatrix {
    type Output = SymMatrix;
    fn add(mut self, rhs: SymMatrix) -> SymMatrix {
        self.axpy(1.0, &rhs);
        self
    }
}

impl Sub for SymMatrix {
    type Output = SymMatrix;
    fn sub(mut self, rhs: SymMatrix) -> SymMatrix {
        self.axpy(-1.0, &rhs);
        self
    }
}

impl AddAssign<&SymMatrix> for SymMatrix {
    fn add_assign(&mut self, rhs: &SymMatrix) {
        self.axpy(1.0, rhs);
    }
}

impl SubAssign<&SymMatrix> for SymMatrix {
    fn sub_assign(&mut self, rhs: &SymMatrix) {
        self.axpy(-1.0, rhs);
    }
}

impl Mul<f64> for &SymMatrix {
    type Output = SymMatrix;
    fn mul(self, s: f64) -> SymMatrix {
        self.scaled(s)
    }
}

impl Mul<f64> for SymMatrix {
    type Output = SymMatrix;
    fn mul(self, s: f64) -> SymMatrix {
        self.scaled(s)
    }
}

impl Neg for &SymMatrix {
    type Output = SymMatrix;
    fn neg(self) -> SymMatrix {
        self.scaled(-1.0)
    }
}

impl Neg for SymMatrix {
    type Output = SymMatrix;
    fn neg(self) -> SymMatrix {
        self.scaled(-1.0)
    }
}

/// A general real square matrix (row-major). Used for complex and
/// quaternionic structures, group elements and eigenvector frames.
#[derive(Debug, Clone, PartialEq)]
pub struct Square {
    n: usize,
    a: Vec<f64>,
}

impl Square {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            a: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        Ok(Self { n, a: data })
    }

    /// Matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(cols: &[Vec<f64>]) -> Self {
        let n = cols.len();
        let mut m = Self::zeros(n);
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                m.a[i * n + j] = c[i];
            }
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.a
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.a[i * self.n + j]).collect()
    }

    pub fn transpose(&self) -> Square {
        let n = self.n;
        let mut t = Square::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t.a[j * n + i] = self.a[i * n + j];
            }
        }
        t
    }

    pub fn mul(&self, other: &Square) -> Square {
        let n = self.n;
        assert_eq!(n, other.n);
        let mut out = Square::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.a[i * n + k];
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.a[i * n + j] += aik * other.a[k * n + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|i| (0..n).map(|j| self.a[i * n + j] * v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &Square) -> Square {
        Square {
            n: self.n,
            a: self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, other: &Square) -> Square {
        Square {
            n: self.n,
            a: self.a.iter().zip(&other.a).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn scaled(&self, s: f64) -> Square {
        Square {
            n: self.n,
            a: self.a.iter().map(|x| s * x).collect(),
        }
    }

    pub fn norm(&self) -> f64 {
        math::sqrt(self.a.iter().map(|x| x * x).sum())
    }

    /// `M A Mᵀ`, symmetrized.
    pub fn congruence(&self, a: &SymMatrix) -> SymMatrix {
        let n = self.n;
        let mut ma = Square::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let mik = self.a[i * n + k];
                if mik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    ma.a[i * n + j] += mik * a.get(k, j);
                }
            }
        }
        SymMatrix::from_fn(n, |i, j| {
            (0..n).map(|k| ma.a[i * n + k] * self.a[j * n + k]).sum()
        })
    }

    /// `Mᵀ A M`, the pull-back `g*A` of a quadratic form.
    pub fn pullback(&self, a: &SymMatrix) -> SymMatrix {
        self.transpose().congruence(a)
    }

    /// `X A X` for a skew `X` with `X² = −Id`: equals `−X A Xᵀ`.
    pub fn sandwich(&self, a: &SymMatrix) -> SymMatrix {
        -self.congruence(a)
    }

    pub fn symmetric_part(&self) -> SymMatrix {
        SymMatrix::from_fn(self.n, |i, j| self.get(i, j))
    }

    /// Skew part `(M − Mᵀ)/2`.
    pub fn skew_part(&self) -> Square {
        let n = self.n;
        let mut s = Square::zeros(n);
        for i in 0..n {
            for j in 0..n {
                s.a[i * n + j] = 0.5 * (self.get(i, j) - self.get(j, i));
            }
        }
        s
    }

    /// `‖MᵀM − Id‖_F`.
    pub fn orthogonality_defect(&self) -> f64 {
        self.transpose()
            .mul(self)
            .sub(&Square::identity(self.n))
            .norm()
    }

    /// Solves `M x = b` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        let mut m = self.a.clone();
        let mut x = b.to_vec();
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&p, &q| m[p * n + col].abs().total_cmp(&m[q * n + col].abs()))
                .unwrap_or(col);
            if m[piv * n + col].abs() < 1e-300 {
                return Err(Error::InvalidInput("singular matrix in solve".into()));
            }
            if piv != col {
                for k in 0..n {
                    m.swap(piv * n + k, col * n + k);
                }
                x.swap(piv, col);
            }
            let d = m[col * n + col];
            for r in col + 1..n {
                let f = m[r * n + col] / d;
                if f == 0.0 {
                    continue;
                }
                for k in col..n {
                    m[r * n + k] -= f * m[col * n + k];
                }
                x[r] -= f * x[col];
            }
        }
        for r in (0..n).rev() {
            let mut s = x[r];
            for k in r + 1..n {
                s -= m[r * n + k] * x[k];
            }
            x[r] = s / m[r * n + r];
        }
        Ok(x)
    }

    /// Cayley transform `(Id − X/2)⁻¹ (Id + X/2)`; orthogonal when `X` is skew.
    pub fn cayley(&self) -> Result<Square> {
        let n = self.n;
        let half = self.scaled(0.5);
        let lhs = Square::identity(n).sub(&half);
        let rhs = Square::identity(n).add(&half);
        let mut out = Square::zeros(n);
        for j in 0..n {
            let col = lhs.solve(&rhs.column(j))?;
            for i in 0..n {
                out.a[i * n + j] = col[i];
            }
        }
        Ok(out)
    }
}
