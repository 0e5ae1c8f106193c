//! Grid Dirichlet problems for cone subequations.
//!
//! Domains are boxes or balls sampled on a regular lattice. Interior nodes
//! carry the full second-difference stencil (axis and diagonal neighbours);
//! boundary nodes are the lattice points outside the interior that the
//! stencil touches. On a ball, a boundary node takes its boundary value at
//! the radial projection of the node onto the sphere; the directional scheme
//! instead evaluates the boundary function where each stencil arm crosses the
//! sphere when the field carries one.

mod envelope;
mod perron;

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

pub use envelope::{edge_envelope, envelope_report, EnvelopeReport, EnvelopeSample, EnvelopeValue};
pub use perron::{
    perron_solve, DirectionalStencil, NodeUpdate, PerronOptions, PerronSolution, Scheme, SweepOrder,
};

use crate::error::{Error, Result};
use crate::math;
use crate::symspace::SymMatrix;

/// Largest supported grid dimension.
pub const MAX_GRID_DIM: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// The cube `[lo, hi]ⁿ`.
    Box {
        lo: f64,
        hi: f64,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Interior,
    Boundary,
    /// Lattice point outside the node set.
    Exterior,
}

/// A lattice over a box or ball with interior/boundary masks.
#[derive(Debug, Clone)]
pub struct GridDomain {
    n: usize,
    shape: Shape,
    h: f64,
    origin: Vec<f64>,
    dims: Vec<usize>,
    strides: Vec<usize>,
    kind: Vec<NodeKind>,
    interior: Vec<usize>,
    boundary: Vec<usize>,
    /// Linear-index offsets of the stencil: `+e_i, −e_i` per axis, then
    /// `(+e_i+e_j, −e_i−e_j, +e_i−e_j, −e_i+e_j)` per pair `i < j`.
    pub(crate) axis_offsets: Vec<(isize, isize)>,
    pair_offsets: Vec<[isize; 4]>,
}

fn check_grid_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_GRID_DIM {
        return Err(Error::UnsupportedDimension(n));
    }
    Ok(())
}

impl GridDomain {
    /// `[lo, hi]ⁿ` with `cells` intervals per axis.
    pub fn cube(n: usize, lo: f64, hi: f64, cells: usize) -> Result<Self> {
        check_grid_dim(n)?;
        if cells < 2 || !(hi > lo) {
            return Err(Error::InvalidInput(
                "box needs hi > lo and at least two cells".into(),
            ));
        }
        let h = (hi - lo) / cells as f64;
        let dims = vec![cells + 1; n];
        let mut d = Self::lattice(n, Shape::Box { lo, hi }, h, vec![lo; n], dims);
        let total = d.kind.len();
        for idx in 0..total {
            let m = d.multi_index(idx);
            let inside = m.iter().all(|&k| k > 0 && k < cells);
            d.kind[idx] = if inside {
                NodeKind::Interior
            } else {
                NodeKind::Boundary
            };
        }
        d.finish();
        Ok(d)
    }

    /// Ball of the given radius with lattice spacing `h`, lattice aligned with the center.
    pub fn ball(center: &[f64], radius: f64, h: f64) -> Result<Self> {
        let n = center.len();
        check_grid_dim(n)?;
        if !(radius > 0.0) || !(h > 0.0) || radius / h > 512.0 {
            return Err(Error::InvalidInput(
                "ball needs radius > 0 and a moderate number of cells".into(),
            ));
        }
        let k = math::ceil(radius / h) as usize + 1;
        let dims = vec![2 * k + 1; n];
        let origin: Vec<f64> = center.iter().map(|c| c - k as f64 * h).collect();
        let mut d = Self::lattice(
            n,
            Shape::Ball {
                center: center.to_vec(),
                radius,
            },
            h,
            origin,
            dims,
        );
        let total = d.kind.len();
        let r2 = radius * radius * (1.0 - 1e-12);
        for idx in 0..total {
            let x = d.coords(idx);
            let dist2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
            if dist2 < r2 {
                d.kind[idx] = NodeKind::Interior;
            }
        }
        for idx in 0..total {
            if d.kind[idx] != NodeKind::Interior {
                continue;
            }
            for nb in d.stencil_neighbors(idx) {
                if d.kind[nb] == NodeKind::Exterior {
                    d.kind[nb] = NodeKind::Boundary;
                }
            }
        }
        d.finish();
        Ok(d)
    }

    fn lattice(n: usize, shape: Shape, h: f64, origin: Vec<f64>, dims: Vec<usize>) -> Self {
        let mut strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let total: usize = dims.iter().product();
        let axis_offsets = (0..n)
            .map(|i| (strides[i] as isize, -(strides[i] as isize)))
            .collect();
        let mut pair_offsets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let (si, sj) = (strides[i] as isize, strides[j] as isize);
                pair_offsets.push([si + sj, -si - sj, si - sj, -si + sj]);
            }
        }
        Self {
            n,
            shape,
            h,
            origin,
            dims,
            strides,
            kind: vec![NodeKind::Exterior; total],
            interior: Vec::new(),
            boundary: Vec::new(),
            axis_offsets,
            pair_offsets,
        }
    }

    fn finish(&mut self) {
        self.interior = (0..self.kind.len())
            .filter(|&i| self.kind[i] == NodeKind::Interior)
            .collect();
        self.boundary = (0..self.kind.len())
            .filter(|&i| self.kind[i] == NodeKind::Boundary)
            .collect();
    }

    fn stencil_neighbors(&self, idx: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(2 * self.n * self.n);
        let i = idx as isize;
        for &(p, m) in &self.axis_offsets {
            out.push((i + p) as usize);
            out.push((i + m) as usize);
        }
        for o in &self.pair_offsets {
            out.extend(o.iter().map(|&d| (i + d) as usize));
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of lattice points, including exterior ones.
    pub fn len(&self) -> usize {
        self.kind.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kind.is_empty()
    }

    pub fn kind(&self, idx: usize) -> NodeKind {
        self.kind[idx]
    }

    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn multi_index(&self, idx: usize) -> Vec<usize> {
        self.strides
            .iter()
            .zip(&self.dims)
            .map(|(s, d)| (idx / s) % d)
            .collect()
    }

    pub fn index_of(&self, multi: &[usize]) -> Option<usize> {
        if multi.len() != self.n || multi.iter().zip(&self.dims).any(|(m, d)| m >= d) {
            return None;
        }
        Some(multi.iter().zip(&self.strides).map(|(m, s)| m * s).sum())
    }

    pub fn coords(&self, idx: usize) -> Vec<f64> {
        self.multi_index(idx)
            .iter()
            .zip(&self.origin)
            .map(|(&m, o)| o + m as f64 * self.h)
            .collect()
    }

    /// Lattice node nearest to `x`, if inside the lattice.
    pub fn nearest(&self, x: &[f64]) -> Option<usize> {
        if x.len() != self.n {
            return None;
        }
        let mut multi = Vec::with_capacity(self.n);
        for (xi, o) in x.iter().zip(&self.origin) {
            let k = math::round((xi - o) / self.h);
            if k < 0.0 {
                return None;
            }
            multi.push(k as usize);
        }
        self.index_of(&multi)
    }

    /// Fraction `s ∈ (0, 1]` of the step from interior node `idx` towards
    /// `idx + offset` at which the segment leaves the domain; `None` when the
    /// neighbour is interior or the domain is a box (whose boundary nodes lie
    /// on `∂Ω`).
    pub fn cut_fraction(&self, idx: usize, offset: isize) -> Option<f64> {
        let nb = (idx as isize + offset) as usize;
        if self.kind[nb] != NodeKind::Boundary {
            return None;
        }
        let Shape::Ball { center, radius } = &self.shape else {
            return None;
        };
        let x = self.coords(idx);
        let y = self.coords(nb);
        let d: Vec<f64> = x.iter().zip(&y).map(|(a, b)| b - a).collect();
        let rel: Vec<f64> = x.iter().zip(center).map(|(a, c)| a - c).collect();
        let a = math::dot(&d, &d);
        let b = math::dot(&rel, &d);
        let c = math::dot(&rel, &rel) - radius * radius;
        let s = (-b + math::sqrt((b * b - a * c).max(0.0))) / a;
        Some(s.clamp(1e-6, 1.0))
    }

    /// Stencil steps as `(linear offset, direction in units of h)`.
    pub(crate) fn stencil_steps(&self) -> Vec<(isize, Vec<f64>)> {
        let n = self.n;
        let unit = |i: usize, s: f64| {
            let mut d = vec![0.0; n];
            d[i] = s;
            d
        };
        let mut out = Vec::new();
        for (i, &(p, m)) in self.axis_offsets.iter().enumerate() {
            out.push((p, unit(i, 1.0)));
            out.push((m, unit(i, -1.0)));
        }
        let mut pair = 0;
        for i in 0..n {
            for j in i + 1..n {
                let o = self.pair_offsets[pair];
                for (k, (si, sj)) in [(1.0, 1.0), (-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0)]
                    .into_iter()
                    .enumerate()
                {
                    let mut d = unit(i, si);
                    d[j] = sj;
                    out.push((o[k], d));
                }
                pair += 1;
            }
        }
        out
    }

    /// Interior node of a ball whose stencil reaches a boundary node. Its
    /// lattice second differences mix in values taken on the sphere at a
    /// different distance than `h`.
    pub fn is_cut_node(&self, idx: usize) -> bool {
        self.kind[idx] == NodeKind::Interior
            && self
                .stencil_steps()
                .iter()
                .any(|(off, _)| self.cut_fraction(idx, *off).is_some())
    }

    /// Points where stencil arms from interior nodes cross the sphere of a
    /// ball (see [`GridDomain::cut_fraction`]); empty for a box.
    pub fn crossing_points(&self) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        if !matches!(self.shape, Shape::Ball { .. }) {
            return out;
        }
        let steps = self.stencil_steps();
        for &i in &self.interior {
            let x = self.coords(i);
            for (off, d) in &steps {
                if let Some(s) = self.cut_fraction(i, *off) {
                    out.push(
                        x.iter()
                            .zip(d)
                            .map(|(xi, di)| xi + s * self.h * di)
                            .collect(),
                    );
                }
            }
        }
        out
    }

    /// Point of `∂Ω` where the boundary value of a boundary node is taken.
    pub fn boundary_point(&self, idx: usize) -> Vec<f64> {
        let x = self.coords(idx);
        match &self.shape {
            Shape::Box { .. } => x,
            Shape::Ball { center, radius } => {
                let d: Vec<f64> = x.iter().zip(center).map(|(a, b)| a - b).collect();
                let r = math::norm(&d);
                d.iter()
                    .zip(center)
                    .map(|(di, c)| c + radius * di / r)
                    .collect()
            }
        }
    }
}

/// Scalar values on the lattice of a [`GridDomain`]; exterior points hold 0.
///
/// A field built from a [`BoundaryFn`] keeps it, so solvers can evaluate the
/// data where the stencil crosses a curved boundary.
#[derive(Debug, Clone)]
pub struct GridField {
    domain: Arc<GridDomain>,
    values: Vec<f64>,
    data: Option<Arc<BoundaryFn>>,
}

impl GridField {
    pub fn constant(domain: Arc<GridDomain>, value: f64) -> Self {
        let values = (0..domain.len())
            .map(|i| {
                if domain.kind(i) == NodeKind::Exterior {
                    0.0
                } else {
                    value
                }
            })
            .collect();
        Self {
            domain,
            values,
            data: None,
        }
    }

    /// Evaluates `f` at every node.
    pub fn from_fn(domain: Arc<GridDomain>, f: impl Fn(&[f64]) -> f64) -> Self {
        let values = (0..domain.len())
            .map(|i| {
                if domain.kind(i) == NodeKind::Exterior {
                    0.0
                } else {
                    f(&domain.coords(i))
                }
            })
            .collect();
        Self {
            domain,
            values,
            data: None,
        }
    }

    /// Boundary nodes take `φ` at their boundary point; interior nodes `fill`.
    pub fn with_boundary(domain: Arc<GridDomain>, phi: &BoundaryFn, fill: f64) -> Result<Self> {
        phi.check_dim(domain.n())?;
        let values = (0..domain.len())
            .map(|i| match domain.kind(i) {
                NodeKind::Interior => fill,
                NodeKind::Boundary => phi.eval(&domain.boundary_point(i)),
                NodeKind::Exterior => 0.0,
            })
            .collect();
        Ok(Self {
            domain,
            values,
            data: Some(Arc::new(phi.clone())),
        })
    }

    pub fn from_values(domain: Arc<GridDomain>, values: Vec<f64>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::DimensionMismatch {
                expected: domain.len(),
                found: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("grid values must be finite".into()));
        }
        Ok(Self {
            domain,
            values,
            data: None,
        })
    }

    pub fn domain(&self) -> &Arc<GridDomain> {
        &self.domain
    }

    /// The boundary function the field was built from, if any.
    pub fn boundary_fn(&self) -> Option<&BoundaryFn> {
        self.data.as_deref()
    }

    /// Same values with the boundary function attached.
    pub fn with_data(mut self, phi: &BoundaryFn) -> Result<Self> {
        phi.check_dim(self.domain.n())?;
        self.data = Some(Arc::new(phi.clone()));
        Ok(self)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, idx: usize) -> f64 {
        self.values[idx]
    }

    pub fn set(&mut self, idx: usize, v: f64) {
        self.values[idx] = v;
    }

    /// Largest `|u − v|` over the node set.
    pub fn max_diff(&self, other: &GridField) -> f64 {
        (0..self.values.len())
            .filter(|&i| self.domain.kind(i) != NodeKind::Exterior)
            .map(|i| (self.values[i] - other.values[i]).abs())
            .fold(0.0, f64::max)
    }

    pub fn boundary_min(&self) -> f64 {
        self.domain
            .boundary
            .iter()
            .map(|&i| self.values[i])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn boundary_max(&self) -> f64 {
        self.domain
            .boundary
            .iter()
            .map(|&i| self.values[i])
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Second-difference Hessian at an interior node: central differences on
/// the diagonal and the four-point cross stencil off the diagonal.
pub fn discrete_hessian(u: &GridField, idx: usize) -> Result<SymMatrix> {
    let d = &u.domain;
    if d.kind(idx) != NodeKind::Interior {
        return Err(Error::InvalidInput(
            "discrete Hessian needs an interior node".into(),
        ));
    }
    Ok(hessian_at(d, &u.values, idx, u.values[idx]))
}

/// Hessian at `idx` with the center value replaced by `center`.
pub(crate) fn hessian_at(d: &GridDomain, values: &[f64], idx: usize, center: f64) -> SymMatrix {
    let i = idx as isize;
    hessian_with(d, center, |off| values[(i + off) as usize])
}

/// Hessian with neighbour values supplied by `at(offset)`.
pub(crate) fn hessian_with(d: &GridDomain, center: f64, at: impl Fn(isize) -> f64) -> SymMatrix {
    let n = d.n;
    let h2 = d.h * d.h;
    let mut a = SymMatrix::zeros(n);
    for (k, &(p, m)) in d.axis_offsets.iter().enumerate() {
        a.set(k, k, (at(p) + at(m) - 2.0 * center) / h2);
    }
    let mut pair = 0;
    for k in 0..n {
        for l in k + 1..n {
            let o = d.pair_offsets[pair];
            a.set(
                k,
                l,
                (at(o[0]) + at(o[1]) - at(o[2]) - at(o[3])) / (4.0 * h2),
            );
            pair += 1;
        }
    }
    a
}

/// Built-in boundary data.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryFn {
    /// `c + ⟨b, x⟩`.
    Affine { c: f64, b: Vec<f64> },
    /// `c + ⟨b, x⟩ + ½⟨Ax, x⟩`.
    Quadratic { c: f64, b: Vec<f64>, a: SymMatrix },
    /// Pointwise maximum of affine functions `(c, b)`.
    MaxAffine(Vec<(f64, Vec<f64>)>),
    /// `amplitude · sin(⟨k, x⟩ + phase)`.
    Trig {
        amplitude: f64,
        k: Vec<f64>,
        phase: f64,
    },
}

impl BoundaryFn {
    /// The harmonic quadratic `x₁² − x₂²`.
    pub fn saddle(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::UnsupportedDimension(n));
        }
        let mut d = vec![0.0; n];
        d[0] = 2.0;
        d[1] = -2.0;
        Ok(BoundaryFn::Quadratic {
            c: 0.0,
            b: vec![0.0; n],
            a: SymMatrix::diag(&d),
        })
    }

    /// Ambient dimension the data is written for.
    pub fn dim(&self) -> Option<usize> {
        match self {
            BoundaryFn::Affine { b, .. } | BoundaryFn::Quadratic { b, .. } => Some(b.len()),
            BoundaryFn::MaxAffine(parts) => parts.first().map(|p| p.1.len()),
            BoundaryFn::Trig { k, .. } => Some(k.len()),
        }
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        let ok = match self {
            BoundaryFn::Quadratic { b, a, .. } => b.len() == n && a.n() == n,
            BoundaryFn::MaxAffine(parts) => {
                !parts.is_empty() && parts.iter().all(|p| p.1.len() == n)
            }
            _ => self.dim() == Some(n),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: n,
                found: self.dim().unwrap_or(0),
            })
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            BoundaryFn::Affine { c, b } => c + math::dot(b, x),
            BoundaryFn::Quadratic { c, b, a } => c + math::dot(b, x) + 0.5 * a.quad(x),
            BoundaryFn::MaxAffine(parts) => parts
                .iter()
                .map(|(c, b)| c + math::dot(b, x))
                .fold(f64::NEG_INFINITY, f64::max),
            BoundaryFn::Trig {
                amplitude,
                k,
                phase,
            } => amplitude * math::sin(math::dot(k, x) + phase),
        }
    }
}

#[cfg(test)]
mod tests;
