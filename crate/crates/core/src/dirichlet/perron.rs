//! Perron sweeps: Gauss–Seidel with a per-node threshold update.
//!
//! Two discretizations of `D²u ∈ F = E + 𝒫` are offered.
//!
//! [`Scheme::Cross`] uses the second-difference Hessian directly. With the
//! neighbours held fixed it is `A(t) = A(t₀) − 2(t − t₀)/h² · Id` in the
//! center value `t`, so the update is the largest `t` with `A(t) ∈ F`. Every
//! supported cone satisfies `margin(A − s·Id) = margin(A) − κ s`, which gives
//! the threshold in closed form; bisection on the margin is available as a
//! cross-check. The cross stencil is not monotone in the neighbour values,
//! so for degenerate cones such as `𝒫` the fixed point can fall below
//! subsolutions.
//!
//! [`Scheme::Directional`] tests `D²u − e ⪰ 0` only along the lattice
//! directions `d ∈ {e_i, e_i ± e_j}`. The largest admissible center value is
//! `max_{e ∈ E} min_d [m_d − ½h² dᵀe d]` with `m_d` the mean of the two
//! neighbours along `d`; by LP duality this is `min_w Σ w_d m_d` over the
//! polytope of weights with `Σ w_d = 1` and `Σ w_d ddᵀ ⊥ E`. The polytope's
//! vertices are computed once per cone. The scheme is monotone and exact on
//! edge quadratics, so edge quadratics below the boundary data stay below the
//! solution.

use alloc::vec;
use alloc::vec::Vec;

use super::{hessian_at, hessian_with, GridDomain, GridField, NodeKind};
use crate::cones::{ConeHandle, MarginOptions};
use crate::error::{Error, Result};
use crate::math;
use crate::symspace::{SymMatrix, SymSubspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Directional,
    Cross,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeUpdate {
    /// Closed-form threshold from the shift identity of the margin.
    Shift,
    /// Bracket grown geometrically from the current value, then bisection.
    Bisection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepOrder {
    Lexicographic,
    /// Even-parity nodes first, then odd ones.
    RedBlack,
}

#[derive(Debug, Clone)]
pub struct PerronOptions {
    /// Sweeps stop once the largest update falls below this.
    pub tol: f64,
    pub max_sweeps: usize,
    pub scheme: Scheme,
    /// Node update of the cross scheme.
    pub update: NodeUpdate,
    pub order: SweepOrder,
    /// Starting value at interior nodes; defaults to the boundary minimum.
    pub initial: Option<f64>,
}

impl Default for PerronOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_sweeps: 200_000,
            scheme: Scheme::Directional,
            update: NodeUpdate::Shift,
            order: SweepOrder::Lexicographic,
            initial: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PerronSolution {
    pub field: GridField,
    pub sweeps: usize,
    pub converged: bool,
    /// `(sweep, largest update)` after every sweep.
    pub history: Vec<(usize, f64)>,
}

/// One side of a direction at a node next to a curved boundary.
#[derive(Debug, Clone, Copy)]
enum Arm {
    Node(usize),
    /// Boundary crossed at fraction `frac` of the step, with data `value`.
    Cut {
        value: f64,
        frac: f64,
    },
}

/// Node whose stencil crosses the boundary. The missing neighbour is replaced
/// by the linear extrapolation through the center and the crossing point, so
/// direction `d` contributes `(α_d − β_d t)/h²` with `β_d = 1/s₊ + 1/s₋`
/// (arm fractions `s`, equal to 1 for lattice arms). On a quadratic this is
/// `s₊s₋/2 · h² dᵀ D²u d` after dividing by `β_d`, which sets the edge weights.
#[derive(Debug, Clone)]
struct CutRule {
    arms: Vec<[Arm; 2]>,
    beta: Vec<f64>,
    vertices: Vec<Vec<(usize, f64)>>,
}

/// Directional threshold rule for an edge `E`: vertices of
/// `{w ≥ 0 : Σ w_d = 1, Σ w_d γ_d ddᵀ ⊥ E}` over the lattice directions
/// `d ∈ {e_i, e_i + e_j, e_i − e_j}`, with `γ_d = ½` away from the boundary.
#[derive(Debug, Clone)]
pub struct DirectionalStencil {
    offsets: Vec<isize>,
    vertices: Vec<Vec<(usize, f64)>>,
    cut: Vec<Option<CutRule>>,
}

fn lattice_directions(dom: &GridDomain) -> (Vec<Vec<f64>>, Vec<isize>) {
    let n = dom.n();
    let mut dirs = Vec::new();
    let mut offsets = Vec::new();
    for i in 0..n {
        let mut d = vec![0.0; n];
        d[i] = 1.0;
        dirs.push(d);
        offsets.push(dom.axis_offsets[i].0);
    }
    let mut pair = 0;
    for i in 0..n {
        for j in i + 1..n {
            for (sign, off) in [
                (1.0, dom.pair_offsets[pair][0]),
                (-1.0, dom.pair_offsets[pair][2]),
            ] {
                let mut d = vec![0.0; n];
                d[i] = 1.0;
                d[j] = sign;
                dirs.push(d);
                offsets.push(off);
            }
            pair += 1;
        }
    }
    (dirs, offsets)
}

fn weight_vertices(edge: &SymSubspace, dirs: &[Vec<f64>], gamma: &[f64]) -> Vec<Vec<(usize, f64)>> {
    let cols: Vec<Vec<f64>> = dirs
        .iter()
        .zip(gamma)
        .map(|(d, g)| {
            let mut c: Vec<f64> = edge.basis().iter().map(|e| g * e.quad(d)).collect();
            c.push(1.0);
            c
        })
        .collect();
    let rows = edge.dim() + 1;
    let mut rhs = vec![0.0; rows];
    rhs[rows - 1] = 1.0;
    let mut vertices = Vec::new();
    let mut subset = Vec::new();
    enumerate_vertices(
        &cols,
        &rhs,
        0,
        rows.min(dirs.len()),
        &mut subset,
        &mut vertices,
    );
    vertices
}

impl DirectionalStencil {
    /// Builds the rule for the edge `E` on the domain of `phi`. On a ball the
    /// boundary crossings use `phi`'s boundary function when it has one, and
    /// otherwise the stored boundary-node values.
    pub fn new(edge: &SymSubspace, phi: &GridField) -> Result<Self> {
        let dom = phi.domain();
        let n = dom.n();
        if edge.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: edge.n(),
            });
        }
        let (dirs, offsets) = lattice_directions(dom);
        let vertices = weight_vertices(edge, &dirs, &vec![0.5; dirs.len()]);
        if vertices.is_empty() {
            return Err(Error::Unsupported(
                "edge admits no lattice-direction weights".into(),
            ));
        }
        let mut cut = vec![None; dom.len()];
        if let (Some(data), true) = (
            phi.boundary_fn(),
            matches!(dom.shape(), super::Shape::Ball { .. }),
        ) {
            for &node in dom.interior() {
                let x = dom.coords(node);
                let mut any = false;
                let mut arms = Vec::with_capacity(dirs.len());
                let mut beta = Vec::with_capacity(dirs.len());
                let mut gamma = Vec::with_capacity(dirs.len());
                for (d, &off) in dirs.iter().zip(&offsets) {
                    let mut pair = [Arm::Node(0); 2];
                    let mut b = 2.0;
                    let mut g = 0.5;
                    for (side, sign) in [(0, 1.0), (1, -1.0)] {
                        let o = if side == 0 { off } else { -off };
                        pair[side] = match dom.cut_fraction(node, o) {
                            Some(frac) => {
                                any = true;
                                let p: Vec<f64> = x
                                    .iter()
                                    .zip(d)
                                    .map(|(xi, di)| xi + sign * frac * dom.h() * di)
                                    .collect();
                                b += (1.0 - frac) / frac;
                                g *= frac;
                                Arm::Cut {
                                    value: data.eval(&p),
                                    frac,
                                }
                            }
                            None => Arm::Node((node as isize + o) as usize),
                        };
                    }
                    arms.push(pair);
                    beta.push(b);
                    gamma.push(g);
                }
                if any {
                    let vertices = weight_vertices(edge, &dirs, &gamma);
                    if vertices.is_empty() {
                        return Err(Error::Unsupported(
                            "edge admits no lattice-direction weights at a cut node".into(),
                        ));
                    }
                    cut[node] = Some(CutRule {
                        arms,
                        beta,
                        vertices,
                    });
                }
            }
        }
        Ok(Self {
            offsets,
            vertices,
            cut,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Largest admissible center value given the neighbours.
    fn threshold(&self, values: &[f64], node: usize) -> f64 {
        let i = node as isize;
        if let Some(rule) = &self.cut[node] {
            let q: Vec<f64> = rule
                .arms
                .iter()
                .zip(&rule.beta)
                .map(|(pair, b)| {
                    let alpha: f64 = pair
                        .iter()
                        .map(|arm| match *arm {
                            Arm::Node(j) => values[j],
                            Arm::Cut { value, frac } => value / frac,
                        })
                        .sum();
                    alpha / b
                })
                .collect();
            return min_over(&rule.vertices, &q);
        }
        let means: Vec<f64> = self
            .offsets
            .iter()
            .map(|&o| 0.5 * (values[(i + o) as usize] + values[(i - o) as usize]))
            .collect();
        min_over(&self.vertices, &means)
    }
}

fn min_over(vertices: &[Vec<(usize, f64)>], q: &[f64]) -> f64 {
    vertices
        .iter()
        .map(|v| v.iter().map(|&(d, w)| w * q[d]).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

/// Depth-first enumeration of supports; a support gives a vertex when its
/// columns are independent and the unique solution is positive.
fn enumerate_vertices(
    cols: &[Vec<f64>],
    rhs: &[f64],
    start: usize,
    max_support: usize,
    subset: &mut Vec<usize>,
    out: &mut Vec<Vec<(usize, f64)>>,
) {
    for j in start..cols.len() {
        subset.push(j);
        match solve_support(cols, rhs, subset) {
            Support::Vertex(w) => out.push(subset.iter().copied().zip(w).collect()),
            Support::Dependent => {
                subset.pop();
                continue;
            }
            Support::Other => {}
        }
        if subset.len() < max_support {
            enumerate_vertices(cols, rhs, j + 1, max_support, subset, out);
        }
        subset.pop();
    }
}

enum Support {
    Vertex(Vec<f64>),
    /// Columns are linearly dependent (so is every superset).
    Dependent,
    /// Independent but without a positive exact solution.
    Other,
}

fn solve_support(cols: &[Vec<f64>], rhs: &[f64], subset: &[usize]) -> Support {
    let r = subset.len();
    // normal equations GᵀG w = Gᵀb
    let mut g = vec![vec![0.0; r + 1]; r];
    for (a, &ja) in subset.iter().enumerate() {
        for (b, &jb) in subset.iter().enumerate() {
            g[a][b] = math::dot(&cols[ja], &cols[jb]);
        }
        g[a][r] = math::dot(&cols[ja], rhs);
    }
    for c in 0..r {
        let p = (c..r)
            .max_by(|&x, &y| g[x][c].abs().total_cmp(&g[y][c].abs()))
            .unwrap();
        if g[p][c].abs() < 1e-10 {
            return Support::Dependent;
        }
        g.swap(c, p);
        for row in 0..r {
            if row != c {
                let f = g[row][c] / g[c][c];
                for k in c..=r {
                    g[row][k] -= f * g[c][k];
                }
            }
        }
    }
    let w: Vec<f64> = (0..r).map(|a| g[a][r] / g[a][a]).collect();
    let residual: f64 = (0..rhs.len())
        .map(|row| {
            let v: f64 = subset
                .iter()
                .zip(&w)
                .map(|(&j, wj)| cols[j][row] * wj)
                .sum::<f64>()
                - rhs[row];
            v * v
        })
        .sum();
    if residual < 1e-18 && w.iter().all(|&x| x > 1e-12) {
        Support::Vertex(w)
    } else {
        Support::Other
    }
}

/// Cut arms of the cross stencil on a ball: `(offset, φ(p), s)` per arm whose
/// neighbour lies outside, with the ghost value `φ(p)/s − t(1 − s)/s`.
struct CrossCuts {
    arms: Vec<Vec<(isize, f64, f64)>>,
}

impl CrossCuts {
    fn new(phi: &GridField) -> Option<Self> {
        let dom = phi.domain();
        let data = phi.boundary_fn()?;
        if !matches!(dom.shape(), super::Shape::Ball { .. }) {
            return None;
        }
        let steps = dom.stencil_steps();
        let mut arms = vec![Vec::new(); dom.len()];
        for &node in dom.interior() {
            let x = dom.coords(node);
            for (off, d) in &steps {
                if let Some(s) = dom.cut_fraction(node, *off) {
                    let p: Vec<f64> = x
                        .iter()
                        .zip(d)
                        .map(|(xi, di)| xi + s * dom.h() * di)
                        .collect();
                    arms[node].push((*off, data.eval(&p), s));
                }
            }
        }
        Some(Self { arms })
    }

    fn at(&self, node: usize) -> Option<&[(isize, f64, f64)]> {
        self.arms
            .get(node)
            .map(|v| v.as_slice())
            .filter(|v| !v.is_empty())
    }
}

fn cross_hessian(
    dom: &GridDomain,
    values: &[f64],
    node: usize,
    t: f64,
    cuts: Option<&[(isize, f64, f64)]>,
) -> SymMatrix {
    let i = node as isize;
    match cuts {
        None => hessian_at(dom, values, node, t),
        Some(arms) => hessian_with(dom, t, |off| match arms.iter().find(|a| a.0 == off) {
            Some(&(_, v, s)) => v / s - t * (1.0 - s) / s,
            None => values[(i + off) as usize],
        }),
    }
}

/// Margin evaluation with per-node warm starts for edge cones.
struct NodeMargin<'a> {
    cone: &'a ConeHandle,
    warm: Vec<Option<Vec<f64>>>,
}

impl NodeMargin<'_> {
    fn eval(&mut self, node: usize, a: &SymMatrix) -> Result<f64> {
        match self.cone {
            ConeHandle::Halfspace(c) => Ok(a.dot(c.normal())),
            ConeHandle::Geometric(g) => Ok(g.margin(a)?.0),
            ConeHandle::Edge(c) => {
                let mut opts = MarginOptions::precise(1e-11 * (1.0 + a.norm()));
                opts.warm_start = self.warm[node].take();
                let sol = c.solve(a, &opts)?;
                let m = sol.lower;
                self.warm[node] = Some(sol.coords);
                Ok(m)
            }
        }
    }
}

/// Solves the discrete Dirichlet problem for `F` with boundary values taken
/// from `phi` (interior values of `phi` are ignored).
pub fn perron_solve(
    cone: &ConeHandle,
    phi: &GridField,
    opts: &PerronOptions,
) -> Result<PerronSolution> {
    let dom = phi.domain().clone();
    if cone.n() != dom.n() {
        return Err(Error::DimensionMismatch {
            expected: dom.n(),
            found: cone.n(),
        });
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let start = opts.initial.unwrap_or_else(|| phi.boundary_min());
    let mut values = phi.values().to_vec();
    for &i in dom.interior() {
        values[i] = start;
    }
    let order: Vec<usize> = match opts.order {
        SweepOrder::Lexicographic => dom.interior().to_vec(),
        SweepOrder::RedBlack => {
            let parity = |i: usize| dom.multi_index(i).iter().sum::<usize>() % 2;
            let mut o: Vec<usize> = dom
                .interior()
                .iter()
                .copied()
                .filter(|&i| parity(i) == 0)
                .collect();
            o.extend(dom.interior().iter().copied().filter(|&i| parity(i) == 1));
            o
        }
    };
    let stencil = match (opts.scheme, cone) {
        (Scheme::Directional, ConeHandle::Geometric(_)) => {
            return Err(Error::Unsupported(
                "the directional scheme needs an edge or half-space cone".into(),
            ))
        }
        (Scheme::Directional, _) => Some(DirectionalStencil::new(&cone.edge_of()?, phi)?),
        (Scheme::Cross, _) => None,
    };
    let cuts = if opts.scheme == Scheme::Cross {
        CrossCuts::new(phi)
    } else {
        None
    };
    let kappa = cone.shift_rate();
    let h2 = dom.h() * dom.h();
    let warm_len = if cone.as_edge().is_some() && stencil.is_none() {
        dom.len()
    } else {
        0
    };
    let mut margin = NodeMargin {
        cone,
        warm: vec![None; warm_len],
    };
    let mut history = Vec::new();
    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < opts.max_sweeps {
        sweeps += 1;
        let mut largest = 0.0f64;
        for &node in &order {
            let t0 = values[node];
            let arms = cuts.as_ref().and_then(|c| c.at(node));
            let t = match (&stencil, opts.update) {
                (Some(st), _) => st.threshold(&values, node),
                // ghosts break the shift identity, so cut nodes always bisect
                (None, NodeUpdate::Shift) if arms.is_none() => {
                    let a = hessian_at(&dom, &values, node, t0);
                    t0 + h2 * margin.eval(node, &a)? / (2.0 * kappa)
                }
                (None, _) => bisect(&mut margin, &dom, &values, node, arms, opts.tol * h2)?,
            };
            largest = largest.max((t - t0).abs());
            values[node] = t;
        }
        history.push((sweeps, largest));
        if largest < opts.tol {
            converged = true;
            break;
        }
    }
    Ok(PerronSolution {
        field: GridField::from_values(dom, values)?,
        sweeps,
        converged,
        history,
    })
}

fn bisect(
    margin: &mut NodeMargin,
    dom: &GridDomain,
    values: &[f64],
    node: usize,
    arms: Option<&[(isize, f64, f64)]>,
    width: f64,
) -> Result<f64> {
    debug_assert_eq!(dom.kind(node), NodeKind::Interior);
    let t0 = values[node];
    let mut f =
        |t: f64| -> Result<f64> { margin.eval(node, &cross_hessian(dom, values, node, t, arms)) };
    let nb = dom.stencil_neighbors(node);
    let (nmin, nmax) = nb
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &i| {
            (a.min(values[i]), b.max(values[i]))
        });
    let mut w = (2.0 * (nmax - nmin)).max(width).max(1e-12);
    let (mut lo, mut hi);
    if f(t0)? >= 0.0 {
        lo = t0;
        hi = t0 + w;
        let mut tries = 0;
        while f(hi)? >= 0.0 {
            lo = hi;
            w *= 2.0;
            hi = t0 + w;
            tries += 1;
            if tries > 40 {
                return Err(Error::BracketFailure { node });
            }
        }
    } else {
        hi = t0;
        lo = t0 - w;
        let mut tries = 0;
        while f(lo)? < 0.0 {
            hi = lo;
            w *= 2.0;
            lo = t0 - w;
            tries += 1;
            if tries > 40 {
                return Err(Error::BracketFailure { node });
            }
        }
    }
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if f(mid)? >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
