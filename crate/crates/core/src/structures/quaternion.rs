use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::symspace::Square;

/// The standard complex structure on `ℝ^{2n}`: coordinate `ℓ` occupies
/// slots `2ℓ, 2ℓ+1` and `I e_{2ℓ} = e_{2ℓ+1}`, `I e_{2ℓ+1} = −e_{2ℓ}`.
pub fn complex_structure(n: usize) -> Square {
    let mut m = Square::zeros(2 * n);
    for l in 0..n {
        m.set(2 * l + 1, 2 * l, 1.0);
        m.set(2 * l, 2 * l + 1, -1.0);
    }
    m
}

/// One of the three imaginary axes of the right quaternionic structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuatAxis {
    I,
    J,
    K,
}

impl QuatAxis {
    pub const ALL: [QuatAxis; 3] = [QuatAxis::I, QuatAxis::J, QuatAxis::K];

    pub fn name(self) -> &'static str {
        match self {
            QuatAxis::I => "I",
            QuatAxis::J => "J",
            QuatAxis::K => "K",
        }
    }
}

/// Right multiplications by `i, j, k` on `ℍⁿ ≅ ℝ^{4n}`, as real matrices.
///
/// Quaternion coordinate `ℓ` occupies slots `4ℓ..4ℓ+3` as `(a, b, c, d)`.
/// Under column-vector action `J·I = K`, i.e. applying `I` then `J` equals `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuaternionTriple {
    pub i: Square,
    pub j: Square,
    pub k: Square,
}

// Images of the four block basis vectors, as (target slot, sign).
const I_MAP: [(usize, f64); 4] = [(1, 1.0), (0, -1.0), (3, -1.0), (2, 1.0)];
const J_MAP: [(usize, f64); 4] = [(2, 1.0), (3, 1.0), (0, -1.0), (1, -1.0)];
const K_MAP: [(usize, f64); 4] = [(3, 1.0), (2, -1.0), (1, 1.0), (0, -1.0)];

fn block_structure(n: usize, map: &[(usize, f64); 4]) -> Square {
    let mut m = Square::zeros(4 * n);
    for l in 0..n {
        for (src, &(dst, sign)) in map.iter().enumerate() {
            m.set(4 * l + dst, 4 * l + src, sign);
        }
    }
    m
}

pub fn quaternion_triple(n: usize) -> QuaternionTriple {
    QuaternionTriple {
        i: block_structure(n, &I_MAP),
        j: block_structure(n, &J_MAP),
        k: block_structure(n, &K_MAP),
    }
}

impl QuaternionTriple {
    pub fn axis(&self, a: QuatAxis) -> &Square {
        match a {
            QuatAxis::I => &self.i,
            QuatAxis::J => &self.j,
            QuatAxis::K => &self.k,
        }
    }

    pub fn dim(&self) -> usize {
        self.i.n()
    }

    /// Right multiplication by the quaternion `a + bi + cj + dk`.
    pub fn right_scalar(&self, a: f64, b: f64, c: f64, d: f64) -> Square {
        Square::identity(self.dim())
            .scaled(a)
            .add(&self.i.scaled(b))
            .add(&self.j.scaled(c))
            .add(&self.k.scaled(d))
    }

    /// `(e, Ie, Je, Ke)`.
    pub fn orbit(&self, e: &[f64]) -> [Vec<f64>; 4] {
        [
            e.to_vec(),
            self.i.mul_vec(e),
            self.j.mul_vec(e),
            self.k.mul_vec(e),
        ]
    }
}

fn subtract_projection(r: &mut [f64], b: &[f64]) {
    let c = math::dot(r, b);
    for (x, y) in r.iter_mut().zip(b) {
        *x -= c * y;
    }
}

/// Gram–Schmidt over the skew field generated by the given structures:
/// each accepted vector `u` is orthogonal to `s u_j` for every earlier `u_j`
/// and every `s` in `{Id} ∪ structures`. Vectors whose residual drops
/// below `1e-8` relative are skipped.
pub fn structured_gram_schmidt(
    structures: &[&Square],
    gens: &[Vec<f64>],
    want: usize,
) -> Vec<Vec<f64>> {
    let mut spanned: Vec<Vec<f64>> = Vec::new();
    let mut out = Vec::new();
    for g in gens {
        if out.len() == want {
            break;
        }
        let mut r = g.clone();
        for _ in 0..2 {
            for b in &spanned {
                subtract_projection(&mut r, b);
            }
        }
        let nr = math::norm(&r);
        if nr < 1e-8 * (1.0 + math::norm(g)) {
            continue;
        }
        let u: Vec<f64> = r.iter().map(|x| x / nr).collect();
        spanned.push(u.clone());
        for s in structures {
            let mut su = s.mul_vec(&u);
            for _ in 0..2 {
                for b in &spanned {
                    subtract_projection(&mut su, b);
                }
            }
            let ns = math::norm(&su);
            if ns > 1e-8 {
                spanned.push(su.into_iter().map(|x| x / ns).collect());
            }
        }
        out.push(u);
    }
    out
}

/// Vectors `e_0, …, e_{d−1}` of `ℝᵈ`.
pub fn standard_vectors(d: usize) -> Vec<Vec<f64>> {
    (0..d)
        .map(|i| {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            e
        })
        .collect()
}
