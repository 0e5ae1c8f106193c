use alloc::vec::Vec;

use super::quaternion::{
    complex_structure, quaternion_triple, standard_vectors, structured_gram_schmidt, QuatAxis,
};
use super::{GroupKind, GroupTag};
use crate::math;
use crate::rng::{self, Rng};
use crate::symspace::Square;

/// A compact matrix group acting on `ℝᴺ`, with a sampler.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixGroup {
    /// `O(N)`.
    Orthogonal(usize),
    /// `U(n)` for the standard complex structure on `ℝ^{2n}`.
    Unitary(usize),
    /// `U(2n)` for the complex structure given by one quaternionic axis on `ℝ^{4n}`.
    QuatUnitary(usize, QuatAxis),
    /// `Sp(n)`: commutes with `I, J, K`.
    Sp(usize),
    /// `Sp(n)·Sp(1)`.
    SpSp1(usize),
    /// `Sp(n)·S¹` with the circle `cos θ + sin θ X` for the given axis `X`.
    SpS1(usize, QuatAxis),
    /// `Sp(n)` times the unit quaternions `{±1, ±i, ±j, ±k}`.
    SpQ8(usize),
}

impl MatrixGroup {
    pub fn ambient(&self) -> usize {
        match *self {
            MatrixGroup::Orthogonal(n) => n,
            MatrixGroup::Unitary(n) => 2 * n,
            MatrixGroup::QuatUnitary(n, _)
            | MatrixGroup::Sp(n)
            | MatrixGroup::SpSp1(n)
            | MatrixGroup::SpS1(n, _)
            | MatrixGroup::SpQ8(n) => 4 * n,
        }
    }

    /// The group a tag names: `Sp(n)·S¹` is taken with the `I` circle.
    pub fn of_tag(tag: GroupTag) -> Self {
        let n = tag.coords();
        match tag.kind() {
            GroupKind::On => MatrixGroup::Orthogonal(n),
            GroupKind::Un => MatrixGroup::Unitary(n),
            GroupKind::SpnSp1 => MatrixGroup::SpSp1(n),
            GroupKind::SpnS1 => MatrixGroup::SpS1(n, QuatAxis::I),
        }
    }

    pub fn label(&self) -> alloc::string::String {
        use alloc::format;
        match *self {
            MatrixGroup::Orthogonal(n) => format!("O({n})"),
            MatrixGroup::Unitary(n) => format!("U({n})"),
            MatrixGroup::QuatUnitary(n, a) => format!("U_{}({})", a.name(), 2 * n),
            MatrixGroup::Sp(n) => format!("Sp({n})"),
            MatrixGroup::SpSp1(n) => format!("Sp({n})·Sp(1)"),
            MatrixGroup::SpS1(n, a) => format!("Sp({n})·S¹_{}", a.name()),
            MatrixGroup::SpQ8(n) => format!("Sp({n})·Q8"),
        }
    }

    pub fn sample(&self, rng: &mut Rng) -> Square {
        match *self {
            MatrixGroup::Orthogonal(n) => random_orthogonal(rng, n),
            MatrixGroup::Unitary(n) => random_unitary(rng, &complex_structure(n)),
            MatrixGroup::QuatUnitary(n, a) => random_unitary(rng, quaternion_triple(n).axis(a)),
            MatrixGroup::Sp(n) => random_symplectic(rng, n),
            MatrixGroup::SpSp1(n) => {
                let g = random_symplectic(rng, n);
                let q = rng::unit_vec(rng, 4);
                g.mul(&quaternion_triple(n).right_scalar(q[0], q[1], q[2], q[3]))
            }
            MatrixGroup::SpS1(n, a) => {
                let g = random_symplectic(rng, n);
                let theta = 2.0 * core::f64::consts::PI * rng::uniform(rng);
                let q = quaternion_triple(n);
                let r = Square::identity(4 * n)
                    .scaled(math::cos(theta))
                    .add(&q.axis(a).scaled(math::sin(theta)));
                g.mul(&r)
            }
            MatrixGroup::SpQ8(n) => {
                let g = random_symplectic(rng, n);
                let q = quaternion_triple(n);
                let pick = (rng::uniform(rng) * 8.0) as usize % 8;
                let sign = if pick >= 4 { -1.0 } else { 1.0 };
                let r = match pick % 4 {
                    0 => Square::identity(4 * n),
                    1 => q.i.clone(),
                    2 => q.j.clone(),
                    _ => q.k.clone(),
                };
                g.mul(&r.scaled(sign))
            }
        }
    }
}

/// A sample from the group a tag names (see [`MatrixGroup::of_tag`]).
pub fn sample_group_element(g: GroupTag, seed: u64) -> Square {
    MatrixGroup::of_tag(g).sample(&mut rng::seeded(seed))
}

fn gaussian_frame(rng: &mut Rng, structures: &[&Square], d: usize, want: usize) -> Vec<Vec<f64>> {
    loop {
        let gens: Vec<Vec<f64>> = (0..want).map(|_| rng::gaussian_vec(rng, d)).collect();
        let f = structured_gram_schmidt(structures, &gens, want);
        if f.len() == want {
            return f;
        }
    }
}

fn random_orthogonal(rng: &mut Rng, n: usize) -> Square {
    Square::from_columns(&gaussian_frame(rng, &[], n, n))
}

/// Maps a reference `X`-unitary basis `f_k, X f_k` onto a random one `u_k, X u_k`.
fn random_unitary(rng: &mut Rng, x: &Square) -> Square {
    let d = x.n();
    let u = gaussian_frame(rng, &[x], d, d / 2);
    let f = structured_gram_schmidt(&[x], &standard_vectors(d), d / 2);
    let mut g = Square::zeros(d);
    for (uk, fk) in u.iter().zip(&f) {
        let xu = x.mul_vec(uk);
        let xf = x.mul_vec(fk);
        for i in 0..d {
            for j in 0..d {
                g.set(i, j, g.get(i, j) + uk[i] * fk[j] + xu[i] * xf[j]);
            }
        }
    }
    g
}

/// Realified `Sp(n)`: columns `(u, Iu, Ju, Ku)` for an `ℍ`-orthonormal set `u_ℓ`,
/// matching the standard blocks `(e_{4ℓ}, I e_{4ℓ}, J e_{4ℓ}, K e_{4ℓ})`.
fn random_symplectic(rng: &mut Rng, n: usize) -> Square {
    let q = quaternion_triple(n);
    let u = gaussian_frame(rng, &[&q.i, &q.j, &q.k], 4 * n, n);
    let mut cols = Vec::with_capacity(4 * n);
    for ul in &u {
        let orbit = q.orbit(ul);
        cols.extend(orbit);
    }
    Square::from_columns(&cols)
}
