//! Seeded pseudo-random sources. There is no global randomness anywhere in
//! the crate: every sampler receives a seed or an explicit generator.

use alloc::vec::Vec;
use rand::{Rng as _, SeedableRng};
use rand_distr::StandardNormal;

use crate::symspace::SymMatrix;

pub type Rng = rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// Derives an independent stream for partition `index` of a seeded job.
pub fn substream(seed: u64, index: u64) -> Rng {
    let mut r = Rng::seed_from_u64(seed);
    r.set_stream(index.wrapping_add(1));
    r
}

/// A seed for partition `index` of a seeded job.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    substream(seed, index).random::<u64>()
}

pub fn gaussian(rng: &mut Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn uniform(rng: &mut Rng) -> f64 {
    rng.random::<f64>()
}

pub fn gaussian_vec(rng: &mut Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| gaussian(rng)).collect()
}

pub fn unit_vec(rng: &mut Rng, n: usize) -> Vec<f64> {
    loop {
        let v = gaussian_vec(rng, n);
        let nv = crate::math::norm(&v);
        if nv > 1e-8 {
            return v.into_iter().map(|x| x / nv).collect();
        }
    }
}

/// Symmetric matrix with independent standard normal entries on and above the diagonal.
pub fn gaussian_sym(rng: &mut Rng, n: usize) -> SymMatrix {
    let mut m = SymMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            m.set(i, j, gaussian(rng));
        }
    }
    m
}

/// Random positive semidefinite matrix of the given rank (sum of rank-one Gaussian terms).
pub fn random_psd(rng: &mut Rng, n: usize, rank: usize) -> SymMatrix {
    let mut m = SymMatrix::zeros(n);
    for _ in 0..rank {
        let v = gaussian_vec(rng, n);
        m.add_outer(1.0, &v);
    }
    m
}
