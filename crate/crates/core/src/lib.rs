//! Convex cone subequations `F ⊂ Sym²(ℝⁿ)`.
//!
//! The crate is `no_std` (it needs `alloc`) and carries no IO. It provides:
//!
//! - [`symspace`]: dense Frobenius geometry on symmetric matrices, eigen
//!   decompositions and subspaces of `Sym²(ℝⁿ)`.
//! - [`structures`]: complex and quaternionic structures as real matrices,
//!   group-invariant decompositions, plane families and group samplers.
//! - [`cones`]: edge, geometric and half-space cones with membership, edge,
//!   span, polar and dual oracles, basic-edge tests and minimality checks.
//! - [`edgefuncs`]: edge quadratics, the "sub the edge functions" test and
//!   refutation witnesses.
//! - [`dirichlet`]: grids, discrete Hessians, Perron sweeps and the
//!   edge-quadratic envelope computed by linear programming.
//! - [`classify`]: enumeration of invariant basic edges and sampled
//!   invariance checks.
//!
//! Every randomized routine takes an explicit seed.

#![cfg_attr(not(any(test, feature = "std")), no_std)]
#![allow(clippy::needless_range_loop)]
#![allow(clippy::too_many_arguments)]

extern crate alloc;

mod error;
pub(crate) mod math;
pub mod rng;

pub mod classify;
pub mod cones;
pub mod dirichlet;
pub mod edgefuncs;
pub mod lp;
pub(crate) mod optim;
pub mod structures;
pub mod symspace;

pub use error::{Error, Result};
pub use symspace::{Spectrum, Square, SymMatrix, SymSubspace, VecSubspace};
