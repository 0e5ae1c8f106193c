//! Dense linear algebra on `Sym²(ℝⁿ)` with the Frobenius inner product
//! `⟨A, B⟩ = tr(AB)`.

mod eigen;
mod matrix;
mod subspace;
mod svd;

pub use eigen::{eigh, eigvalsh, min_eig, Spectrum};
pub use matrix::{standard_basis, sym_dim, Square, SymMatrix, MAX_DIM};
pub use subspace::{frame_defect, inner, plane_projector, SymSubspace, VecSubspace};
pub use svd::StreamingQr;

/// Subspace of traceless matrices.
pub fn traceless(n: usize) -> SymSubspace {
    identity_line(n).complement()
}

/// The line `ℝ·Id`, with basis `Id/√n`.
pub fn identity_line(n: usize) -> SymSubspace {
    let b = SymMatrix::identity(n).scaled(1.0 / crate::math::sqrt(n as f64));
    SymSubspace::from_orthonormal(n, alloc::vec![b]).expect("unit identity")
}

#[cfg(test)]
mod tests;
