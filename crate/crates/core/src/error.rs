use alloc::string::String;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {0} outside the supported range")]
    UnsupportedDimension(usize),
    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NonConvergence { sweeps: usize },
    #[error("frame is not orthonormal (defect {defect:.3e})")]
    NotOrthonormal { defect: f64 },
    #[error("vector is not a unit vector (norm {norm})")]
    NotUnit { norm: f64 },
    #[error("unknown component `{0}`")]
    UnknownComponent(String),
    #[error("eigenvalue pairing failed: gap {gap:.3e} exceeds {tol:.3e}")]
    PairingFailure { gap: f64, tol: f64 },
    #[error("matrix is not in the required subspace (residual {residual:.3e})")]
    NotInSubspace { residual: f64 },
    #[error(
        "subspace is not a basic edge (E contains a PSD element with λ_min = {lambda_min:.3e})"
    )]
    NotBasic { lambda_min: f64 },
    #[error(
        "basic-edge dichotomy indeterminate: edge side {edge_side:.3e}, span side {span_side:.3e}"
    )]
    Indeterminate { edge_side: f64, span_side: f64 },
    #[error("sampled rank unstable: {first} vs {second}")]
    UnstableRank { first: usize, second: usize },
    #[error("support direction indeterminate (residual {residual:.3e} in the dead band)")]
    IndeterminateDirection { residual: f64 },
    #[error("threshold bracket could not be found at node {node}")]
    BracketFailure { node: usize },
    #[error("envelope {envelope:.6e} exceeds Perron value {perron:.6e} at node {node}")]
    OrderingViolation {
        node: usize,
        envelope: f64,
        perron: f64,
    },
    #[error("linear program failed: {0}")]
    LinearProgram(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = core::result::Result<T, Error>;
