use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime in [3, 127]")]
    InvalidModulus(u32),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("residue {value} out of range for p = {p}")]
    ResidueOutOfRange { value: u32, p: u32 },

    #[error("size guard exceeded: {what} needs {size} elements, limit is {limit}")]
    SizeGuard { what: &'static str, size: u64, limit: u64 },

    #[error("generator {index} is linearly dependent on the preceding generators")]
    DependentGenerators { index: usize },

    #[error("generators {first} and {second} do not commute")]
    NonCommuting { first: usize, second: usize },

    #[error("a stabiliser group on {n} qudits needs {n} generators, found {found}")]
    WrongGeneratorCount { n: usize, found: usize },

    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("state is not an eigenvector of the Weyl operator (|<W>| = {magnitude})")]
    NotEigenstate { magnitude: f64 },

    #[error("thresholded Weyl labels do not form a subspace")]
    NotASubspace,

    #[error("subspace is not Lagrangian")]
    NotLagrangian,

    #[error("invalid qudit targets: {0:?}")]
    InvalidTargets(Vec<usize>),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
