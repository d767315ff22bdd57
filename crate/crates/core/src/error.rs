use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (asymmetry {asymmetry:e}, allowed {allowed:e})")]
    NotHermitian { asymmetry: f64, allowed: f64 },

    #[error("non-finite value in {0}")]
    NotFinite(&'static str),

    #[error("matrix is not positive semidefinite (eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("null state: normalization {norm_sq:e} below threshold")]
    NullState { norm_sq: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("singular qubit encoding: 1 - eta^2 = {gap:e}")]
    SingularEncoding { gap: f64 },

    #[error("negative decay time {0}")]
    NegativeTime(f64),

    #[error("{what} = {value} out of range")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("non-positive argument {0}")]
    NonPositive(f64),

    #[error("Fock truncation at {dim} levels insufficient (tail weight {tail:e})")]
    TruncationInsufficient { dim: usize, tail: f64 },

    #[error("state leaks outside the encoded subspace (defect {defect:e})")]
    ProjectionDefect { defect: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
