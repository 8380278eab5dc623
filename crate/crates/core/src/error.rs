use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("operator is not Hermitian (max deviation {deviation:e})")]
    NonHermitian { deviation: f64 },
    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("zero or non-finite vector cannot be normalized")]
    NullVector,
    #[error("dimension must be at least 1")]
    EmptyDimension,
    #[error("basis is not orthonormal (max Gram deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },
    #[error("invalid postselection: {0}")]
    InvalidPostselection(String),
    #[error("postselection probability {prob:e} below threshold")]
    VanishingPostselection { prob: f64 },
    #[error("pre- and postselected states are orthogonal (overlap {overlap:e})")]
    OrthogonalPrePost { overlap: f64 },
    #[error("<A> = {mean:e} vanishes: anomalous regime, no finite optimal weak value")]
    ZeroMean { mean: f64 },
    #[error("tensor dimension {sub_dim}^{n} exceeds the cap of {cap}")]
    DimensionCapExceeded { n: usize, sub_dim: usize, cap: usize },
    #[error("degenerate spectrum: lambda = {lambda}, lambda_tilde = {lambda_tilde}")]
    DegenerateSpectrum { lambda: f64, lambda_tilde: f64 },
    #[error("cos(alpha) = {cos_alpha:e} vanishes, limit undefined")]
    AlphaSingular { cos_alpha: f64 },
    #[error("information-cost denominator is zero")]
    ZeroCostDenominator,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
