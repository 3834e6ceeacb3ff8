use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not skew-symmetric (max |A + Aᵀ| = {asymmetry:e})")]
    NotSkewSymmetric { asymmetry: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-orthogonality {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("canonical form residual {residual:e} exceeds tolerance {tolerance:e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },

    #[error("transform is not orthogonal (max |WWᵀ - I| = {deviation:e})")]
    NotOrthogonal { deviation: f64 },

    #[error("tracked determinant {tracked} disagrees with evaluated determinant {evaluated}")]
    DeterminantMismatch { tracked: f64, evaluated: f64 },

    #[error("no zero mode: lowest energy {eps1:e} is not below {tolerance:e}")]
    NoZeroMode { eps1: f64, tolerance: f64 },

    #[error("coupling constant vanishes; degenerate perturbation theory does not apply")]
    ZeroCoupling,

    #[error("no bias voltage left after clamping to the chain gap {gap:e}")]
    EmptySweep { gap: f64 },

    #[error("Fock space for {n_sites} sites exceeds the limit of {max} sites")]
    TooManySites { n_sites: usize, max: usize },

    #[error("at grid cell (delta = {delta}, mu = {mu}): {source}")]
    AtGridCell {
        delta: f64,
        mu: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for failures of the numerical machinery, as opposed to bad input or
    /// results that are empty by construction.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NoConvergence { .. }
            | Error::ResidualTooLarge { .. }
            | Error::NotOrthogonal { .. }
            | Error::DeterminantMismatch { .. } => true,
            Error::AtGridCell { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    /// True when the input was valid but the requested quantity does not exist.
    pub fn is_inapplicable(&self) -> bool {
        match self {
            Error::NoZeroMode { .. } | Error::ZeroCoupling | Error::EmptySweep { .. } => true,
            Error::AtGridCell { source, .. } => source.is_inapplicable(),
            _ => false,
        }
    }
}
