use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max off-symmetry {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("eigensolver failed to converge")]
    NumericalFailure,
    #[error("argument outside the function's domain: {0}")]
    DomainError(String),
    #[error("temperature T = 0 is not admissible")]
    ZeroTemperature,
    #[error("exponent range overflows floating point")]
    OverflowGuard,
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("Tsallis index q = {0} is not supported (need q > 0, q != 1)")]
    UnsupportedQ(f64),
    #[error("state lacks full support (eigenvalue {0:e})")]
    SupportDeficient(f64),
    #[error("Bloch vector norm {0} exceeds 1")]
    BlochNormExceeded(f64),
    #[error("invalid Gaussian kernel parameters: {0}")]
    InvalidGaussian(String),
    #[error("covariance violates the uncertainty bound (det = {0})")]
    UnphysicalCovariance(f64),
    #[error("quadratic form is not positive hyperbolic (Omega_eff^2 = {0})")]
    HyperbolicDomain(f64),
    #[error("partition function diverges: {0}")]
    DivergentPartition(String),
    #[error("beta = {0} must be positive for an unbounded spectrum")]
    NegativeBeta(f64),
    #[error("Fock truncation unstable: relative change {change:e} at n_max = {n_max}")]
    TruncationUnstable { n_max: usize, change: f64 },
    #[error("quadrature did not stabilise after {nodes} nodes")]
    QuadratureUnstable { nodes: usize },
    #[error("bracket [{0}, {1}] does not contain an interior minimum")]
    BracketError(f64, f64),
    #[error("invalid grid specification: {0}")]
    InvalidGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Rejects `T = 0` and non-finite temperatures, returning `beta = 1/T`.
pub(crate) fn inverse_temperature(temperature: f64) -> Result<f64> {
    if temperature == 0.0 {
        return Err(Error::ZeroTemperature);
    }
    if !temperature.is_finite() {
        return Err(Error::DomainError(format!("temperature {temperature}")));
    }
    Ok(1.0 / temperature)
}
