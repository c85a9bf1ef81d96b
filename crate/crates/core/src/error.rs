use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(i64),
    #[error("prime {0} is below 5; traces are only defined for p >= 5")]
    PrimeTooSmall(u64),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("curve ({r}, {s}) is not minimal; apply star_map first")]
    NonMinimal { r: i64, s: i64 },
    #[error("curve ({r}, {s}) is singular")]
    Singular { r: i64, s: i64 },
    #[error("numerical drift {residual:e} in character-sum trace for ({r}, {s}) mod {p}")]
    NumericalDrift { r: i64, s: i64, p: u64, residual: f64 },
    #[error("quadrature failure: error estimate {estimate:e} exceeds target {target:e}")]
    QuadratureFailure { estimate: f64, target: f64 },
    #[error("empty family")]
    EmptyFamily,
    #[error("gcd({d}, {n}) > 1")]
    NotCoprime { d: i64, n: i64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("identity violated: residual {residual:e} >= {limit:e}")]
    IdentityViolated { residual: f64, limit: f64 },
    #[error("curve data line {line}: {message}")]
    CurveData { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
