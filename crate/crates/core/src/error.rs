use alloc::string::String;

/// Every failure the algebra can report.
///
/// Variants are grouped by the module that raises them; the CLI maps all of
/// them to the "domain error" exit status.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    // field tower
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("multiplicative order of {p} modulo {n} is {order}, expected s = {s}")]
    OrderMismatch { p: u64, n: u64, order: u64, s: u32 },
    #[error("no element of order {n} in F_{q}")]
    NoSuchRoot { n: u64, q: u64 },
    #[error("{n} is not coprime to the characteristic {p}")]
    NotCoprime { n: u64, p: u64 },
    #[error("division by zero")]
    DivisionByZero,

    // linearized polynomials
    #[error("only {found} of {expected} roots lie in the working field")]
    RootsNotRational { found: usize, expected: usize },
    #[error("not a subspace: {0}")]
    NotASubspace(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),

    // invariants, groups, verification
    #[error("problem too large: {0}")]
    TooLarge(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("map is not an invertible F_q-linear map")]
    NotLinear,
    #[error("torus parts are not conjugate under the given element")]
    NotConjugate,

    // series
    #[error("valuation of the zero series")]
    ZeroSeries,
    #[error("denominator is not a unit")]
    NonUnitDenominator,
    #[error("bad residue: {0}")]
    BadResidue(String),
    #[error("exponent {n} is divisible by the characteristic {p}")]
    BadOrder { n: u64, p: u64 },
    #[error("precision loss: {0}")]
    PrecisionLoss(String),

    // restrained actions
    #[error("theta is not injective on H")]
    ThetaNotInjective,
    #[error("series is not of the form x + O(x^2)")]
    NotNormalized,
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("theta(H) differs from the root space of P*")]
    SubspaceMismatch,

    // degeneration
    #[error("neither t-exponent candidate makes the chart maps inverse to each other")]
    RoundtripFailed,
    #[error("equivariance failed: {0}")]
    EquivarianceFailed(String),

    // bounds
    #[error("Riemann-Hurwitz total {0} does not give a non-negative integral genus")]
    NonIntegralGenus(i128),
    #[error("genus {0} is below 2")]
    BadGenus(u64),
    #[error("descriptor is missing {0}")]
    IncompleteDescriptor(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("inconsistent configuration: {0}")]
    Inconsistent(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable name of the variant, used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::OrderMismatch { .. } => "OrderMismatch",
            Error::NoSuchRoot { .. } => "NoSuchRoot",
            Error::NotCoprime { .. } => "NotCoprime",
            Error::DivisionByZero => "DivisionByZero",
            Error::RootsNotRational { .. } => "RootsNotRational",
            Error::NotASubspace(_) => "NotASubspace",
            Error::Degenerate(_) => "Degenerate",
            Error::TooLarge(_) => "TooLarge",
            Error::VerificationFailed(_) => "VerificationFailed",
            Error::NotLinear => "NotLinear",
            Error::NotConjugate => "NotConjugate",
            Error::ZeroSeries => "ZeroSeries",
            Error::NonUnitDenominator => "NonUnitDenominator",
            Error::BadResidue(_) => "BadResidue",
            Error::BadOrder { .. } => "BadOrder",
            Error::PrecisionLoss(_) => "PrecisionLoss",
            Error::ThetaNotInjective => "ThetaNotInjective",
            Error::NotNormalized => "NotNormalized",
            Error::TypeMismatch(_) => "TypeMismatch",
            Error::SubspaceMismatch => "SubspaceMismatch",
            Error::RoundtripFailed => "RoundtripFailed",
            Error::EquivarianceFailed(_) => "EquivarianceFailed",
            Error::NonIntegralGenus(_) => "NonIntegralGenus",
            Error::BadGenus(_) => "BadGenus",
            Error::IncompleteDescriptor(_) => "IncompleteDescriptor",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::Inconsistent(_) => "Inconsistent",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
