use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at evaluation point")]
    Pole,
    #[error("zero argument: {0}")]
    ZeroArgument(&'static str),
    #[error("depth bound {0} exceeded: form appears isotropic on support")]
    DepthExceeded(u32),
    #[error("not a Lizorkin function of second kind (integral is nonzero)")]
    NotInPhi,
    #[error("not in the Lizorkin space Psi (value at the origin is nonzero)")]
    NotInPsi,
    #[error("ramified rho-factor sign unresolved for p = {0}; run the oracle calibration")]
    RhoSignUnresolved(u64),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
