use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("polynomials live in different rings")]
    RingMismatch,
    #[error("target degree {target} is below the polynomial degree {degree}")]
    DegreeTooLow { target: u32, degree: u32 },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("ring has no homogenizing variable")]
    NoHomogenizingVariable,
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolutionError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("generator {0} is not homogeneous")]
    NonHomogeneous(usize),
    #[error("the ideal is the unit ideal")]
    UnitIdeal,
    #[error("malformed resolution data: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("invalid bound parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisionError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error("invalid division problem: {0}")]
    InvalidProblem(String),
    #[error("ansatz space has {unknowns} unknowns, above the cap of {cap}")]
    TooManyUnknowns { unknowns: usize, cap: usize },
    #[error("no certificate found; escalation stopped at rho = {last_rho} (mu0 = {last_mu0})")]
    EscalationExhausted { last_rho: u32, last_mu0: u32 },
    #[error("solver produced a certificate that failed verification")]
    VerificationFailed,
}
