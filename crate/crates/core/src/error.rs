use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("no irreducible quadratic found over F_{0}")]
    NoIrreducibleFound(u64),
    #[error("unsupported extension degree {0} (expected 1 or 2)")]
    UnsupportedDegree(u32),
    #[error("leading coefficient is zero")]
    LeadingZero,
    #[error("point ({l}, {m}) is not on the curve")]
    PointNotOnCurve { l: String, m: String },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("search space of {requested} exceeds budget {budget}")]
    BudgetExceeded { requested: u128, budget: u128 },
    #[error("Newton iteration failed to converge at precision {0}")]
    NoConvergence(usize),
    #[error("insufficient precision: need coefficients below t^{needed}, have below t^{available}")]
    InsufficientPrecision { needed: i64, available: i64 },
    #[error("matrix is singular to the available precision")]
    Singular,
    #[error("point {0} is not in E1 (F_y does not vanish)")]
    NotInE1(String),
    #[error("pole bound {0} too small: stabilizer set not closed under multiplication")]
    BoundTooSmall(u32),
    #[error("curve is singular at {0}")]
    SingularPoint(String),
    #[error("stabilizer containment failed on edge {0}")]
    ContainmentFailure(String),
    #[error("isomorphism witness failed: {0}")]
    WitnessFailure(String),
    #[error("conjugation identity failed: {0}")]
    IdentityFailure(String),
    #[error("field with {0} elements is too small (need at least 4)")]
    FieldTooSmall(u64),
    #[error("domain construction failed: {0}")]
    Domain(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn precision(needed: i64, available: i64) -> Self {
        Error::InsufficientPrecision { needed, available }
    }
}
