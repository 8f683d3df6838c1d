use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("variable index {index} out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("monomial {divisor} does not divide {dividend}")]
    NotDivisible { dividend: String, divisor: String },

    #[error("exponent overflow")]
    ExponentOverflow,

    #[error("ideal is not of Borel type: (I : x{index}^inf) != (I : (x1..x{index})^inf)")]
    NotBorelType { index: usize },

    #[error("ideal is not strongly stable")]
    NotStronglyStable,

    #[error("operation undefined for the unit ideal")]
    UnitIdeal,

    #[error("operation undefined for the zero ideal")]
    ZeroIdeal,

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("value not representable in GF({p}): {value}")]
    NotRepresentable { p: u64, value: String },

    #[error("subspace is not contained in the cycle space")]
    NotASubspace,

    #[error("element {0} lies in the ideal and is zero in the quotient")]
    ZeroElement(String),

    #[error("chain is not a cycle")]
    NotACycle,

    #[error("chain is not multigraded")]
    NotMultigraded,

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("layered monomial basis inapplicable: exponent {alpha} at layer {layer} is not below p = {p} (the digit bound is necessary: x1x2 e1^e2 is not a cycle for (x1,x2)^4)")]
    DigitBound { layer: usize, alpha: u32, p: u64 },

    #[error("ideal does not have the required shape: {0}")]
    Shape(String),

    #[error("cycle splits into shorter cycles (sign pattern violated at term {0})")]
    DecomposableCycle(usize),

    #[error("no reduction step applies: {0}")]
    ReductionFailed(String),

    #[error("internal verification failed: {0}")]
    Verification(String),

    #[error("{line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
