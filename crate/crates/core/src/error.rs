use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by the library. Each variant names the module condition that failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("numfield: minimal polynomial must have degree at least 1")]
    DegreeZero,
    #[error("numfield: minimal polynomial is not monic (leading coefficient {0})")]
    NotMonic(BigInt),
    #[error("numfield: minimal polynomial is not squarefree")]
    NotSquarefree,
    #[error("numfield: operands belong to different fields")]
    FieldMismatch,
    #[error("numfield: element is a zero divisor")]
    ZeroDivisor,
    #[error("numfield: division by zero")]
    Zero,

    #[error("padic: {0} is not prime")]
    NotPrime(u64),
    #[error("padic: {0} divides the discriminant")]
    BadPrime(u64),
    #[error("padic: element is not {0}-integral")]
    NotPIntegral(u64),
    #[error("padic: operands belong to different residue rings")]
    RingMismatch,

    #[error("series: constant term must vanish")]
    NonzeroConstant,
    #[error("series: bad constant term ({0})")]
    BadConstantTerm(&'static str),
    #[error("series: inner series of a composition has a constant term")]
    InnerHasConstant,
    #[error("series: linear coefficient is not a unit")]
    NonUnitLinearTerm,
    #[error("series: constant term is not a unit")]
    NonUnitConstant,
    #[error("series: coordinate change does not have linear part sign * identity")]
    BadLinearPart,
    #[error("series: variable count mismatch ({0} vs {1})")]
    VariableMismatch(usize, usize),

    #[error("sfunc: series has a nonzero constant term")]
    ConstantTermNonzero,
    #[error("sfunc: generator is not an algebraic integer")]
    NotIntegral,

    #[error("framing: kappa is not symmetric")]
    NotSymmetric,
    #[error("framing: kappa has dimension {kappa} but series has {nvars} variables")]
    DimensionMismatch { kappa: usize, nvars: usize },

    #[error("catalog: descent failed: {0}")]
    DescentFailed(String),
    #[error("catalog: bad conductor: {0}")]
    BadConductor(String),
    #[error("catalog: polynomial constant coefficient must be 1")]
    BadConstant,
    #[error("catalog: prime {0} is too small (need p > 3)")]
    SmallPrime(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
