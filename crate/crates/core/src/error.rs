use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("({p}, {q}) is not a primitive vector")]
    InvalidVector { p: BigInt, q: BigInt },

    #[error("matrix has determinant {det}, expected 1")]
    NotSl2 { det: BigInt },

    #[error("matrix has determinant {det}, expected +1 or -1")]
    NotUnimodular { det: BigInt },

    #[error("matrix is not a symplectic transvection")]
    NotATransvection,

    #[error("no transvection factorization of length {n}: length must be a positive multiple of 12")]
    NotRealizable { n: i64 },

    #[error("move index {index} out of range for a tuple of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("ordered product of the tuple is not the identity")]
    ProductNotIdentity,

    #[error("polynomial is not expressible in the given norm form")]
    NotExpressible,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("no assignment found: {0}")]
    NoAssignmentFound(String),
}

pub type Result<T> = std::result::Result<T, Error>;
