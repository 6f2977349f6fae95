//! Exact scalars, graded polynomials and Gröbner-basis machinery.

mod groebner;
pub mod linalg;
mod parse;
mod poly;
mod scalar;

use thiserror::Error;

pub use groebner::{
    buchberger, express_in, intersect, jacobian_ideal, normal_form, quotient_dimension, saturate,
    saturate_ideal, GroebnerBasis, IdealBasis, QuotientDimension,
};
pub use parse::parse_poly;
pub use poly::{mono_divides, mono_mul, Mono, MonomialOrder, Poly, Ring, Var};
pub use scalar::{Field, RatFn, Scalar, PARAM};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgError {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("characteristic mismatch: {0} vs {1}")]
    CharacteristicMismatch(u64, u64),
    #[error("invalid or reserved variable name '{0}'")]
    BadVariableName(String),
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("Laurent variable '{0}' must be cleared before Gröbner computations")]
    LaurentVariablePresent(String),
    #[error("generators live in different ambient rings")]
    MixedAmbient,
    #[error("saturation by the zero element")]
    ZeroDivisorInput,
    #[error("weight slice {0} is not finite-dimensional (non-positive or Laurent weights)")]
    InfiniteSlice(i64),
    #[error("quotient is infinite-dimensional and no weight window was supplied")]
    WindowRequired,
}
