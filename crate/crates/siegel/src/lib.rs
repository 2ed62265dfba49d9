//! Siegel functions `g_(r1,r2)^(12 M n)` at the CM points `θ1 = (-1+√-d1)/2`
//! and `θ2 = √-d2`.
//!
//! Indices are kept as integer numerators over a fixed denominator `M`, so
//! all the index algebra (sign identification, matrix and Artin actions,
//! conjugation) is exact. Only [`eval_g12`] touches floating point.

mod eval;
mod index;
mod orbit;

pub use eval::{eval_g12, truncation_index, CmPoint, EVAL_ERROR_BITS};
pub use index::{artin_matrix, conjugate_index, Mat2, SiegelIndex};
pub use orbit::{matrix_group, orbit_product, OrbitProduct};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SiegelError {
    #[error("index {0} is integral; the Siegel function is undefined there")]
    IntegralIndex(String),
    #[error("matrix {0:?} is singular mod {1}")]
    Singular([[i64; 2]; 2], u64),
    #[error("invalid CM point: {0}")]
    CmPoint(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Numerics(#[from] rcf_numerics::NumericsError),
}
