//! Exact arithmetic in the imaginary biquadratic field `K = Q(√-d1, √-d2)`,
//! its three quadratic subfields, and the fundamental unit `ε0` of the real one.
//!
//! Elements of `O_K` are stored by half-coordinates: `(a, b, c, d)` stands for
//! `(a + b√-d1 + c√-d2 + d√(d1 d2))/2` where `a ≡ b` and `c ≡ d` mod 2.

mod element;
mod quadratic;
mod tower;
mod units;

pub use element::{Biquad, OkElement};
pub use quadratic::{class_number_imaginary, fundamental_unit, is_squarefree, reduced_forms, QuadInt, QuadraticField, ThetaKind, Unit};
pub use tower::{biquad_class_number, extra_unit, make_tower, tabulated_h3, tabulated_q, FieldTower, TowerOptions};
pub use units::{is_prime, unit_exponents, UnitExponents};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldsError {
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("internal error: {0}")]
    Internal(String),
}
