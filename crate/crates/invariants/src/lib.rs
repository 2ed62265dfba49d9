//! Class invariants built from Siegel-function values.
//!
//! Every numeric result is produced by a precision ladder: the computation
//! starts at [`LADDER_START`] bits and doubles whenever a certification step
//! (realness, integer rounding, nonvanishing) cannot be completed, up to
//! [`LADDER_MAX`] bits. [`InvariantSpec::ladder`] overrides both ends.

mod conjugates;
mod minpoly;
mod normal;
mod report;
mod spec;

pub use conjugates::{gamma, gamma_at, hilbert_conjugates, hilbert_conjugates_at, norm_generator, norm_generator_at, ConjugateSet, GeneratorInfo, NormGenerator, SigmaInfo};
pub use minpoly::{minimal_polynomial, minimal_polynomial_from, MinimalPolynomial};
pub use normal::{check_lemma_sequence, lemma_sequence, normal_basis, normal_basis_at, FrobeniusMargin, NormalBasisResult};
pub use report::{report, validate_report, Decimal, InvariantReport, ReportRequest, SCHEMA_VERSION};
pub use spec::{escalate, CertifiedReal, InvariantSpec, Ladder, LADDER_MAX, LADDER_START};

#[derive(Debug, thiserror::Error)]
pub enum InvariantsError {
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error("invalid input: {0}")]
    Input(String),
    /// A certification step failed at the given precision; the ladder retries.
    #[error("not certified at {1} bits: {0}")]
    Uncertified(String, usize),
    #[error("certification failed at the maximum precision {1} bits: {0}")]
    Certification(String, usize),
    #[error(transparent)]
    Fields(#[from] rcf_fields::FieldsError),
    #[error(transparent)]
    Residue(#[from] rcf_residue::ResidueError),
    #[error(transparent)]
    Siegel(#[from] rcf_siegel::SiegelError),
    #[error(transparent)]
    Numerics(#[from] rcf_numerics::NumericsError),
}
