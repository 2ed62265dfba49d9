//! Finite quotient rings `O / n O` of quadratic and biquadratic orders.
//!
//! Unit groups, Pell conics, the norm-condition subgroups of `(O_K / p O_K)^×`
//! with their coset decompositions, Galois generators as Artin elements,
//! and the extension-degree tables of the ray class field towers.

mod arith;
pub mod brute;
mod degrees;
mod galois;
mod lattice;
mod pell;
mod ring;

pub use arith::{inv_mod, legendre, order_mod, primitive_root, sqrt_mod};
pub use degrees::{degree_table, DegreeEntry, DegreeTable};
pub use galois::{galois_generators, hilbert_generator, lift_residue, ArtinElement, GaloisGenerators};
pub use lattice::{wtilde_lattice, Generator, Group, LatticeContext, SubgroupDescriptor};
pub use pell::{norm_map_image, pell_add, pell_count, NormImage, PellGroup};
pub use ring::{unit_group_order, Order, RElt, ResidueRing, UnitGroupOrder};

#[derive(Debug, thiserror::Error)]
pub enum ResidueError {
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<rcf_fields::FieldsError> for ResidueError {
    fn from(e: rcf_fields::FieldsError) -> Self {
        match e {
            rcf_fields::FieldsError::Hypothesis(m) => Self::Hypothesis(m),
            rcf_fields::FieldsError::Input(m) => Self::Input(m),
            rcf_fields::FieldsError::Internal(m) => Self::Internal(m),
        }
    }
}
