//! Exact computation of Lie superalgebra cohomology.

pub mod algebras;
pub mod cohomology;
pub mod diagrams;
pub mod exactla;
pub mod superlin;
pub mod topmodels;

pub use cohomology::{betti, ce_complex, BettiTable, CochainComplex, ComplexOptions, WeightFilter};
pub use diagrams::Partition;
pub use exactla::{Rational, SparseMatrix};
pub use superlin::{Parity, SuperBasis};
pub use topmodels::{cdga_cohomology, predicted_betti, skeleton_bundle_model, suspend, CdgaModel};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("bracket truncation: {0}")]
    Truncation(String),
    #[error("differential does not square to zero in degree {degree}")]
    DifferentialNotNilpotent { degree: usize },
    #[error("representation check failed: {0}")]
    NotARepresentation(String),
    #[error("block of dimension {dim} in degree {degree} exceeds the cap of {cap}")]
    ResourceCap { degree: usize, dim: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
