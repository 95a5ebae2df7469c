//! The A-model variation of Hodge structure over truncated formal series.
//!
//! Linear maps are matrices acting on coefficient columns: column `a` of a
//! matrix is the image of basis vector `a`. Every connection operator is
//! stored as `2πi·∇` in the logarithmic direction `q_j ∂/∂q_j`, which keeps
//! all coefficients rational.

mod connection;
mod graded;
mod gw;
mod weight;

pub use connection::{
    connection_operator, connection_operators, flatness_check, flatness_failure, griffiths_check,
    residue, vhs_isomorphism_check, ConnectionPresentation, FlatnessFailure, GriffithsReport,
    VhsReport,
};
pub use graded::{topological_mirror_test, GradedSpace, HodgeDiamond, Trilinear};
pub use gw::{
    associativity_check, associativity_failure, gamma_from_phi, quantum_multiplication,
    quantum_product, validate_phi, AssociativityFailure, EffectiveClass, GWData, PhiReport,
};
pub use weight::{weight_filtration, WeightFiltration};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AvhsError {
    /// A named structural invariant failed.
    #[error("invariant `{name}` violated: {detail}")]
    Invariant { name: &'static str, detail: String },
    #[error("pairing is degenerate")]
    DegeneratePairing,
    #[error("effective class: {0}")]
    NotEffective(String),
    #[error("class {0} pairs to zero with every framing generator")]
    OrthogonalClass(String),
    #[error("Gromov–Witten data failed validation: {0}")]
    InvalidPhi(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("map is not nilpotent")]
    NotNilpotent,
    #[error("gauge is not invertible at q = 0")]
    SingularGauge,
    #[error("coordinate map: {0}")]
    CoordinateMap(String),
    #[error("index {index} out of range (size {size})")]
    OutOfRange { index: usize, size: usize },
}

pub type Result<T> = std::result::Result<T, AvhsError>;

pub(crate) fn invariant(name: &'static str, detail: impl Into<String>) -> AvhsError {
    AvhsError::Invariant {
        name,
        detail: detail.into(),
    }
}
