//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("Clifford dimension {0} exceeds the supported ceiling of 15")]
    DimensionCeiling(usize),

    #[error("input is not a unit vector (norm {0})")]
    NotUnit(f64),

    #[error("matrix is not special orthogonal (residual {0})")]
    NotSpecialOrthogonal(f64),

    #[error("matrix is not special unitary (residual {0})")]
    NotSpecialUnitary(f64),

    #[error("matrix too far from the identity for the principal logarithm (distance {0})")]
    LogOutOfRange(f64),

    #[error("power series did not converge within the iteration cap")]
    SeriesDiverged,

    #[error("conjugation left the expected subspace (residual {0})")]
    SubspaceViolation(f64),

    #[error("element has components outside grade {grade} (residual {residual})")]
    GradeResidual { grade: usize, residual: f64 },

    #[error("loop sample moves the base point (residual {0})")]
    BasePointMoved(f64),

    #[error("path step {index} too large ({size}); re-sample with more steps")]
    StepTooLarge { index: usize, size: f64 },

    #[error("spin lift lost track of the path (max residual {0})")]
    TrackingFailure(f64),

    #[error("lift endpoint is near neither +1 nor -1 (distance to nearest {0})")]
    EndpointAmbiguous(f64),

    #[error("eigenphase matching ambiguous at step {0}")]
    PhaseAmbiguity(usize),

    #[error("winding sum {0} is not close to an integer")]
    WindingNotIntegral(f64),

    #[error("family {0} is not supported by this operation")]
    UnsupportedFamily(String),

    #[error("parameter n = {n} out of the supported range [{min}, {max}] for {family}")]
    ParameterOutOfRange {
        family: String,
        n: usize,
        min: usize,
        max: usize,
    },

    #[error("classification methods disagree: differential {differential}, adjoint {adjoint}, oracle {oracle}")]
    MethodDisagreement {
        differential: u8,
        adjoint: u8,
        oracle: u8,
    },

    #[error("character evaluation: leaf {leaf} incompatible with group {group}")]
    IncompatibleLeaf { leaf: String, group: String },

    #[error("virtual dimensions differ at the identity: {left} vs {right}")]
    DimensionAtIdentity { left: f64, right: f64 },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
