//! Null and weak-null conditions for constant-coefficient quadratic systems.

mod checks;
mod tensors;

pub use checks::{
    check_null_condition, check_weak_null, frame_zero_components, sample_null_cone, sphere_point,
    NullVector, NullVerdict, WeakNullReport, AXIS_SAMPLES, DEFAULT_NULL_TOL,
};
pub use tensors::{load_tensors, ClassicalForm, CoefficientTensors, Regime, TensorKind, DIM};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NullError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("symmetry violation G_i^(j a b) != G_j^(i b a): {0}")]
    Symmetry(String),
    #[error("structural zero violated: {0}")]
    StructuralZero(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, NullError>;
