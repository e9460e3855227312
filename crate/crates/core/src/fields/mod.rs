//! Vector-field algebra on closed-form test fields.

pub mod bounds;
pub mod field;
pub mod frame;
pub mod identities;
pub mod operators;

pub use bounds::{check_commutator_bound, good_bound_sweep, BoundReport, CommutatorBound};
pub use field::{
    sobolev_profiles, test_family, BaseField, ConeBump, ConeProfile, Gaussian, Polynomial,
    ScalarField,
};
pub use frame::{frame_transform_two_tensor, FrameMatrices};
pub use identities::{
    check_commutator, run_battery, sample_points, BatteryRow, Identity, IdentityReport,
    SampleRegion,
};
pub use operators::{apply_jet, wave_jet, FieldOperator, MultiIndex};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FieldError {
    #[error("derivative budget exhausted")]
    Budget,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("operator index out of range: {0:?}")]
    BadIndex(FieldOperator),
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
}

pub type Result<T> = std::result::Result<T, FieldError>;
