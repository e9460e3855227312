//! Hyperboloidal energies and the diagnostics built on them.

mod diagnostics;
mod functionals;
mod slice_jet;

pub use diagnostics::{
    decay_diagnostic, sobolev_ratio, DecayReport, RegionSups, SobolevGrid, SobolevReport,
};
pub use functionals::{
    energy_curved, energy_em, energy_inequality_check, energy_integrands, energy_standard,
    tangential_energy, worst_margin, CurvedCoefficients, CurvedReport, EnergyReport, InequalityRow,
    InequalitySample, InverseMetric, MassNorm,
};
pub use slice_jet::FieldJetOnSlice;

pub(crate) use functionals::trapezoid;

use crate::fields::FieldError;
use crate::geometry::GeometryError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EnergyError {
    #[error("mismatched inputs: {0}")]
    Mismatch(String),
    #[error("coefficients violate G_i^(j a b) = G_j^(i b a): {0}")]
    Asymmetric(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

pub type Result<T> = std::result::Result<T, EnergyError>;
