//! Radial method-of-lines evolution of wave–Klein-Gordon systems and its hyperboloidal read-out.

mod analysis;
mod capture;
mod grid;
mod run;
mod system;

pub use analysis::{
    bootstrap_monitor, decay_fit, decay_series, decay_table, run_inequality, summarize,
    summarize_slice, BootstrapReport, BootstrapRow, BootstrapScale, DecayFit, DecayRow,
    SliceSummary, DECAY_REGIONS,
};
pub use capture::{CapturedSlice, Snapshot};
pub use grid::{
    rhs, CauchyState, Evolver, FrozenPrincipal, RadialGrid, MAX_CFL, N_GHOST, SUPPORT_THRESHOLD,
};
pub use run::{
    bridge_to_first_hyperboloid, config_hash, interpolate_to_hyperboloid, run, HistoryRow,
    RunRecord, RunSettings, Truncation, TruncationReason, BLOWUP_THRESHOLD, MAX_SNAPSHOT_INTERVAL,
};
pub use system::{Factor, InitialData, Preset, PrincipalTerm, RadialBump, SourceTerm, SystemSpec};

use crate::energy::{EnergyError, MassNorm};
use crate::geometry::GeometryError;
use crate::nullcond::NullError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("tensors are not radially reducible: {0}")]
    NotRadial(String),
    #[error("insufficient coverage: {0}")]
    Coverage(String),
    #[error("non-finite value in the right-hand side at t = {t}")]
    NaN { t: f64 },
    #[error("decay fit: {0}")]
    Fit(String),
    #[error(transparent)]
    Null(#[from] NullError),
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

pub type Result<T> = std::result::Result<T, SolverError>;

/// A finished evolution with its hyperboloidal reports.
#[derive(Debug, Clone)]
pub struct SystemRun {
    pub spec: SystemSpec,
    pub record: RunRecord,
    pub summaries: Vec<SliceSummary>,
    pub decay: Vec<DecayRow>,
}

/// Evolves a system and summarizes every ladder slice it reached.
pub fn run_system(
    spec: SystemSpec,
    data: &InitialData,
    settings: &RunSettings,
    norm: MassNorm,
) -> Result<SystemRun> {
    let record = run(&spec, data, settings)?;
    let summaries = summarize(&spec, &record, norm)?;
    let decay = decay_table(&spec, &summaries);
    Ok(SystemRun {
        spec,
        record,
        summaries,
        decay,
    })
}

/// Runs a built-in preset with bump data of size `epsilon`.
pub fn run_preset(
    preset: Preset,
    epsilon: f64,
    settings: &RunSettings,
    norm: MassNorm,
) -> Result<SystemRun> {
    if !(epsilon >= 0.0) {
        return Err(SolverError::Config(format!(
            "epsilon must be non-negative, got {epsilon}"
        )));
    }
    run_system(
        preset.system()?,
        &preset.data(settings.b, epsilon),
        settings,
        norm,
    )
}
