use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::energy::{energy_standard, InverseMetric};
use crate::geometry::{
    build_slice, HyperboloidSlice, QuadratureRule, SliceRegion, DEFAULT_SLICE_NODES,
};

use super::capture::{from_snapshots, Bracket, CapturedSlice, OnlineCapture, Snapshot};
use super::grid::{CauchyState, Evolver, RadialGrid};
use super::system::{InitialData, SystemSpec};
use super::{Result, SolverError};

/// Default blowup threshold on `|u|`.
pub const BLOWUP_THRESHOLD: f64 = 1e6;

/// Snapshots are kept at least four per unit time.
pub const MAX_SNAPSHOT_INTERVAL: f64 = 0.25;

/// Numerical parameters of one evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    /// Data support radius; the run starts at `t = B + 1`.
    pub b: f64,
    pub dr: f64,
    pub cfl: f64,
    pub t_final: f64,
    /// Hyperboloid radii sampled while the run passes them.
    pub ladder: Vec<f64>,
    /// Region of the ladder slices.
    pub slice_region: SliceRegion,
    /// Radial spacing of slice nodes; defaults to `2·dr`.
    pub slice_spacing: Option<f64>,
    /// Store full snapshots this often (in time); `None` stores none.
    pub snapshot_interval: Option<f64>,
    /// Time between rows of the run history.
    pub record_interval: f64,
    /// Evolve only `r ≤ t − 1 + margin`; `None` evolves the whole grid.
    pub active_margin: Option<f64>,
    pub blowup_threshold: f64,
    pub seed: u64,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            b: 2.0,
            dr: 0.01,
            cfl: 0.5,
            t_final: 40.0,
            ladder: Vec::new(),
            slice_region: SliceRegion::Cone,
            slice_spacing: None,
            snapshot_interval: None,
            record_interval: 0.5,
            active_margin: Some(3.0),
            blowup_threshold: BLOWUP_THRESHOLD,
            seed: 0,
        }
    }
}

impl RunSettings {
    pub fn t_start(&self) -> f64 {
        self.b + 1.0
    }

    /// The ladder slice used for hyperboloid `T`.
    pub fn slice(&self, big_t: f64) -> Result<Arc<HyperboloidSlice>> {
        self.slice_in(big_t, self.slice_region)
    }

    pub fn slice_in(&self, big_t: f64, region: SliceRegion) -> Result<Arc<HyperboloidSlice>> {
        let spacing = self.slice_spacing.unwrap_or(2.0 * self.dr);
        let (lo, hi) = region.radial_extent(big_t).unwrap_or((0.0, 0.0));
        let n = (((hi - lo) / spacing).ceil() as usize).max(DEFAULT_SLICE_NODES);
        Ok(Arc::new(build_slice(
            big_t,
            region,
            n,
            QuadratureRule::Midpoint,
        )?))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.b > 0.0) {
            return Err(SolverError::Config(format!(
                "B must be positive, got {}",
                self.b
            )));
        }
        if !(self.t_final > self.t_start()) {
            return Err(SolverError::Config(format!(
                "t_final = {} must exceed the start time {}",
                self.t_final,
                self.t_start()
            )));
        }
        if let Some(&bad) = self.ladder.iter().find(|&&t| !(t >= self.t_start())) {
            return Err(SolverError::Config(format!(
                "ladder value {bad} precedes the first hyperboloid H_{}",
                self.t_start()
            )));
        }
        if !(self.record_interval > 0.0) {
            return Err(SolverError::Config(
                "record_interval must be positive".into(),
            ));
        }
        if matches!(self.snapshot_interval, Some(s) if !(s > 0.0 && s <= MAX_SNAPSHOT_INTERVAL)) {
            return Err(SolverError::Config(format!(
                "snapshot_interval must lie in (0, {MAX_SNAPSHOT_INTERVAL}] for cubic time interpolation"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruncationReason {
    Blowup,
    NaN,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub t: f64,
    pub reason: TruncationReason,
}

/// One row of the run history.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryRow {
    pub t: f64,
    /// Per component `‖u_i‖_{L²(ℝ³)}`.
    pub l2: Vec<f64>,
    /// Per component `sup |u_i|`.
    pub sup: Vec<f64>,
    /// Per component flat energy `∫ (∂_t u)² + |∇u|² dx`.
    pub flat_energy: Vec<f64>,
    pub support: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub config_hash: String,
    pub seed: u64,
    pub grid: RadialGrid,
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
    pub truncation: Option<Truncation>,
    pub history: Vec<HistoryRow>,
    pub slices: Vec<CapturedSlice>,
    pub snapshots: Vec<Snapshot>,
    /// Largest `support − (t − 1)` seen over the run.
    pub max_support_excess: f64,
    pub components: usize,
}

impl RunRecord {
    pub fn snapshot_times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.t).collect()
    }

    pub fn slice(&self, big_t: f64) -> Option<&CapturedSlice> {
        self.slices
            .iter()
            .find(|s| (s.big_t - big_t).abs() <= 1e-12 * big_t.max(1.0))
    }
}

/// Hex SHA-256 of the debug rendering of a run's inputs.
pub fn config_hash(spec: &SystemSpec, data: &InitialData, settings: &RunSettings) -> String {
    let mut h = Sha256::new();
    h.update(format!(
        "{:?}\n{:?}\n{:?}\n{:?}",
        spec.tensors.dump(),
        spec.masses,
        data,
        settings
    ));
    h.update(format!("{}{:?}", spec.quasilinear, spec.forcing));
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn history_row(state: &CauchyState, grid: &RadialGrid, len: usize) -> Result<HistoryRow> {
    let r = grid.radii(len);
    let metric = InverseMetric::minkowski();
    let mut row = HistoryRow {
        t: state.t,
        l2: Vec::new(),
        sup: Vec::new(),
        flat_energy: Vec::new(),
        support: state.support,
    };
    for c in 0..state.components() {
        let u = &state.u[c][..len];
        let dens: Vec<f64> = (0..len)
            .map(|k| 4.0 * std::f64::consts::PI * r[k] * r[k] * u[k] * u[k])
            .collect();
        row.l2.push(crate::energy::trapezoid(&r, &dens).sqrt());
        row.sup.push(u.iter().fold(0.0f64, |m, v| m.max(v.abs())));
        let ur = state.radial_derivative(c, grid.dr);
        row.flat_energy.push(energy_standard(
            &r,
            &state.ut[c][..len],
            &ur[..len],
            &metric,
        )?);
    }
    Ok(row)
}

/// Evolves `spec` from `t = B + 1` to `t_final`, capturing every ladder hyperboloid on the way.
pub fn run(spec: &SystemSpec, data: &InitialData, settings: &RunSettings) -> Result<RunRecord> {
    settings.validate()?;
    if data.components() != spec.n() {
        return Err(SolverError::Config(format!(
            "initial data has {} components, system has {}",
            data.components(),
            spec.n()
        )));
    }
    let grid = RadialGrid::for_run(settings.b, settings.dr, settings.cfl, settings.t_final)?;
    let t0 = settings.t_start();
    let state = CauchyState::from_data(data, &grid, t0);
    let mut ev = Evolver::new(spec, grid, state, settings.active_margin)?;
    let slices = settings
        .ladder
        .iter()
        .map(|&t| settings.slice(t))
        .collect::<Result<Vec<_>>>()?;
    let mut capture = OnlineCapture::new(slices, spec.n());
    {
        // nodes exactly at the start time
        let s = &ev.state;
        let b = Bracket {
            t0,
            t1: t0,
            u0: &s.u,
            ut0: &s.ut,
            acc0: &ev.acc,
            u1: &s.u,
            ut1: &s.ut,
            acc1: &ev.acc,
        };
        capture.advance(&b, grid.dr);
    }

    let mut record = RunRecord {
        config_hash: config_hash(spec, data, settings),
        seed: settings.seed,
        grid,
        t_start: t0,
        t_end: t0,
        steps: 0,
        truncation: None,
        history: vec![history_row(&ev.state, &grid, ev.active())?],
        slices: Vec::new(),
        snapshots: Vec::new(),
        max_support_excess: ev.state.support - (t0 - 1.0),
        components: spec.n(),
    };
    if settings.snapshot_interval.is_some() {
        record
            .snapshots
            .push(Snapshot::new(&ev.state, &ev.acc, ev.active()));
    }
    let mut next_record = t0 + settings.record_interval;
    let mut next_snapshot = settings.snapshot_interval.map(|s| t0 + s);
    let eps = 1e-9 * grid.dt();

    while ev.state.t < settings.t_final - eps {
        match ev.step() {
            Ok(()) => {}
            Err(SolverError::NaN { t }) => {
                record.truncation = Some(Truncation {
                    t,
                    reason: TruncationReason::NaN,
                });
                break;
            }
            Err(e) => return Err(e),
        }
        record.steps += 1;
        let sup = ev.sup();
        if !sup.is_finite() || sup > settings.blowup_threshold {
            record.truncation = Some(Truncation {
                t: ev.state.t,
                reason: if sup.is_finite() {
                    TruncationReason::Blowup
                } else {
                    TruncationReason::NaN
                },
            });
            break;
        }
        let b = Bracket {
            t0: ev.prev.t,
            t1: ev.state.t,
            u0: &ev.prev.u,
            ut0: &ev.prev.ut,
            acc0: &ev.prev_acc,
            u1: &ev.state.u,
            ut1: &ev.state.ut,
            acc1: &ev.acc,
        };
        capture.advance(&b, grid.dr);
        let t = ev.state.t;
        record.t_end = t;
        record.max_support_excess = record.max_support_excess.max(ev.state.support - (t - 1.0));
        if t >= next_record - eps {
            record
                .history
                .push(history_row(&ev.state, &grid, ev.active())?);
            next_record += settings.record_interval;
        }
        if let (Some(ns), Some(iv)) = (next_snapshot.as_mut(), settings.snapshot_interval) {
            if t >= *ns - eps {
                record
                    .snapshots
                    .push(Snapshot::new(&ev.state, &ev.acc, ev.active()));
                *ns += iv;
            }
        }
    }
    if record.history.last().map(|h| h.t) != Some(record.t_end) && record.truncation.is_none() {
        record
            .history
            .push(history_row(&ev.state, &grid, ev.active())?);
    }
    record.slices = capture.finish();
    Ok(record)
}

/// Samples hyperboloid `T` from the stored snapshots of a run.
pub fn interpolate_to_hyperboloid(
    run: &RunRecord,
    slice: Arc<HyperboloidSlice>,
) -> Result<CapturedSlice> {
    from_snapshots(&run.snapshots, slice, run.components, run.grid.dr)
}

/// The first hyperboloid `H_{B+1}` from stored snapshots; needs them to cover `[B+1, ((B+1)²+1)/2]`.
pub fn bridge_to_first_hyperboloid(
    run: &RunRecord,
    settings: &RunSettings,
) -> Result<CapturedSlice> {
    interpolate_to_hyperboloid(
        run,
        settings.slice_in(settings.t_start(), SliceRegion::Cone)?,
    )
}
