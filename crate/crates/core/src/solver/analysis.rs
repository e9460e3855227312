use rayon::prelude::*;

use crate::energy::{
    decay_diagnostic, energy_curved, energy_em, energy_inequality_check, CurvedCoefficients,
    CurvedReport, DecayReport, EnergyReport, InequalityRow, InequalitySample, MassNorm,
};

use super::capture::CapturedSlice;
use super::run::RunRecord;
use super::system::SystemSpec;
use super::{Result, SolverError};

/// Power-law exponent from a log–log least-squares fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub exponent: f64,
    pub stderr: f64,
    pub points: usize,
}

/// Slope of `log(value)` against `log(T)` with its standard error.
pub fn decay_fit(series: &[(f64, f64)]) -> Result<DecayFit> {
    if series.len() < 5 {
        return Err(SolverError::Fit(format!(
            "need at least 5 points, got {}",
            series.len()
        )));
    }
    if let Some(&(t, v)) = series.iter().find(|(t, v)| !(*t > 0.0 && *v > 0.0)) {
        return Err(SolverError::Fit(format!("nonpositive sample ({t}, {v})")));
    }
    let n = series.len() as f64;
    let xs: Vec<f64> = series.iter().map(|(t, _)| t.ln()).collect();
    let ys: Vec<f64> = series.iter().map(|(_, v)| v.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(SolverError::Fit("all T values coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - my - slope * (x - mx)).powi(2))
        .sum();
    Ok(DecayFit {
        exponent: slope,
        stderr: (rss / (n - 2.0) / sxx).sqrt(),
        points: series.len(),
    })
}

/// Energies, sources and decay suprema of every component on one hyperboloid.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceSummary {
    pub big_t: f64,
    /// Whether the run reached every node; otherwise all values cover the reached part.
    pub complete: bool,
    /// Whether every node with `r ≤ t/2` was reached.
    pub interior_complete: bool,
    pub energies: Vec<EnergyReport>,
    /// `‖F_i + f_i‖_{L²(H_T, dx)}` evaluated on the sampled solution.
    pub source_norms: Vec<f64>,
    pub decay: Vec<DecayReport>,
    /// Present when the system has quasilinear coefficients.
    pub curved: Option<CurvedReport>,
    /// Largest `|G_i^{jαβ}|` over the slice nodes.
    pub max_g: f64,
}

impl SliceSummary {
    pub fn energy(&self, c: usize) -> f64 {
        self.energies[c].energy()
    }
}

pub fn summarize_slice(
    spec: &SystemSpec,
    cap: &CapturedSlice,
    norm: MassNorm,
) -> Result<SliceSummary> {
    let complete = cap.complete();
    let interior_complete = cap.interior_complete();
    let cap = &cap.covered();
    let jets = cap.jets(spec)?;
    let n = spec.n();
    let energies = jets
        .iter()
        .map(|j| energy_em(j, cap.big_t, norm))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let decay = jets.iter().map(decay_diagnostic).collect();
    let mut sq = vec![0.0; n];
    let (mut w, mut wt, mut wr, mut f) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let quasi = spec.tensors.is_quasilinear();
    let mut g = quasi.then(|| CurvedCoefficients::zeros(n, cap.slice.len()));
    for (k, node) in cap.slice.nodes.iter().enumerate() {
        for c in 0..n {
            w[c] = cap.u[c][k];
            wt[c] = cap.ut[c][k];
            wr[c] = cap.ur[c][k];
        }
        spec.source(node.t, node.r, &w, &wt, &wr, &mut f);
        for c in 0..n {
            sq[c] += node.weight * f[c] * f[c];
        }
        if let Some(g) = g.as_mut() {
            let dw: Vec<[f64; 4]> = jets
                .iter()
                .map(|j| [j.ut[k], j.grad[k][0], j.grad[k][1], j.grad[k][2]])
                .collect();
            let vals = spec.curved_coefficients(&w, &dw);
            let stride = n * n * 16;
            g.values[k * stride..(k + 1) * stride].copy_from_slice(&vals);
        }
    }
    let (curved, max_g) = match &g {
        Some(g) => (Some(energy_curved(&jets, g, norm)?), g.max_abs()),
        None => (None, 0.0),
    };
    Ok(SliceSummary {
        big_t: cap.big_t,
        complete,
        interior_complete,
        energies,
        source_norms: sq.into_iter().map(f64::sqrt).collect(),
        decay,
        curved,
        max_g,
    })
}

/// Summaries of every ladder slice the run reached at least partly, in ladder order.
pub fn summarize(spec: &SystemSpec, run: &RunRecord, norm: MassNorm) -> Result<Vec<SliceSummary>> {
    run.slices
        .par_iter()
        .filter(|s| s.filled > 0)
        .map(|s| summarize_slice(spec, s, norm))
        .collect()
}

/// The √-form energy inequality for component `c` along the complete summaries, with the
/// source evaluated on the numerical solution.
pub fn run_inequality(summaries: &[SliceSummary], c: usize) -> Result<Vec<InequalityRow>> {
    let samples: Vec<InequalitySample> = summaries
        .iter()
        .filter(|s| s.complete)
        .map(|s| InequalitySample {
            big_t: s.big_t,
            energy: s.energy(c),
            source_norm: s.source_norms[c],
        })
        .collect();
    Ok(energy_inequality_check(&samples)?)
}

/// What multiplies `C₁` in the bootstrap bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BootstrapScale {
    /// The data size `ε`.
    Epsilon(f64),
    /// `E_m(B+1, w_i)^{1/2}` of the component itself, read from the first summary.
    InitialEnergy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapRow {
    pub s: f64,
    pub component: usize,
    /// `E_m(s, w_i)^{1/2}`
    pub value: f64,
    pub bound: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapReport {
    pub rows: Vec<BootstrapRow>,
    /// Smallest `s` at which some bound fails.
    pub first_violation: Option<f64>,
}

impl BootstrapReport {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Checks `E_m(s, u)^{1/2} ≤ C₁·scale` for wave components and `E_m(s, v)^{1/2} ≤ C₁·scale·s^δ`
/// for Klein-Gordon components on every summary.
pub fn bootstrap_monitor(
    spec: &SystemSpec,
    summaries: &[SliceSummary],
    delta: f64,
    c1: f64,
    scale: BootstrapScale,
) -> BootstrapReport {
    let n = spec.n();
    let base: Vec<f64> = (0..n)
        .map(|c| match scale {
            BootstrapScale::Epsilon(e) => e,
            BootstrapScale::InitialEnergy => summaries
                .iter()
                .find(|s| s.complete)
                .map_or(0.0, |s| s.energy(c).max(0.0).sqrt()),
        })
        .collect();
    let mut rows = Vec::new();
    let mut first_violation: Option<f64> = None;
    let summaries: Vec<&SliceSummary> = summaries.iter().filter(|s| s.complete).collect();
    for s in summaries {
        for c in 0..n {
            let growth = if spec.tensors.is_wave(c + 1) {
                1.0
            } else {
                s.big_t.powf(delta)
            };
            let bound = c1 * base[c] * growth;
            let value = s.energy(c).max(0.0).sqrt();
            // equality allowed so that zero data passes
            let passed = value <= bound * (1.0 + 1e-12) + 1e-300;
            if !passed && first_violation.is_none_or(|v| s.big_t < v) {
                first_violation = Some(s.big_t);
            }
            rows.push(BootstrapRow {
                s: s.big_t,
                component: c + 1,
                value,
                bound,
                passed,
            });
        }
    }
    BootstrapReport {
        rows,
        first_violation,
    }
}

/// One fitted decay rate.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayRow {
    pub component: usize,
    pub region: &'static str,
    pub fit: DecayFit,
}

/// Named suprema available for decay fits.
pub const DECAY_REGIONS: [&str; 5] = [
    "interior_value",
    "interior_weighted",
    "cone_weighted",
    "cone_mass",
    "exterior_good",
];

/// `(T, sup)` pairs of one region; interior regions need the interior reached, the others the whole slice.
pub fn decay_series(summaries: &[SliceSummary], c: usize, region: &str) -> Vec<(f64, f64)> {
    let interior = region.starts_with("interior");
    summaries
        .iter()
        .filter(|s| {
            if interior {
                s.interior_complete
            } else {
                s.complete
            }
        })
        .map(|s| {
            let d = &s.decay[c];
            let v = match region {
                "interior_value" => d.interior.value,
                "interior_weighted" => d.interior.weighted,
                "cone_weighted" => d.cone.weighted,
                "cone_mass" => d.cone.mass,
                _ => d.good,
            };
            (s.big_t, v)
        })
        .collect()
}

/// Fits every region of every component that has a usable series.
pub fn decay_table(spec: &SystemSpec, summaries: &[SliceSummary]) -> Vec<DecayRow> {
    let mut out = Vec::new();
    for c in 0..spec.n() {
        for region in DECAY_REGIONS {
            if let Ok(fit) = decay_fit(&decay_series(summaries, c, region)) {
                out.push(DecayRow {
                    component: c + 1,
                    region,
                    fit,
                });
            }
        }
    }
    out
}
