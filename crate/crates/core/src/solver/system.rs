use std::fmt;
use std::str::FromStr;

use crate::nullcond::{CoefficientTensors, TensorKind, DIM};

use super::{Result, SolverError};

/// Which first-order quantities a quadratic source term multiplies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    /// `∂_t w_j ∂_t w_k`
    TimeTime,
    /// `∂_r w_j ∂_r w_k`
    RadialRadial,
    /// `w_j ∂_t w_k`
    ValueTime,
    /// `w_j w_k`
    ValueValue,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceTerm {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub factor: Factor,
    pub coef: f64,
}

/// `G_i^{jαβ}` restricted to radial fields: `part` selects the `∂_t²` slot (`G^{00}`)
/// or the Laplacian slot (the common diagonal `G^{aa}`); `via` selects `∂_t w_k` or `w_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrincipalTerm {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub time_slot: bool,
    pub via_derivative: bool,
    pub coef: f64,
}

/// Exact radial manufactured solution `amp·cos(νt)·(1 − r²/ρ²)⁴₊` with `ρ = c(t − 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialBump {
    pub amp: f64,
    pub freq: f64,
    pub c: f64,
}

impl RadialBump {
    /// `(u, ∂_t u, ∂_r u)` at `(t, r)`.
    pub fn first_order(&self, t: f64, r: f64) -> (f64, f64, f64) {
        let rho = self.c * (t - 1.0);
        if rho <= 0.0 {
            return (0.0, 0.0, 0.0);
        }
        let s = r * r / (rho * rho);
        if s >= 1.0 {
            return (0.0, 0.0, 0.0);
        }
        let (sn, cs) = (self.freq * t).sin_cos();
        let h = (1.0 - s).powi(4);
        let h1 = -4.0 * (1.0 - s).powi(3);
        let s_t = -2.0 * s * self.c / rho;
        let s_r = 2.0 * r / (rho * rho);
        let u = self.amp * cs * h;
        let ut = self.amp * (-self.freq * sn * h + cs * h1 * s_t);
        let ur = self.amp * cs * h1 * s_r;
        (u, ut, ur)
    }

    /// `□u + a²u` at `(t, r)`.
    pub fn forcing(&self, t: f64, r: f64, mass: f64) -> f64 {
        let rho = self.c * (t - 1.0);
        if rho <= 0.0 {
            return 0.0;
        }
        let s = r * r / (rho * rho);
        if s >= 1.0 {
            return 0.0;
        }
        let nu = self.freq;
        let (sn, cs) = (nu * t).sin_cos();
        let (c0, c1, c2) = (cs, -nu * sn, -nu * nu * cs);
        let h = (1.0 - s).powi(4);
        let h1 = -4.0 * (1.0 - s).powi(3);
        let h2 = 12.0 * (1.0 - s).powi(2);
        let d = self.c / rho;
        let s_t = -2.0 * s * d;
        let s_tt = 6.0 * s * d * d;
        let utt = c2 * h + 2.0 * c1 * h1 * s_t + c0 * (h2 * s_t * s_t + h1 * s_tt);
        let lap = c0 * (h2 * 4.0 * s + 6.0 * h1) / (rho * rho);
        self.amp * (utt - lap + mass * mass * c0 * h)
    }
}

/// Initial data at `t = B + 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    /// `w_i = a_i(1 − (r/B)²)⁴₊`, `∂_t w_i = b_i(1 − (r/B)²)⁴₊`, one `(a_i, b_i)` per component.
    Bump { b: f64, amps: Vec<(f64, f64)> },
    /// Exact data of manufactured solutions, one per component (`None` for zero data).
    Manufactured(Vec<Option<RadialBump>>),
}

impl InitialData {
    pub fn at(&self, component: usize, t: f64, r: f64) -> (f64, f64) {
        match self {
            InitialData::Bump { b, amps } => {
                let s = r / b;
                if s >= 1.0 {
                    return (0.0, 0.0);
                }
                let w = (1.0 - s * s).powi(4);
                (amps[component].0 * w, amps[component].1 * w)
            }
            InitialData::Manufactured(m) => match m[component] {
                Some(bump) => {
                    let (u, ut, _) = bump.first_order(t, r);
                    (u, ut)
                }
                None => (0.0, 0.0),
            },
        }
    }

    pub fn components(&self) -> usize {
        match self {
            InitialData::Bump { amps, .. } => amps.len(),
            InitialData::Manufactured(m) => m.len(),
        }
    }
}

/// A radially symmetric wave–Klein-Gordon system
/// `□w_i + G_i^{jαβ}∂_αβ w_j + D_i²w_i = F_i + f_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    pub tensors: CoefficientTensors,
    /// `D_i`, zero for wave components.
    pub masses: Vec<f64>,
    /// Whether `G` enters the principal part during evolution.
    pub quasilinear: bool,
    pub sources: Vec<SourceTerm>,
    pub principal: Vec<PrincipalTerm>,
    /// Manufactured forcing `f_i`, if any.
    pub forcing: Vec<Option<(RadialBump, f64)>>,
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-14 * scale.max(1.0)
}

impl SystemSpec {
    /// Builds the radial reduction; fails for tensors whose contraction depends on direction.
    pub fn new(tensors: CoefficientTensors, masses: Vec<f64>, quasilinear: bool) -> Result<Self> {
        tensors.validate()?;
        let n = tensors.n();
        if masses.len() != n {
            return Err(SolverError::Config(format!(
                "{} masses for {n} components",
                masses.len()
            )));
        }
        for (c, &m) in masses.iter().enumerate() {
            let wave = tensors.is_wave(c + 1);
            if wave && m != 0.0 {
                return Err(SolverError::Config(format!(
                    "wave component {} must be massless",
                    c + 1
                )));
            }
            if !wave && m < 1.0 {
                return Err(SolverError::Config(format!(
                    "Klein-Gordon component {} needs mass ≥ 1, got {m}",
                    c + 1
                )));
            }
        }
        let scale = tensors.magnitude();
        let mut sources = Vec::new();
        let mut principal = Vec::new();
        let not_radial = |what: String| SolverError::NotRadial(what);
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    let p = |a, b| tensors.p(i, a, b, j, k);
                    for a in 1..DIM {
                        if p(0, a) != 0.0 || p(a, 0) != 0.0 {
                            return Err(not_radial(format!(
                                "P {i} 0 {a} {j} {k} mixes time and space"
                            )));
                        }
                        for b in 1..DIM {
                            if a != b && p(a, b) != 0.0 {
                                return Err(not_radial(format!(
                                    "P {i} {a} {b} {j} {k} is off-diagonal"
                                )));
                            }
                        }
                        if !close(p(a, a), p(1, 1), scale) {
                            return Err(not_radial(format!("P {i} a a {j} {k} is not isotropic")));
                        }
                        if tensors.q(i, a, j, k) != 0.0 {
                            return Err(not_radial(format!(
                                "Q {i} {a} {j} {k} has a spatial slot"
                            )));
                        }
                    }
                    let push = |v: &mut Vec<SourceTerm>, factor, coef: f64| {
                        if coef != 0.0 {
                            v.push(SourceTerm {
                                i,
                                j,
                                k,
                                factor,
                                coef,
                            });
                        }
                    };
                    push(&mut sources, Factor::TimeTime, p(0, 0));
                    // ∂_a w_j ∂_a w_k = ∂_r w_j ∂_r w_k for radial fields
                    push(&mut sources, Factor::RadialRadial, p(1, 1));
                    push(&mut sources, Factor::ValueTime, tensors.q(i, 0, j, k));
                    push(&mut sources, Factor::ValueValue, tensors.r(i, j, k));

                    for (kind, deriv) in [(TensorKind::A, true), (TensorKind::B, false)] {
                        let g = |a: usize, b: usize, ga: usize| match kind {
                            TensorKind::A => tensors.a(i, j, a, b, ga, k),
                            _ => tensors.b(i, j, a, b, k),
                        };
                        let gammas: &[usize] = if deriv { &[0, 1, 2, 3] } else { &[0] };
                        for &ga in gammas {
                            for a in 0..DIM {
                                for b in 0..DIM {
                                    let v = g(a, b, ga);
                                    if v == 0.0 {
                                        continue;
                                    }
                                    let ok = ga == 0
                                        && ((a == 0 && b == 0)
                                            || (a == b && close(v, g(1, 1, ga), scale)));
                                    if !ok {
                                        return Err(not_radial(format!(
                                            "{} coefficient for G_{i}^({j} {a} {b}) is not radially reducible",
                                            if deriv { 'A' } else { 'B' }
                                        )));
                                    }
                                }
                            }
                            if ga == 0 {
                                for (time_slot, coef) in [(true, g(0, 0, 0)), (false, g(1, 1, 0))] {
                                    if coef != 0.0 {
                                        principal.push(PrincipalTerm {
                                            i,
                                            j,
                                            k,
                                            time_slot,
                                            via_derivative: deriv,
                                            coef,
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(SystemSpec {
            forcing: vec![None; n],
            tensors,
            masses,
            quasilinear,
            sources,
            principal,
        })
    }

    pub fn n(&self) -> usize {
        self.masses.len()
    }

    pub fn with_forcing(mut self, forcing: Vec<Option<RadialBump>>) -> Result<Self> {
        if forcing.len() != self.n() {
            return Err(SolverError::Config(
                "forcing needs one entry per component".into(),
            ));
        }
        self.forcing = forcing
            .into_iter()
            .enumerate()
            .map(|(c, f)| f.map(|b| (b, self.masses[c])))
            .collect();
        Ok(self)
    }

    /// `F_i(w, ∂w) + f_i(t, r)` for every component, written into `out`.
    pub fn source(&self, t: f64, r: f64, w: &[f64], wt: &[f64], wr: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for s in &self.sources {
            let (j, k) = (s.j - 1, s.k - 1);
            let v = match s.factor {
                Factor::TimeTime => wt[j] * wt[k],
                Factor::RadialRadial => wr[j] * wr[k],
                Factor::ValueTime => w[j] * wt[k],
                Factor::ValueValue => w[j] * w[k],
            };
            out[s.i - 1] += s.coef * v;
        }
        for (c, f) in self.forcing.iter().enumerate() {
            if let Some((bump, mass)) = f {
                out[c] += bump.forcing(t, r, *mass);
            }
        }
    }

    /// Radial principal coefficients `(G^{00}, G^{aa})` as `n×n` row-major blocks.
    pub fn principal_blocks(&self, w: &[f64], wt: &[f64], g0: &mut [f64], g1: &mut [f64]) {
        let n = self.n();
        g0.iter_mut().for_each(|v| *v = 0.0);
        g1.iter_mut().for_each(|v| *v = 0.0);
        for p in &self.principal {
            let k = p.k - 1;
            let v = p.coef * if p.via_derivative { wt[k] } else { w[k] };
            let idx = (p.i - 1) * n + (p.j - 1);
            if p.time_slot {
                g0[idx] += v;
            } else {
                g1[idx] += v;
            }
        }
    }

    /// Full `G_i^{jαβ}` (0-based `[i][j][α][β]`) from first-order data, for curved energies.
    pub fn curved_coefficients(&self, w: &[f64], dw: &[[f64; 4]]) -> Vec<f64> {
        let n = self.n();
        let t = &self.tensors;
        let mut out = vec![0.0; n * n * 16];
        for i in 0..n {
            for j in 0..n {
                for a in 0..DIM {
                    for b in 0..DIM {
                        let mut g = 0.0;
                        for k in 0..n {
                            g += t.b(i + 1, j + 1, a, b, k + 1) * w[k];
                            for ga in 0..DIM {
                                g += t.a(i + 1, j + 1, a, b, ga, k + 1) * dw[k][ga];
                            }
                        }
                        out[((i * n + j) * 4 + a) * 4 + b] = g;
                    }
                }
            }
        }
        out
    }
}

/// Built-in systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    FreeWave,
    FreeKg,
    NullWave,
    NonnullWave,
    CoupledWkg,
    /// Small quasilinear toy with `G` in the principal part.
    QuasilinearToy,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::FreeWave,
        Preset::FreeKg,
        Preset::NullWave,
        Preset::NonnullWave,
        Preset::CoupledWkg,
        Preset::QuasilinearToy,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::FreeWave => "free_wave",
            Preset::FreeKg => "free_kg",
            Preset::NullWave => "null_wave",
            Preset::NonnullWave => "nonnull_wave",
            Preset::CoupledWkg => "coupled_wkg",
            Preset::QuasilinearToy => "quasilinear_toy",
        }
    }

    /// Coefficient tensors of the preset (before any file override).
    pub fn tensors(&self) -> CoefficientTensors {
        let mut t;
        let set = |t: &mut CoefficientTensors, kind, idx: &[usize], v| {
            t.set(kind, idx, v).expect("preset index")
        };
        match self {
            Preset::FreeWave => t = CoefficientTensors::zeros(1, 0),
            Preset::FreeKg => t = CoefficientTensors::zeros(0, 1),
            // □u = −N(∂u, ∂u): positive bump data then sit on the growing side of (∂_t u)²
            Preset::NullWave => {
                t = CoefficientTensors::zeros(1, 0);
                set(&mut t, TensorKind::P, &[1, 0, 0, 1, 1], -1.0);
                for a in 1..DIM {
                    set(&mut t, TensorKind::P, &[1, a, a, 1, 1], 1.0);
                }
            }
            Preset::NonnullWave => {
                t = CoefficientTensors::zeros(1, 0);
                set(&mut t, TensorKind::P, &[1, 0, 0, 1, 1], -1.0);
            }
            Preset::CoupledWkg => {
                t = CoefficientTensors::zeros(1, 1);
                // wave: Q0(u, u) + (∂_t v)² + ∂_t u ∂_t v
                set(&mut t, TensorKind::P, &[1, 0, 0, 1, 1], 1.0);
                for a in 1..DIM {
                    set(&mut t, TensorKind::P, &[1, a, a, 1, 1], -1.0);
                }
                set(&mut t, TensorKind::P, &[1, 0, 0, 2, 2], 1.0);
                set(&mut t, TensorKind::P, &[1, 0, 0, 1, 2], 1.0);
                // Klein-Gordon: (∂_t u)² + (∂_t v)² + ∂_t u ∂_t v
                set(&mut t, TensorKind::P, &[2, 0, 0, 1, 1], 1.0);
                set(&mut t, TensorKind::P, &[2, 0, 0, 2, 2], 1.0);
                set(&mut t, TensorKind::P, &[2, 0, 0, 1, 2], 1.0);
            }
            Preset::QuasilinearToy => {
                t = CoefficientTensors::zeros(1, 1);
                // G_1^{1 00} = ∂_t v, G_1^{1 aa} = −∂_t v; G_2^{2 00} = G_2^{2 aa} = v
                set(&mut t, TensorKind::A, &[1, 1, 0, 0, 0, 2], 1.0);
                for a in 1..DIM {
                    set(&mut t, TensorKind::A, &[1, 1, a, a, 0, 2], -1.0);
                    set(&mut t, TensorKind::B, &[2, 2, a, a, 2], 1.0);
                }
                set(&mut t, TensorKind::B, &[2, 2, 0, 0, 2], 1.0);
                set(&mut t, TensorKind::P, &[1, 0, 0, 1, 1], 1.0);
                for a in 1..DIM {
                    set(&mut t, TensorKind::P, &[1, a, a, 1, 1], -1.0);
                }
            }
        }
        t
    }

    pub fn system(&self) -> Result<SystemSpec> {
        let t = self.tensors();
        let masses = (1..=t.n())
            .map(|c| if t.is_wave(c) { 0.0 } else { 1.0 })
            .collect();
        SystemSpec::new(t, masses, *self == Preset::QuasilinearToy)
    }

    /// Bump data of amplitude `epsilon` in every component, zero velocity.
    pub fn data(&self, b: f64, epsilon: f64) -> InitialData {
        let n = self.tensors().n();
        InitialData::Bump {
            b,
            amps: vec![(epsilon, 0.0); n],
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .iter()
            .find(|p| p.name() == s)
            .copied()
            .ok_or_else(|| SolverError::Config(format!("unknown preset `{s}`")))
    }
}
