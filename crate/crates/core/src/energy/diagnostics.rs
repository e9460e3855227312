use rayon::prelude::*;

use crate::fields::{FieldOperator, ScalarField};
use crate::geometry::{build_slice_3d, SliceRegion, SpacetimePoint};
use crate::jet::Jet;

use super::slice_jet::FieldJetOnSlice;
use super::{EnergyError, Result};

/// Spherical grid used for the Sobolev ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SobolevGrid {
    pub n_r: usize,
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for SobolevGrid {
    fn default() -> Self {
        SobolevGrid {
            n_r: 256,
            n_theta: 16,
            n_phi: 32,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevReport {
    pub big_t: f64,
    /// `sup_{H_T} t³|u|²`.
    pub sup: f64,
    /// `Σ_{|I|≤2} ‖H^I u‖²_{L²(H_T, dx)}`.
    pub norm2: f64,
    pub ratio: f64,
}

/// Values of `H^I u` for every boost word with `|I| ≤ 2` (13 words).
fn boost_values(base: &Jet, p: &SpacetimePoint) -> Result<[f64; 13]> {
    let mut out = [0.0; 13];
    out[0] = base.value();
    let mut idx = 1;
    let mut firsts = Vec::with_capacity(3);
    for b in FieldOperator::BOOSTS {
        let h = crate::fields::apply_jet(b, base, p)?;
        out[idx] = h.value();
        idx += 1;
        firsts.push(h);
    }
    for h in &firsts {
        for b in FieldOperator::BOOSTS {
            out[idx] = crate::fields::apply_jet(b, h, p)?.value();
            idx += 1;
        }
    }
    Ok(out)
}

fn weighted_square(f: &ScalarField, big_t: f64, r: f64, theta: f64, phi: f64) -> f64 {
    let t = big_t.hypot(r);
    let (s, c) = theta.sin_cos();
    let p = SpacetimePoint::new(t, [r * s * phi.cos(), r * s * phi.sin(), r * c]);
    match f.value(&p) {
        Ok(v) => t.powi(3) * v * v,
        Err(_) => 0.0,
    }
}

/// `sup_{H_T} t³|u|² / Σ_{|I|≤2}‖H^I u‖²` on `H_T ∩ Λ′`; zero for the zero field.
///
/// The supremum is taken over the quadrature nodes and then refined by a
/// pattern search around the best node.
#[allow(non_snake_case)]
pub fn sobolev_ratio(f: &ScalarField, T: f64, grid: SobolevGrid) -> Result<SobolevReport> {
    if f.budget() < 2 {
        return Err(EnergyError::Domain(
            "Sobolev ratio needs two derivatives".into(),
        ));
    }
    let slice = build_slice_3d(T, SliceRegion::Cone, grid.n_r, grid.n_theta, grid.n_phi)?;
    let per_node: Vec<(f64, f64)> = slice
        .nodes
        .par_iter()
        .map(|n| {
            let p = n.point();
            let vals = boost_values(&f.jet(&p, 2)?, &p)?;
            let norm: f64 = vals.iter().map(|v| v * v).sum();
            Ok((n.weight * norm, n.t.powi(3) * vals[0] * vals[0]))
        })
        .collect::<Result<_>>()?;
    let norm2: f64 = per_node.iter().map(|x| x.0).sum();
    let (best, _) = per_node
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (k, x)| {
            if x.1 > acc.1 {
                (k, x.1)
            } else {
                acc
            }
        });
    let sup = refine_sup(f, T, &slice.nodes[best].x, grid);
    if norm2 == 0.0 {
        if sup == 0.0 {
            return Ok(SobolevReport {
                big_t: T,
                sup,
                norm2,
                ratio: 0.0,
            });
        }
        return Err(EnergyError::Domain(
            "zero Sobolev norm for a nonzero field".into(),
        ));
    }
    Ok(SobolevReport {
        big_t: T,
        sup,
        norm2,
        ratio: sup / norm2,
    })
}

#[allow(non_snake_case)]
fn refine_sup(f: &ScalarField, T: f64, x: &[f64; 3], grid: SobolevGrid) -> f64 {
    let r_hi = 0.5 * (T * T - 1.0);
    let r0 = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let mut cur = [
        r0,
        if r0 > 0.0 { (x[2] / r0).acos() } else { 0.0 },
        x[1].atan2(x[0]),
    ];
    let mut step = [
        r_hi / grid.n_r as f64,
        std::f64::consts::PI / grid.n_theta as f64,
        std::f64::consts::TAU / grid.n_phi as f64,
    ];
    let eval = |c: &[f64; 3]| {
        if c[0] < 0.0 || c[0] > r_hi {
            f64::NEG_INFINITY
        } else {
            weighted_square(f, T, c[0], c[1], c[2])
        }
    };
    let mut best = eval(&cur);
    for _ in 0..60 {
        let mut moved = false;
        for d in 0..3 {
            for sgn in [-1.0, 1.0] {
                let mut cand = cur;
                cand[d] += sgn * step[d];
                let v = eval(&cand);
                if v > best {
                    best = v;
                    cur = cand;
                    moved = true;
                }
            }
        }
        if !moved {
            step.iter_mut().for_each(|s| *s *= 0.5);
        }
    }
    best.max(0.0)
}

/// Suprema over one region of a slice. Derivative vectors use Euclidean norms.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RegionSups {
    /// `sup |u|`
    pub value: f64,
    /// `sup t^{3/2}|∂̄u|`
    pub tangent: f64,
    /// `sup t^{3/2}(T/t)|∂u|` with `∂u = (∂_t u, ∇u)`
    pub weighted: f64,
    /// `sup t^{3/2}|au|`
    pub mass: f64,
}

impl RegionSups {
    fn absorb(&mut self, w: f64, value: f64, tangent: f64, weighted: f64, mass: f64) {
        self.value = self.value.max(value.abs());
        self.tangent = self.tangent.max(w * tangent);
        self.weighted = self.weighted.max(w * weighted);
        self.mass = self.mass.max(w * mass.abs());
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayReport {
    pub big_t: f64,
    /// Whole slice (normally `H_T ∩ Λ′`).
    pub cone: RegionSups,
    /// `r ≤ t/2`.
    pub interior: RegionSups,
    /// `sup_{r ≥ t/2} t^{3/2}|∂̃u|`.
    pub good: f64,
}

/// Weighted suprema of a field on a slice.
pub fn decay_diagnostic(jet: &FieldJetOnSlice) -> DecayReport {
    let mut cone = RegionSups::default();
    let mut interior = RegionSups::default();
    let mut good = 0.0f64;
    for (k, n) in jet.nodes().iter().enumerate() {
        let w = n.t.powf(1.5);
        let tangent = norm(&jet.tangent(k));
        let g = jet.grad[k];
        let weighted = jet.lorentz_ratio(k)
            * (jet.ut[k].powi(2) + g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
        let mass = jet.mass * jet.u[k];
        cone.absorb(w, jet.u[k], tangent, weighted, mass);
        if n.r <= 0.5 * n.t {
            interior.absorb(w, jet.u[k], tangent, weighted, mass);
        }
        if n.r >= 0.5 * n.t {
            if let Some(d) = jet.cone_tangent(k) {
                good = good.max(w * norm(&d));
            }
        }
    }
    DecayReport {
        big_t: jet.slice.T,
        cone,
        interior,
        good,
    }
}

fn norm(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}
