use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fields::frame::FrameMatrices;
use crate::geometry::SpacetimePoint;

use super::tensors::{CoefficientTensors, DIM};
use super::{NullError, Result};

/// A covector `ξ` with `ξ₀² = |ξ⃗|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullVector(pub [f64; 4]);

impl NullVector {
    /// `λ(s, ω)` for a sign `s = ±1` and a unit vector `ω`.
    pub fn new(sign: f64, omega: [f64; 3], scale: f64) -> Self {
        NullVector([
            sign * scale,
            scale * omega[0],
            scale * omega[1],
            scale * omega[2],
        ])
    }

    /// `ξ₀² − |ξ⃗|²` relative to `|ξ|²`.
    pub fn defect(&self) -> f64 {
        let x = self.0;
        let spatial = x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
        (x[0] * x[0] - spatial).abs() / (x[0] * x[0] + spatial)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, s: f64) -> Self {
        NullVector(self.0.map(|v| v * s))
    }
}

/// Number of axis-aligned directions always placed first.
pub const AXIS_SAMPLES: usize = 12;

/// Deterministic null covectors: the axis directions `(±1, ±e_i)` first, then
/// a low-discrepancy sphere sequence with signs and scalings in `[1/2, 2]`.
///
/// Sample `k` depends only on `k` and `seed`, so longer lists extend shorter ones.
pub fn sample_null_cone(n: usize, seed: u64) -> Vec<NullVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let offsets: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
    (0..n)
        .map(|k| {
            if k < AXIS_SAMPLES {
                let sign = if k < 6 { 1.0 } else { -1.0 };
                let m = k % 6;
                let mut omega = [0.0; 3];
                omega[m % 3] = if m < 3 { 1.0 } else { -1.0 };
                NullVector::new(sign, omega, 1.0)
            } else {
                let (omega, sign, scale) = sphere_sequence(k - AXIS_SAMPLES, offsets);
                NullVector::new(sign, omega, scale)
            }
        })
        .collect()
}

/// Unit vectors from an additive recurrence; used for both null samples and ω sweeps.
pub fn sphere_point(k: usize, offsets: [f64; 3]) -> [f64; 3] {
    sphere_sequence(k, offsets).0
}

fn sphere_sequence(k: usize, offsets: [f64; 3]) -> ([f64; 3], f64, f64) {
    // Additive recurrence with the generalized golden ratio of dimension 3.
    let g = 1.220_744_084_605_759_5_f64;
    let alpha = [1.0 / g, 1.0 / (g * g), 1.0 / (g * g * g)];
    let kk = (k + 1) as f64;
    let u: Vec<f64> = (0..3)
        .map(|d| (offsets[d] + kk * alpha[d]).fract())
        .collect();
    let z = 1.0 - 2.0 * u[0];
    let phi = std::f64::consts::TAU * u[1];
    let s = (1.0 - z * z).max(0.0).sqrt();
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let scale = 0.5 * 4f64.powf(u[2]);
    ([s * phi.cos(), s * phi.sin(), z], sign, scale)
}

/// Outcome of a null or weak-null check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullVerdict {
    pub passed: bool,
    /// Largest `|contraction| / |ξ|^degree` found.
    pub max_violation: f64,
    /// Coefficient scale `K` the tolerance was applied against.
    pub scale: f64,
}

pub const DEFAULT_NULL_TOL: f64 = 1e-12;

/// Largest normalized contraction of the wave-wave blocks of `A`, `B`, `P` with `ξ`.
fn max_contraction(c: &CoefficientTensors, xi: &[f64; 4], norm: f64) -> f64 {
    let waves = 1..=c.j0;
    let mut worst = 0.0f64;
    for i in waves.clone() {
        for j in waves.clone() {
            for k in waves.clone() {
                let mut a = 0.0;
                let mut b = 0.0;
                let mut p = 0.0;
                for al in 0..DIM {
                    for be in 0..DIM {
                        let xx = xi[al] * xi[be];
                        b += c.b(i, j, al, be, k) * xx;
                        p += c.p(i, al, be, j, k) * xx;
                        for ga in 0..DIM {
                            a += c.a(i, j, al, be, ga, k) * xx * xi[ga];
                        }
                    }
                }
                worst = worst
                    .max(a.abs() / norm.powi(3))
                    .max(b.abs() / norm.powi(2))
                    .max(p.abs() / norm.powi(2));
            }
        }
    }
    worst
}

fn verdict(max_violation: f64, scale: f64, tol: f64) -> NullVerdict {
    NullVerdict {
        passed: max_violation <= tol * scale,
        max_violation,
        scale,
    }
}

/// Null condition on the wave-wave blocks over `samples`.
pub fn check_null_condition(
    c: &CoefficientTensors,
    samples: &[NullVector],
    tol: f64,
) -> NullVerdict {
    let worst = samples
        .iter()
        .map(|xi| max_contraction(c, &xi.0, xi.norm()))
        .fold(0.0, f64::max);
    verdict(worst, c.magnitude(), tol)
}

/// All-zero frame components of the wave-wave blocks for the frame at `omega`:
/// every Greek index of `A`, `B`, `P` contracted with column `0` of `Ψ`.
pub fn frame_zero_components(c: &CoefficientTensors, omega: [f64; 3]) -> f64 {
    let col = FrameMatrices::from_direction(omega).null_column();
    max_contraction(c, &col, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakNullReport {
    /// Frame at the direction of the given point.
    pub at_point: NullVerdict,
    /// Worst over sampled directions.
    pub sampled: NullVerdict,
    pub directions: usize,
}

impl WeakNullReport {
    pub fn passed(&self) -> bool {
        self.at_point.passed && self.sampled.passed
    }
}

/// Weak null condition: vanishing of `A̲^{000}`, `B̲^{00}`, `P̲^{00}` on wave blocks,
/// both at the direction of `p` and over `n_directions` sampled unit vectors.
pub fn check_weak_null(
    c: &CoefficientTensors,
    p: &SpacetimePoint,
    n_directions: usize,
    seed: u64,
    tol: f64,
) -> Result<WeakNullReport> {
    let omega = p.omega().map_err(|e| NullError::Domain(e.to_string()))?;
    let scale = c.magnitude();
    let at_point = verdict(frame_zero_components(c, omega), scale, tol);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x005e_ed0f_0e6a);
    let offsets: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
    let worst = (0..n_directions)
        .map(|k| frame_zero_components(c, sphere_point(k, offsets)))
        .fold(0.0, f64::max);
    Ok(WeakNullReport {
        at_point,
        sampled: verdict(worst, scale, tol),
        directions: n_directions,
    })
}
