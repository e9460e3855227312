//! Hyperboloidal foliation of the forward light cone.
//!
//! Leaves are the hyperboloids `H_T = {t² − |x|² = T², t > 0}`. The solution
//! region is the truncated cone `Λ′ = {|x| ≤ t − 1}`, on which every
//! `H_T` with `T ≥ 1` is a compact cap. Slice quadrature is radial: nodes lie
//! on the positive x¹ axis and weights carry the `4πr²` shell factor, which is
//! exact for rotation-invariant integrands. A spherical tensor-product rule is
//! provided for non-radial integrands.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("empty slice: H_{radius} ∩ {region:?} contains no points")]
    EmptySlice { radius: f64, region: SliceRegion },
    #[error("invalid quadrature size {0}")]
    NodeCount(usize),
}

pub type Result<T> = std::result::Result<T, GeometryError>;

/// A spacetime event `(t, x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimePoint {
    pub t: f64,
    pub x: [f64; 3],
}

impl SpacetimePoint {
    pub fn new(t: f64, x: [f64; 3]) -> Self {
        SpacetimePoint { t, x }
    }

    /// Point at radius `r` on the positive x¹ axis.
    pub fn radial(t: f64, r: f64) -> Self {
        SpacetimePoint {
            t,
            x: [r, 0.0, 0.0],
        }
    }

    pub fn r(&self) -> f64 {
        norm3(&self.x)
    }

    /// Unit direction `ωⁱ = xⁱ/r`; undefined on the axis.
    pub fn omega(&self) -> Result<[f64; 3]> {
        let r = self.r();
        if r == 0.0 {
            return Err(GeometryError::Domain(
                "ω = x/r is undefined at r = 0".into(),
            ));
        }
        Ok([self.x[0] / r, self.x[1] / r, self.x[2] / r])
    }

    pub fn lorentz_radius(&self) -> Result<f64> {
        lorentz_radius(self.t, self.r())
    }
}

pub(crate) fn norm3(x: &[f64; 3]) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

/// Time coordinate of the point of `H_T` above spatial radius `r`.
#[allow(non_snake_case)]
pub fn hyperboloid_time(T: f64, r: f64) -> Result<f64> {
    if !(T > 0.0) {
        return Err(GeometryError::Domain(format!(
            "hyperboloid radius must be positive, got {T}"
        )));
    }
    Ok(T.hypot(r))
}

/// `T = √(t² − r²)`; fails outside the open cone.
pub fn lorentz_radius(t: f64, r: f64) -> Result<f64> {
    if !(t > r.abs()) {
        return Err(GeometryError::Domain(format!(
            "point (t={t}, r={r}) is not inside the light cone"
        )));
    }
    Ok(((t - r) * (t + r)).sqrt())
}

/// Ratio `dσ/dx = t⁻¹√(t² + r²)` of the induced area element to coordinate measure.
pub fn area_element_factor(t: f64, r: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(GeometryError::Domain(format!(
            "area element needs t > 0, got {t}"
        )));
    }
    Ok(t.hypot(r) / t)
}

/// Spacetime regions of the foliation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    /// `Λ′ = {r ≤ t − 1}` (closed).
    LambdaPrime,
    /// `G_{T1}^{T2} = Λ′ ∩ {T1 ≤ √(t² − r²) ≤ T2}`.
    Slab { t1: f64, t2: f64 },
    /// `{r ≤ t/2}`.
    InteriorCone,
    /// `{r ≥ t/2}`.
    ExteriorCone,
}

impl Region {
    pub fn slab(t1: f64, t2: f64) -> Result<Self> {
        if !(t1 <= t2) {
            return Err(GeometryError::Domain(format!(
                "slab requires T1 ≤ T2, got {t1} > {t2}"
            )));
        }
        Ok(Region::Slab { t1, t2 })
    }

    pub fn contains(&self, p: &SpacetimePoint) -> bool {
        let r = p.r();
        match *self {
            Region::LambdaPrime => r <= p.t - 1.0,
            Region::Slab { t1, t2 } => {
                r <= p.t - 1.0 && lorentz_radius(p.t, r).is_ok_and(|s| (t1..=t2).contains(&s))
            }
            Region::InteriorCone => r <= 0.5 * p.t,
            Region::ExteriorCone => r >= 0.5 * p.t,
        }
    }
}

/// Which part of a hyperboloid a slice covers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SliceRegion {
    /// `H_T ∩ Λ′`.
    Cone,
    /// `H_T ∩ Λ′ ∩ {r ≤ t/2}`.
    Interior,
    /// `H_T ∩ Λ′ ∩ {r ≥ t/2}`.
    Exterior,
    /// `H_T ∩ {r ≤ R}`, ignoring `Λ′`.
    Ball(f64),
}

impl SliceRegion {
    /// Radial extent `[r_lo, r_hi]` of the region on `H_T`, or `None` if empty.
    #[allow(non_snake_case)]
    pub fn radial_extent(&self, T: f64) -> Option<(f64, f64)> {
        // r ≤ t − 1 on H_T  ⇔  r ≤ (T² − 1)/2
        let cone_hi = 0.5 * (T * T - 1.0);
        // r ≤ t/2 on H_T  ⇔  r ≤ T/√3
        let half = T / 3f64.sqrt();
        let (lo, hi) = match *self {
            SliceRegion::Cone => (0.0, cone_hi),
            SliceRegion::Interior => (0.0, cone_hi.min(half)),
            SliceRegion::Exterior => (half, cone_hi),
            SliceRegion::Ball(radius) => (0.0, radius),
        };
        (hi >= lo && hi >= 0.0).then_some((lo, hi))
    }

    /// Time extent `[t_lo, t_hi]` of the region on `H_T`.
    #[allow(non_snake_case)]
    pub fn time_extent(&self, T: f64) -> Option<(f64, f64)> {
        self.radial_extent(T)
            .map(|(lo, hi)| (T.hypot(lo), T.hypot(hi)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuadratureRule {
    /// Composite midpoint, second order.
    #[default]
    Midpoint,
    /// Composite 4-point Gauss–Legendre panels.
    GaussPanels,
}

pub const DEFAULT_SLICE_NODES: usize = 512;

/// One quadrature node on a hyperboloid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceNode {
    pub x: [f64; 3],
    pub r: f64,
    pub t: f64,
    /// Coordinate-measure (`dx`) weight.
    pub weight: f64,
}

impl SliceNode {
    pub fn point(&self) -> SpacetimePoint {
        SpacetimePoint::new(self.t, self.x)
    }
}

/// A quadrature rule on `H_T` restricted to a region. Immutable once built.
#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq)]
pub struct HyperboloidSlice {
    pub T: f64,
    pub region: SliceRegion,
    pub nodes: Vec<SliceNode>,
}

impl HyperboloidSlice {
    /// Integrates `g` against the coordinate measure `dx`.
    pub fn integrate<F: FnMut(&SliceNode) -> f64>(&self, mut g: F) -> f64 {
        self.nodes.iter().map(|n| n.weight * g(n)).sum()
    }

    /// Integrates `g` against the induced area element `dσ`.
    pub fn integrate_area<F: FnMut(&SliceNode) -> f64>(&self, mut g: F) -> f64 {
        self.nodes
            .iter()
            .map(|n| n.weight * n.t.hypot(n.r) / n.t * g(n))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Largest `|t² − r² − T²| / T²` over the nodes.
    pub fn max_shell_residual(&self) -> f64 {
        let t2 = self.T * self.T;
        self.nodes
            .iter()
            .map(|n| (n.t * n.t - n.r * n.r - t2).abs() / t2)
            .fold(0.0, f64::max)
    }
}

/// Radial quadrature on `H_T ∩ region` approximating `∫ g(|x|) dx = 4π∫ g(r) r² dr`.
#[allow(non_snake_case)]
pub fn build_slice(
    T: f64,
    region: SliceRegion,
    n_nodes: usize,
    rule: QuadratureRule,
) -> Result<HyperboloidSlice> {
    if !(T > 0.0) {
        return Err(GeometryError::Domain(format!(
            "hyperboloid radius must be positive, got {T}"
        )));
    }
    if n_nodes < 8 {
        return Err(GeometryError::NodeCount(n_nodes));
    }
    let (lo, hi) = region
        .radial_extent(T)
        .filter(|(lo, hi)| hi > lo)
        .ok_or(GeometryError::EmptySlice { radius: T, region })?;
    let nodes = radial_rule(lo, hi, n_nodes, rule)
        .into_iter()
        .map(|(r, w)| SliceNode {
            x: [r, 0.0, 0.0],
            r,
            t: T.hypot(r),
            weight: 4.0 * PI * r * r * w,
        })
        .collect();
    Ok(HyperboloidSlice { T, region, nodes })
}

/// Spherical tensor-product quadrature on `H_T ∩ region` for non-radial integrands:
/// radial rule × Gauss–Legendre in `cos θ` × uniform in `φ`.
#[allow(non_snake_case)]
pub fn build_slice_3d(
    T: f64,
    region: SliceRegion,
    n_r: usize,
    n_theta: usize,
    n_phi: usize,
) -> Result<HyperboloidSlice> {
    if !(T > 0.0) {
        return Err(GeometryError::Domain(format!(
            "hyperboloid radius must be positive, got {T}"
        )));
    }
    if n_r < 8 || n_theta < 2 || n_phi < 3 {
        return Err(GeometryError::NodeCount(n_r.min(n_theta).min(n_phi)));
    }
    let (lo, hi) = region
        .radial_extent(T)
        .filter(|(lo, hi)| hi > lo)
        .ok_or(GeometryError::EmptySlice { radius: T, region })?;
    let radial = radial_rule(lo, hi, n_r, QuadratureRule::GaussPanels);
    let (mu, wmu) = gauss_legendre(n_theta);
    let dphi = 2.0 * PI / n_phi as f64;
    let mut nodes = Vec::with_capacity(radial.len() * n_theta * n_phi);
    for &(r, wr) in &radial {
        let t = T.hypot(r);
        for (&c, &wc) in mu.iter().zip(&wmu) {
            let s = (1.0 - c * c).sqrt();
            for k in 0..n_phi {
                let phi = (k as f64 + 0.5) * dphi;
                nodes.push(SliceNode {
                    x: [r * s * phi.cos(), r * s * phi.sin(), r * c],
                    r,
                    t,
                    weight: r * r * wr * wc * dphi,
                });
            }
        }
    }
    Ok(HyperboloidSlice { T, region, nodes })
}

fn radial_rule(lo: f64, hi: f64, n: usize, rule: QuadratureRule) -> Vec<(f64, f64)> {
    match rule {
        QuadratureRule::Midpoint => {
            let h = (hi - lo) / n as f64;
            (0..n).map(|j| (lo + (j as f64 + 0.5) * h, h)).collect()
        }
        QuadratureRule::GaussPanels => {
            let (gx, gw) = gauss_legendre(4);
            let panels = (n / 4).max(1);
            let h = (hi - lo) / panels as f64;
            let mut out = Vec::with_capacity(4 * panels);
            for p in 0..panels {
                let mid = lo + (p as f64 + 0.5) * h;
                for (x, w) in gx.iter().zip(&gw) {
                    out.push((mid + 0.5 * h * x, 0.5 * h * w));
                }
            }
            out
        }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[i] = -x;
        xs[n - 1 - i] = x;
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    (xs, ws)
}

/// Result of sampling the `t`-range of a slice against its stated bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsReport {
    pub t_min: f64,
    pub t_max: f64,
    pub lower: f64,
    pub upper: f64,
    /// `max(0, lower − t, t − upper)` over samples.
    pub worst_violation: f64,
}

impl BoundsReport {
    pub fn passed(&self) -> bool {
        self.worst_violation == 0.0
    }
}

/// Samples `H_T ∩ region` (endpoints included) and checks
/// `T ≤ t ≤ T²` on the cone or `T ≤ t ≤ √2·T` on the interior.
#[allow(non_snake_case)]
pub fn region_bounds_check(T: f64, region: SliceRegion) -> Result<BoundsReport> {
    let (lower, upper) = match region {
        SliceRegion::Cone => {
            if T < 1.0 {
                return Err(GeometryError::Domain(format!(
                    "Λ′ bound needs T ≥ 1, got {T}"
                )));
            }
            (T, T * T)
        }
        SliceRegion::Interior => (T, 2f64.sqrt() * T),
        _ => {
            return Err(GeometryError::Domain(format!(
                "no t-range bound is stated for {region:?}"
            )));
        }
    };
    let (lo, hi) = region
        .radial_extent(T)
        .ok_or(GeometryError::EmptySlice { radius: T, region })?;
    const SAMPLES: usize = 1001;
    let mut report = BoundsReport {
        t_min: f64::INFINITY,
        t_max: f64::NEG_INFINITY,
        lower,
        upper,
        worst_violation: 0.0,
    };
    for k in 0..SAMPLES {
        let r = lo + (hi - lo) * k as f64 / (SAMPLES - 1) as f64;
        let t = T.hypot(r);
        report.t_min = report.t_min.min(t);
        report.t_max = report.t_max.max(t);
        report.worst_violation = report.worst_violation.max(lower - t).max(t - upper);
    }
    Ok(report)
}
