//! Commutator identities of the boost/partial/good-derivative algebra,
//! evaluated pointwise on exact jets.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::SpacetimePoint;
use crate::jet::Jet;

use super::field::ScalarField;
use super::operators::{apply_jet, wave_jet, CoordinateJets, FieldOperator as Op};
use super::{FieldError, Result};

/// Jet order of the base field needed by every identity.
const JET_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `[H_j, □] = 0`.
    BoostWave,
    /// `[∂_α, □] = 0`.
    PartialWave,
    /// `H_j∂_t u = ∂_t H_j u − ∂_j u`.
    BoostPartialTime,
    /// `H_j∂_i u = ∂_i H_j u − δ_ij ∂_t u`.
    BoostPartialSpace,
    /// `H_j(T/t) = −xʲT/t²`.
    BoostLorentzRatio,
    /// `H_j((T/t)∂_t u) = −(T/t)(∂_j u + (xʲ/t)∂_t u) + (T/t)∂_t(H_j u)`.
    BoostWeightedTime,
    /// `H_j((T/t)∂_i u) = −(T/t)(δ_ij∂_t u + (xʲ/t)∂_i u) + (T/t)∂_i(H_j u)`.
    BoostWeightedSpace,
    /// `H_j∂̃_i u = ∂̃_i H_j u − ωⁱ∂̃_j u + (δ_ij − ωⁱωʲ)(t/r − 1)∂_t u`.
    BoostConeTangent,
    /// `H_j((t/r − 1)∂_t u) = (t/r − 1)∂_t H_j u − ωʲ(t/r + 1)(t/r − 1)∂_t u − (t/r − 1)∂_j u`.
    BoostConeWeightedTime,
    /// `H_j((t/r − 1)∂_i u) = (t/r − 1)∂_i H_j u − ωʲ(t/r + 1)(t/r − 1)∂_i u − δ_ij(t/r − 1)∂_t u`.
    BoostConeWeightedSpace,
    /// `H_j∂̄_i u = ∂̄_j H_i u − (xʲ/t)∂̄_i u`.
    BoostTangent,
    /// `H_j ωⁱ = (δ_ij − ωⁱωʲ)t/r`.
    BoostOmega,
    /// `H_j(t/r) = −ωʲ(t/r + 1)(t/r − 1)`.
    BoostTimeOverRadius,
    /// `∂_j∂̃_i = (δ_ij − ωⁱωʲ)r⁻¹∂_t + ∂̃_i∂_j`.
    PartialConeTangentSpace,
    /// `∂_t∂̃_i = ∂̃_i∂_t`.
    PartialConeTangentTime,
    /// `∂_j(t/r − 1)∂_t = −ωʲ(t/r²)∂_t + (t/r − 1)∂_t∂_j`.
    PartialWeightedTimeBySpace,
    /// `∂_t(t/r − 1)∂_t = r⁻¹∂_t + (t/r − 1)∂_t∂_t`.
    PartialWeightedTimeByTime,
    /// `∂_j(t/r − 1)∂_i = −ωʲ(t/r²)∂_i + (t/r − 1)∂_i∂_j`.
    PartialWeightedSpaceBySpace,
    /// `∂_t(t/r − 1)∂_i = r⁻¹∂_i + (t/r − 1)∂_i∂_t`.
    PartialWeightedSpaceByTime,
    /// `(∂̃_i − ∂̄_i)u = ωⁱ T²/(t(t + r)) ∂_t u`.
    ConeMinusTangent,
}

impl Identity {
    pub const ALL: [Identity; 20] = [
        Identity::BoostWave,
        Identity::PartialWave,
        Identity::BoostPartialTime,
        Identity::BoostPartialSpace,
        Identity::BoostLorentzRatio,
        Identity::BoostWeightedTime,
        Identity::BoostWeightedSpace,
        Identity::BoostConeTangent,
        Identity::BoostConeWeightedTime,
        Identity::BoostConeWeightedSpace,
        Identity::BoostTangent,
        Identity::BoostOmega,
        Identity::BoostTimeOverRadius,
        Identity::PartialConeTangentSpace,
        Identity::PartialConeTangentTime,
        Identity::PartialWeightedTimeBySpace,
        Identity::PartialWeightedTimeByTime,
        Identity::PartialWeightedSpaceBySpace,
        Identity::PartialWeightedSpaceByTime,
        Identity::ConeMinusTangent,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Identity::BoostWave => "boost-wave",
            Identity::PartialWave => "partial-wave",
            Identity::BoostPartialTime => "boost-partial-t",
            Identity::BoostPartialSpace => "boost-partial-x",
            Identity::BoostLorentzRatio => "boost-T-over-t",
            Identity::BoostWeightedTime => "boost-weighted-t",
            Identity::BoostWeightedSpace => "boost-weighted-x",
            Identity::BoostConeTangent => "boost-cone-tangent",
            Identity::BoostConeWeightedTime => "boost-cone-weighted-t",
            Identity::BoostConeWeightedSpace => "boost-cone-weighted-x",
            Identity::BoostTangent => "boost-tangent",
            Identity::BoostOmega => "boost-omega",
            Identity::BoostTimeOverRadius => "boost-t-over-r",
            Identity::PartialConeTangentSpace => "partial-x-cone-tangent",
            Identity::PartialConeTangentTime => "partial-t-cone-tangent",
            Identity::PartialWeightedTimeBySpace => "partial-x-weighted-t",
            Identity::PartialWeightedTimeByTime => "partial-t-weighted-t",
            Identity::PartialWeightedSpaceBySpace => "partial-x-weighted-x",
            Identity::PartialWeightedSpaceByTime => "partial-t-weighted-x",
            Identity::ConeMinusTangent => "cone-minus-tangent",
        }
    }

    /// Where the identity is sampled: ω-dependent identities only on `r ≥ t/2`.
    pub fn sample_region(&self) -> SampleRegion {
        match self {
            Identity::BoostWave
            | Identity::PartialWave
            | Identity::BoostPartialTime
            | Identity::BoostPartialSpace
            | Identity::BoostLorentzRatio
            | Identity::BoostWeightedTime
            | Identity::BoostWeightedSpace
            | Identity::BoostTangent => SampleRegion::Slab,
            _ => SampleRegion::Exterior,
        }
    }

    /// Largest `|lhs − rhs|` over all index choices at `p`, and the largest `|lhs|`.
    pub fn residual_at(&self, u: &ScalarField, p: &SpacetimePoint) -> Result<(f64, f64)> {
        let jet = u.jet(p, JET_ORDER)?;
        let ctx = Ctx::new(p, jet)?;
        ctx.residual(*self)
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Identity {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .iter()
            .find(|i| i.id() == s)
            .copied()
            .ok_or_else(|| FieldError::UnknownIdentity(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleRegion {
    /// `G_2^{10}`.
    Slab,
    /// `G_2^{10} ∩ {r ≥ t/2}`.
    Exterior,
}

pub const SLAB_T_MIN: f64 = 2.0;
pub const SLAB_T_MAX: f64 = 10.0;

/// Random points of `G_2^{10}` (optionally restricted to `r ≥ t/2`), all with `r > 0`.
pub fn sample_points(region: SampleRegion, n: usize, rng: &mut ChaCha8Rng) -> Vec<SpacetimePoint> {
    (0..n)
        .map(|_| {
            #[allow(non_snake_case)]
            let T = rng.gen_range(SLAB_T_MIN..SLAB_T_MAX);
            let hi = 0.5 * (T * T - 1.0);
            let lo = match region {
                SampleRegion::Slab => 0.0,
                SampleRegion::Exterior => T / 3f64.sqrt(),
            };
            let r = lo + (hi - lo) * rng.gen_range(0.01..1.0);
            let z: f64 = rng.gen_range(-1.0..1.0);
            let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let s = (1.0 - z * z).sqrt();
            SpacetimePoint::new(T.hypot(r), [r * s * phi.cos(), r * s * phi.sin(), r * z])
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    pub identity: Identity,
    pub max_residual: f64,
    /// Largest `|lhs|` seen, for judging the residual against the field scale.
    pub scale: f64,
    pub points: usize,
}

/// Max residual of `identity` for `u` over `points`.
pub fn check_commutator(
    identity: Identity,
    u: &ScalarField,
    points: &[SpacetimePoint],
) -> Result<IdentityReport> {
    let mut report = IdentityReport {
        identity,
        max_residual: 0.0,
        scale: 0.0,
        points: points.len(),
    };
    for p in points {
        let (res, scale) = identity.residual_at(u, p)?;
        report.max_residual = report.max_residual.max(res);
        report.scale = report.scale.max(scale);
    }
    Ok(report)
}

/// Helpers on the jet of `u` at a fixed point.
pub(crate) struct Ctx {
    pub p: SpacetimePoint,
    pub u: Jet,
    pub t: f64,
    pub x: [f64; 3],
    pub r: f64,
    pub omega: [f64; 3],
    /// `T/t`
    pub tt: f64,
}

fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

impl Ctx {
    pub fn new(p: &SpacetimePoint, u: Jet) -> Result<Self> {
        let r = p.r();
        if r <= 0.0 || p.t <= r {
            return Err(FieldError::Domain(format!(
                "identity sample needs t > r > 0, got t={}, r={r}",
                p.t
            )));
        }
        Ok(Ctx {
            p: *p,
            u,
            t: p.t,
            x: p.x,
            r,
            omega: [p.x[0] / r, p.x[1] / r, p.x[2] / r],
            tt: ((p.t - r) * (p.t + r)).sqrt() / p.t,
        })
    }

    pub fn op(&self, op: Op, f: &Jet) -> Result<Jet> {
        apply_jet(op, f, &self.p)
    }

    fn coords(&self, order: usize) -> CoordinateJets {
        CoordinateJets::new(&self.p, order)
    }

    fn d(&self, a: usize) -> Jet {
        self.u.diff(a)
    }

    /// `t/r − 1`
    fn cw(&self) -> f64 {
        self.t / self.r - 1.0
    }

    fn residual(&self, id: Identity) -> Result<(f64, f64)> {
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        let mut record = |lhs: f64, rhs: f64| {
            worst = worst.max((lhs - rhs).abs());
            scale = scale.max(lhs.abs());
        };
        let u = &self.u;
        let (t, cw, tt) = (self.t, self.cw(), self.tt);
        match id {
            Identity::BoostWave => {
                let box_u = wave_jet(u)?;
                for j in 1..=3u8 {
                    let lhs = self.op(Op::Boost(j), &box_u)?.value();
                    let rhs = wave_jet(&self.op(Op::Boost(j), u)?)?.value();
                    record(lhs, rhs);
                }
            }
            Identity::PartialWave => {
                let box_u = wave_jet(u)?;
                for a in 0..=3u8 {
                    let lhs = self.op(Op::Partial(a), &box_u)?.value();
                    let rhs = wave_jet(&self.op(Op::Partial(a), u)?)?.value();
                    record(lhs, rhs);
                }
            }
            Identity::BoostPartialTime => {
                for j in 1..=3u8 {
                    let lhs = self.op(Op::Boost(j), &self.d(0))?.value();
                    let hu = self.op(Op::Boost(j), u)?;
                    let rhs = hu.diff(0).value() - self.d(j as usize).value();
                    record(lhs, rhs);
                }
            }
            Identity::BoostPartialSpace => {
                for j in 1..=3u8 {
                    let hu = self.op(Op::Boost(j), u)?;
                    for i in 1..=3usize {
                        let lhs = self.op(Op::Boost(j), &self.d(i))?.value();
                        let rhs = hu.diff(i).value() - delta(i, j as usize) * self.d(0).value();
                        record(lhs, rhs);
                    }
                }
            }
            Identity::BoostLorentzRatio => {
                let ratio = self.coords(1).lorentz_ratio()?;
                let big_t = tt * t;
                for j in 1..=3u8 {
                    let lhs = self.op(Op::Boost(j), &ratio)?.value();
                    let rhs = -self.x[j as usize - 1] * big_t / (t * t);
                    record(lhs, rhs);
                }
            }
            Identity::BoostWeightedTime | Identity::BoostWeightedSpace => {
                let ratio = self.coords(JET_ORDER - 1).lorentz_ratio()?;
                let ut = self.d(0).value();
                for j in 1..=3u8 {
                    let jj = j as usize;
                    let hu = self.op(Op::Boost(j), u)?;
                    let xj = self.x[jj - 1];
                    if id == Identity::BoostWeightedTime {
                        let lhs = self.op(Op::Boost(j), &(&ratio * &self.d(0)))?.value();
                        let rhs =
                            -tt * (self.d(jj).value() + xj / t * ut) + tt * hu.diff(0).value();
                        record(lhs, rhs);
                    } else {
                        for i in 1..=3usize {
                            let lhs = self.op(Op::Boost(j), &(&ratio * &self.d(i)))?.value();
                            let rhs = -tt * (delta(i, jj) * ut + xj / t * self.d(i).value())
                                + tt * hu.diff(i).value();
                            record(lhs, rhs);
                        }
                    }
                }
            }
            Identity::BoostConeTangent => {
                let ut = self.d(0).value();
                for j in 1..=3u8 {
                    let jj = j as usize;
                    let hu = self.op(Op::Boost(j), u)?;
                    for i in 1..=3u8 {
                        let ii = i as usize;
                        let lhs = self
                            .op(Op::Boost(j), &self.op(Op::ConeTangent(i), u)?)?
                            .value();
                        let rhs = self.op(Op::ConeTangent(i), &hu)?.value()
                            - self.omega[ii - 1] * self.op(Op::ConeTangent(j), u)?.value()
                            + (delta(ii, jj) - self.omega[ii - 1] * self.omega[jj - 1]) * cw * ut;
                        record(lhs, rhs);
                    }
                }
            }
            Identity::BoostConeWeightedTime | Identity::BoostConeWeightedSpace => {
                let cp = cw + 2.0;
                let targets: Vec<u8> = if id == Identity::BoostConeWeightedTime {
                    vec![0]
                } else {
                    vec![1, 2, 3]
                };
                for j in 1..=3u8 {
                    let jj = j as usize;
                    let hu = self.op(Op::Boost(j), u)?;
                    for &a in &targets {
                        let aa = a as usize;
                        let lhs = self
                            .op(Op::Boost(j), &self.op(Op::ConeWeighted(a), u)?)?
                            .value();
                        let tail = if a == 0 {
                            cw * self.d(jj).value()
                        } else {
                            delta(aa, jj) * cw * self.d(0).value()
                        };
                        let rhs = cw * hu.diff(aa).value()
                            - self.omega[jj - 1] * cp * cw * self.d(aa).value()
                            - tail;
                        record(lhs, rhs);
                    }
                }
            }
            Identity::BoostTangent => {
                for j in 1..=3u8 {
                    for i in 1..=3u8 {
                        let lhs = self.op(Op::Boost(j), &self.op(Op::Tangent(i), u)?)?.value();
                        let hi = self.op(Op::Boost(i), u)?;
                        let rhs = self.op(Op::Tangent(j), &hi)?.value()
                            - self.x[j as usize - 1] / t * self.op(Op::Tangent(i), u)?.value();
                        record(lhs, rhs);
                    }
                }
            }
            Identity::BoostOmega => {
                let c = self.coords(1);
                for i in 1..=3usize {
                    let om = c.omega(i)?;
                    for j in 1..=3u8 {
                        let jj = j as usize;
                        let lhs = self.op(Op::Boost(j), &om)?.value();
                        let rhs =
                            (delta(i, jj) - self.omega[i - 1] * self.omega[jj - 1]) * t / self.r;
                        record(lhs, rhs);
                    }
                }
            }
            Identity::BoostTimeOverRadius => {
                let c = self.coords(1);
                let t_over_r = &c.t * &c.r()?.recip();
                for j in 1..=3u8 {
                    let lhs = self.op(Op::Boost(j), &t_over_r)?.value();
                    let rhs = -self.omega[j as usize - 1] * (cw + 2.0) * cw;
                    record(lhs, rhs);
                }
            }
            Identity::PartialConeTangentSpace => {
                let ut = self.d(0).value();
                for i in 1..=3u8 {
                    let ii = i as usize;
                    let nd = self.op(Op::ConeTangent(i), u)?;
                    for j in 1..=3usize {
                        let lhs = nd.diff(j).value();
                        let coef = (delta(ii, j) - self.omega[ii - 1] * self.omega[j - 1]) / self.r;
                        let rhs = coef * ut + self.op(Op::ConeTangent(i), &self.d(j))?.value();
                        record(lhs, rhs);
                    }
                }
            }
            Identity::PartialConeTangentTime => {
                for i in 1..=3u8 {
                    let lhs = self.op(Op::ConeTangent(i), u)?.diff(0).value();
                    let rhs = self.op(Op::ConeTangent(i), &self.d(0))?.value();
                    record(lhs, rhs);
                }
            }
            Identity::PartialWeightedTimeBySpace | Identity::PartialWeightedSpaceBySpace => {
                let targets: Vec<usize> = if id == Identity::PartialWeightedTimeBySpace {
                    vec![0]
                } else {
                    vec![1, 2, 3]
                };
                for &a in &targets {
                    let w = self.op(Op::ConeWeighted(a as u8), u)?;
                    for j in 1..=3usize {
                        let lhs = w.diff(j).value();
                        let rhs = -self.omega[j - 1] * t / (self.r * self.r) * self.d(a).value()
                            + cw * self.d(a).diff(j).value();
                        record(lhs, rhs);
                    }
                }
            }
            Identity::PartialWeightedTimeByTime | Identity::PartialWeightedSpaceByTime => {
                let targets: Vec<usize> = if id == Identity::PartialWeightedTimeByTime {
                    vec![0]
                } else {
                    vec![1, 2, 3]
                };
                for &a in &targets {
                    let lhs = self.op(Op::ConeWeighted(a as u8), u)?.diff(0).value();
                    let rhs = self.d(a).value() / self.r + cw * self.d(a).diff(0).value();
                    record(lhs, rhs);
                }
            }
            Identity::ConeMinusTangent => {
                let big_t2 = (t - self.r) * (t + self.r);
                let ut = self.d(0).value();
                for i in 1..=3u8 {
                    let lhs = self.op(Op::ConeTangent(i), u)?.value()
                        - self.op(Op::Tangent(i), u)?.value();
                    let rhs = self.omega[i as usize - 1] * big_t2 / (t * (t + self.r)) * ut;
                    record(lhs, rhs);
                }
            }
        }
        Ok((worst, scale))
    }
}

/// Residual of the displayed approximation `(∂̃_i − ∂̄_i)u ≈ (Tωⁱ/2t)(T/t)∂_t u`,
/// which differs from the exact coefficient by the factor `2t/(t + r)`.
pub fn cone_minus_tangent_displayed_residual(u: &ScalarField, p: &SpacetimePoint) -> Result<f64> {
    let ctx = Ctx::new(p, u.jet(p, 1)?)?;
    let big_t = ctx.tt * ctx.t;
    let ut = ctx.u.diff(0).value();
    let mut worst = 0.0f64;
    for i in 1..=3u8 {
        let lhs =
            ctx.op(Op::ConeTangent(i), &ctx.u)?.value() - ctx.op(Op::Tangent(i), &ctx.u)?.value();
        let rhs = big_t * ctx.omega[i as usize - 1] / (2.0 * ctx.t) * ctx.tt * ut;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// One row of the identity battery.
#[derive(Debug, Clone, PartialEq)]
pub struct BatteryRow {
    pub identity: Identity,
    pub field: &'static str,
    pub max_residual: f64,
    pub scale: f64,
    pub passed: bool,
}

/// Runs every identity on every field of `family` at `n_points` seeded samples.
pub fn run_battery(
    family: &[(&'static str, ScalarField)],
    identities: &[Identity],
    n_points: usize,
    seed: u64,
    tol: f64,
) -> Result<Vec<BatteryRow>> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slab = sample_points(SampleRegion::Slab, n_points, &mut rng);
    let exterior = sample_points(SampleRegion::Exterior, n_points, &mut rng);
    let mut rows = Vec::new();
    for id in identities {
        let pts = match id.sample_region() {
            SampleRegion::Slab => &slab,
            SampleRegion::Exterior => &exterior,
        };
        for (name, field) in family {
            let rep = check_commutator(*id, field, pts)?;
            rows.push(BatteryRow {
                identity: *id,
                field: name,
                max_residual: rep.max_residual,
                scale: rep.scale,
                passed: rep.max_residual < tol,
            });
        }
    }
    Ok(rows)
}
