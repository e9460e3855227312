use crate::geometry::SliceNode;

use super::slice_jet::FieldJetOnSlice;
use super::{EnergyError, Result};

/// How the mass contributes to the energy density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MassNorm {
    /// `2(au)²`.
    #[default]
    Doubled,
    /// `(a/2)u²`.
    Intro,
    /// `a²u²`, the density conserved by the free Klein-Gordon flow.
    Flux,
}

impl MassNorm {
    pub fn density(&self, a: f64, u: f64) -> f64 {
        match self {
            MassNorm::Doubled => 2.0 * (a * u) * (a * u),
            MassNorm::Intro => 0.5 * a * u * u,
            MassNorm::Flux => (a * u) * (a * u),
        }
    }
}

/// The three energy integrands at one node, without the mass term.
///
/// `e1 = u_t² + |∇u|² + 2(x·∇u/t)u_t`,
/// `e2 = Σ(∂̄_i u)² + ((T/t)u_t)²`,
/// `e3 = Σ((T/t)∂_i u)² + Σ((r/t)∂_i u + ωⁱu_t)²`.
pub fn energy_integrands(node: &SliceNode, big_t: f64, ut: f64, grad: [f64; 3]) -> [f64; 3] {
    let (t, r) = (node.t, node.r);
    let g2: f64 = grad.iter().map(|g| g * g).sum();
    let xg: f64 = (0..3).map(|i| node.x[i] * grad[i]).sum();
    let e1 = ut * ut + g2 + 2.0 * xg / t * ut;
    let tt = big_t / t;
    let e2 = (0..3)
        .map(|i| (grad[i] + node.x[i] / t * ut).powi(2))
        .sum::<f64>()
        + (tt * ut).powi(2);
    let cone = if r > 0.0 {
        (0..3)
            .map(|i| (r / t * grad[i] + node.x[i] / r * ut).powi(2))
            .sum::<f64>()
    } else {
        ut * ut
    };
    let e3 = tt * tt * g2 + cone;
    [e1, e2, e3]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    pub big_t: f64,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    /// Integrated mass density, included in `e1..e3`.
    pub mass_term: f64,
    /// Curved energy; equal to `e2` unless computed with coefficients.
    pub curved: f64,
    /// Largest pairwise relative difference of `e1, e2, e3`.
    pub spread: f64,
    /// Largest pairwise relative difference of the integrands at any node.
    pub pointwise: f64,
}

impl EnergyReport {
    /// `E_m`, taken from the sum-of-squares expression.
    pub fn energy(&self) -> f64 {
        self.e2
    }
}

fn rel_spread(v: [f64; 3]) -> f64 {
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let mut d = 0.0f64;
    for i in 0..3 {
        for j in i + 1..3 {
            d = d.max((v[i] - v[j]).abs());
        }
    }
    d / scale
}

/// `E_m(T, u)` by all three expressions, integrated with the slice's `dx` weights.
#[allow(non_snake_case)]
pub fn energy_em(jet: &FieldJetOnSlice, T: f64, norm: MassNorm) -> Result<EnergyReport> {
    let big_t = jet.slice.T;
    if (big_t - T).abs() > 1e-12 * T.abs().max(1.0) {
        return Err(EnergyError::Mismatch(format!(
            "jet lives on H_{big_t}, requested H_{T}"
        )));
    }
    let mut sums = [0.0; 3];
    let mut mass_term = 0.0;
    let mut pointwise = 0.0f64;
    for (k, node) in jet.nodes().iter().enumerate() {
        let e = energy_integrands(node, big_t, jet.ut[k], jet.grad[k]);
        let m = norm.density(jet.mass, jet.u[k]);
        pointwise = pointwise.max(rel_spread(e));
        for i in 0..3 {
            sums[i] += node.weight * (e[i] + m);
        }
        mass_term += node.weight * m;
    }
    Ok(EnergyReport {
        big_t,
        e1: sums[0],
        e2: sums[1],
        e3: sums[2],
        mass_term,
        curved: sums[1],
        spread: rel_spread(sums),
        pointwise,
    })
}

/// `∫ Σ|∂̃_i u|² dx`; axis nodes carry zero weight in the radial rule and are skipped.
pub fn tangential_energy(jet: &FieldJetOnSlice) -> f64 {
    jet.nodes()
        .iter()
        .enumerate()
        .filter_map(|(k, n)| {
            jet.cone_tangent(k)
                .map(|d| n.weight * d.iter().map(|v| v * v).sum::<f64>())
        })
        .sum()
}

/// Coefficients `G_i^{jαβ}` at every node of a slice, `n` components.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvedCoefficients {
    pub n: usize,
    /// Node-major, then `[i][j][α][β]` with 0-based component indices.
    pub values: Vec<f64>,
}

impl CurvedCoefficients {
    pub fn zeros(n: usize, nodes: usize) -> Self {
        CurvedCoefficients {
            n,
            values: vec![0.0; nodes * n * n * 16],
        }
    }

    fn stride(&self) -> usize {
        self.n * self.n * 16
    }

    pub fn nodes(&self) -> usize {
        self.values.len() / self.stride().max(1)
    }

    pub fn index(&self, node: usize, i: usize, j: usize, al: usize, be: usize) -> usize {
        node * self.stride() + ((i * self.n + j) * 4 + al) * 4 + be
    }

    pub fn get(&self, node: usize, i: usize, j: usize, al: usize, be: usize) -> f64 {
        self.values[self.index(node, i, j, al, be)]
    }

    pub fn set(&mut self, node: usize, i: usize, j: usize, al: usize, be: usize, v: f64) {
        let idx = self.index(node, i, j, al, be);
        self.values[idx] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Checks `G_i^{jαβ} = G_j^{iβα}` at every node.
    pub fn check_symmetry(&self) -> Result<()> {
        let tol = 1e-12 * self.max_abs().max(1.0);
        for node in 0..self.nodes() {
            for i in 0..self.n {
                for j in 0..self.n {
                    for al in 0..4 {
                        for be in 0..4 {
                            let a = self.get(node, i, j, al, be);
                            let b = self.get(node, j, i, be, al);
                            if (a - b).abs() > tol {
                                return Err(EnergyError::Asymmetric(format!(
                                    "node {node}: G_{i}^({j} {al} {be}) = {a} but G_{j}^({i} {be} {al}) = {b}"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvedReport {
    /// `Σ_i E_m(w_i)`.
    pub flat: f64,
    /// `Σ_i E_G(w_i)`.
    pub curved: f64,
    /// The flux correction `2∫ ∂_t w_i ∂_β w_j G_i^{jαβ} n_α dx`.
    pub flux_term: f64,
    /// The bulk correction `−∫ ∂_α w_i ∂_β w_j G_i^{jαβ} dx`.
    pub bulk_term: f64,
}

/// Curved energy summed over components, with `n = (1, −xᵃ/t)`.
pub fn energy_curved(
    jets: &[FieldJetOnSlice],
    g: &CurvedCoefficients,
    norm: MassNorm,
) -> Result<CurvedReport> {
    let Some(first) = jets.first() else {
        return Err(EnergyError::Mismatch("no components".into()));
    };
    if g.n != jets.len() {
        return Err(EnergyError::Mismatch(format!(
            "{} components but G has {}",
            jets.len(),
            g.n
        )));
    }
    if g.nodes() != first.len()
        || jets
            .iter()
            .any(|j| j.len() != first.len() || j.slice != first.slice)
    {
        return Err(EnergyError::Mismatch(
            "components and coefficients must share one slice".into(),
        ));
    }
    g.check_symmetry()?;
    let big_t = first.slice.T;
    let mut flat = 0.0;
    for j in jets {
        flat += energy_em(j, big_t, norm)?.energy();
    }
    let (mut flux, mut bulk) = (0.0, 0.0);
    for (k, node) in first.nodes().iter().enumerate() {
        let dw: Vec<[f64; 4]> = jets
            .iter()
            .map(|j| [j.ut[k], j.grad[k][0], j.grad[k][1], j.grad[k][2]])
            .collect();
        let normal = [
            1.0,
            -node.x[0] / node.t,
            -node.x[1] / node.t,
            -node.x[2] / node.t,
        ];
        let (mut fl, mut bu) = (0.0, 0.0);
        for i in 0..g.n {
            for j in 0..g.n {
                for al in 0..4 {
                    for be in 0..4 {
                        let c = g.get(k, i, j, al, be);
                        if c == 0.0 {
                            continue;
                        }
                        fl += dw[i][0] * dw[j][be] * c * normal[al];
                        bu += dw[i][al] * dw[j][be] * c;
                    }
                }
            }
        }
        flux += node.weight * 2.0 * fl;
        bulk -= node.weight * bu;
    }
    Ok(CurvedReport {
        flat,
        curved: flat + flux + bulk,
        flux_term: flux,
        bulk_term: bulk,
    })
}

/// Flat metric data for the constant-time energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseMetric {
    pub g00: f64,
    pub gij: [[f64; 3]; 3],
}

impl InverseMetric {
    pub fn minkowski() -> Self {
        InverseMetric {
            g00: 1.0,
            gij: [[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]],
        }
    }
}

/// `E* = ∫ (g⁰⁰(∂_t u)² − g^{ij}∂_i u ∂_j u) dx` for radial data on a vertex grid `r_k`.
///
/// For radial data `∂_i u = ωⁱ∂_r u`; the angular average of `g^{ij}ωⁱωʲ` is `tr g / 3`.
/// The radial integral uses the trapezoid rule with weight `4πr²`.
pub fn energy_standard(r: &[f64], ut: &[f64], ur: &[f64], metric: &InverseMetric) -> Result<f64> {
    if r.len() != ut.len() || r.len() != ur.len() {
        return Err(EnergyError::Mismatch(
            "radial arrays differ in length".into(),
        ));
    }
    let tr = (metric.gij[0][0] + metric.gij[1][1] + metric.gij[2][2]) / 3.0;
    let density: Vec<f64> = (0..r.len())
        .map(|k| {
            4.0 * std::f64::consts::PI
                * r[k]
                * r[k]
                * (metric.g00 * ut[k] * ut[k] - tr * ur[k] * ur[k])
        })
        .collect();
    Ok(trapezoid(r, &density))
}

pub(crate) fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

/// One slice of an energy-inequality series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalitySample {
    pub big_t: f64,
    pub energy: f64,
    /// `‖f‖_{L²(H_T, dx)}`.
    pub source_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityRow {
    pub big_t: f64,
    /// `E_m(T)^{1/2}`.
    pub lhs: f64,
    /// `E_m(T₀)^{1/2} + ∫_{T₀}^T ‖f‖ ds`.
    pub rhs: f64,
    /// `(rhs − lhs)/rhs`; negative when violated.
    pub margin: f64,
}

/// Square-root energy inequality along a ladder starting at its first sample.
/// The source integral uses the trapezoid rule on the ladder.
pub fn energy_inequality_check(samples: &[InequalitySample]) -> Result<Vec<InequalityRow>> {
    let Some(first) = samples.first() else {
        return Ok(Vec::new());
    };
    if samples.windows(2).any(|w| !(w[1].big_t > w[0].big_t)) {
        return Err(EnergyError::Domain(
            "ladder must be strictly increasing".into(),
        ));
    }
    let base = first.energy.max(0.0).sqrt();
    let mut integral = 0.0;
    let mut rows = Vec::with_capacity(samples.len());
    for (k, s) in samples.iter().enumerate() {
        if k > 0 {
            let p = &samples[k - 1];
            integral += 0.5 * (s.big_t - p.big_t) * (s.source_norm + p.source_norm);
        }
        let lhs = s.energy.max(0.0).sqrt();
        let rhs = base + integral;
        let margin = if rhs > 0.0 {
            (rhs - lhs) / rhs
        } else if lhs == 0.0 {
            0.0
        } else {
            f64::NEG_INFINITY
        };
        rows.push(InequalityRow {
            big_t: s.big_t,
            lhs,
            rhs,
            margin,
        });
    }
    Ok(rows)
}

/// Smallest margin of a series; `0` for an empty one.
pub fn worst_margin(rows: &[InequalityRow]) -> f64 {
    if rows.is_empty() {
        return 0.0;
    }
    rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min)
}
