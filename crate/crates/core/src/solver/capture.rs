use std::sync::Arc;

use crate::energy::FieldJetOnSlice;
use crate::geometry::HyperboloidSlice;

use super::grid::CauchyState;
use super::system::SystemSpec;
use super::{Result, SolverError};

/// Cubic Lagrange weights (and their `r`-derivatives) on grid points `k0 − 1 ..= k0 + 2`.
pub(crate) fn lagrange_stencil(r: f64, dr: f64) -> (isize, [f64; 4], [f64; 4]) {
    let x = r / dr;
    let k0 = x.floor();
    let s = x - k0;
    let w = [
        -s * (s - 1.0) * (s - 2.0) / 6.0,
        (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
        -(s + 1.0) * s * (s - 2.0) / 2.0,
        (s + 1.0) * s * (s - 1.0) / 6.0,
    ];
    let d = [
        -(3.0 * s * s - 6.0 * s + 2.0) / 6.0 / dr,
        (3.0 * s * s - 4.0 * s - 1.0) / 2.0 / dr,
        -(3.0 * s * s - 2.0 * s - 2.0) / 2.0 / dr,
        (3.0 * s * s - 1.0) / 6.0 / dr,
    ];
    (k0 as isize, w, d)
}

/// Grid value with even reflection through the axis and zero past the end.
#[inline]
pub(crate) fn fetch(a: &[f64], k: isize) -> f64 {
    let k = k.unsigned_abs();
    a.get(k).copied().unwrap_or(0.0)
}

/// Cubic Hermite basis on `[0, 1]`: weights of `(y₀, h·y₀′, y₁, h·y₁′)`.
#[inline]
pub(crate) fn hermite(theta: f64) -> [f64; 4] {
    let t2 = theta * theta;
    let t3 = t2 * theta;
    [
        2.0 * t3 - 3.0 * t2 + 1.0,
        t3 - 2.0 * t2 + theta,
        -2.0 * t3 + 3.0 * t2,
        t3 - t2,
    ]
}

/// Two consecutive time levels with values, velocities and accelerations.
pub(crate) struct Bracket<'a> {
    pub t0: f64,
    pub t1: f64,
    pub u0: &'a [Vec<f64>],
    pub ut0: &'a [Vec<f64>],
    pub acc0: &'a [Vec<f64>],
    pub u1: &'a [Vec<f64>],
    pub ut1: &'a [Vec<f64>],
    pub acc1: &'a [Vec<f64>],
}

impl Bracket<'_> {
    /// `(u, ∂_t u, ∂_r u)` of component `c` at `(t, r)`: Hermite in time, cubic in space.
    pub fn sample(&self, c: usize, t: f64, r: f64, dr: f64) -> (f64, f64, f64) {
        let h = self.t1 - self.t0;
        let hw = hermite(((t - self.t0) / h).clamp(0.0, 1.0));
        let (k0, w, d) = lagrange_stencil(r, dr);
        let (mut u, mut ut, mut ur) = (0.0, 0.0, 0.0);
        for m in 0..4 {
            let k = k0 - 1 + m as isize;
            let uk = hw[0] * fetch(&self.u0[c], k)
                + hw[1] * h * fetch(&self.ut0[c], k)
                + hw[2] * fetch(&self.u1[c], k)
                + hw[3] * h * fetch(&self.ut1[c], k);
            let vk = hw[0] * fetch(&self.ut0[c], k)
                + hw[1] * h * fetch(&self.acc0[c], k)
                + hw[2] * fetch(&self.ut1[c], k)
                + hw[3] * h * fetch(&self.acc1[c], k);
            u += w[m] * uk;
            ut += w[m] * vk;
            ur += d[m] * uk;
        }
        (u, ut, ur)
    }
}

/// Field values sampled on one hyperboloid slice.
#[derive(Debug, Clone, PartialEq)]
pub struct CapturedSlice {
    pub big_t: f64,
    pub slice: Arc<HyperboloidSlice>,
    /// Per component, per node.
    pub u: Vec<Vec<f64>>,
    pub ut: Vec<Vec<f64>>,
    pub ur: Vec<Vec<f64>>,
    /// Number of nodes reached by the run.
    pub filled: usize,
    pub reached: Vec<bool>,
}

impl CapturedSlice {
    pub fn complete(&self) -> bool {
        self.filled == self.slice.len()
    }

    /// Whether every node with `r ≤ t/2` was reached.
    pub fn interior_complete(&self) -> bool {
        self.slice
            .nodes
            .iter()
            .zip(&self.reached)
            .all(|(n, &hit)| hit || n.r > 0.5 * n.t)
    }

    /// The part of the slice reached by the run, as a slice of its own.
    pub fn covered(&self) -> CapturedSlice {
        if self.complete() {
            return self.clone();
        }
        let keep: Vec<usize> = (0..self.slice.len()).filter(|&k| self.reached[k]).collect();
        let pick = |v: &Vec<Vec<f64>>| {
            v.iter()
                .map(|c| keep.iter().map(|&k| c[k]).collect())
                .collect()
        };
        let slice = HyperboloidSlice {
            T: self.slice.T,
            region: self.slice.region,
            nodes: keep.iter().map(|&k| self.slice.nodes[k]).collect(),
        };
        CapturedSlice {
            big_t: self.big_t,
            filled: keep.len(),
            reached: vec![true; keep.len()],
            slice: Arc::new(slice),
            u: pick(&self.u),
            ut: pick(&self.ut),
            ur: pick(&self.ur),
        }
    }

    /// One jet per component for the energy module.
    pub fn jets(&self, spec: &SystemSpec) -> Result<Vec<FieldJetOnSlice>> {
        if !self.complete() {
            return Err(SolverError::Coverage(format!(
                "H_{} reached at {} of {} nodes",
                self.big_t,
                self.filled,
                self.slice.len()
            )));
        }
        (0..spec.n())
            .map(|c| {
                FieldJetOnSlice::from_radial(
                    self.slice.clone(),
                    spec.masses[c],
                    self.u[c].clone(),
                    self.ut[c].clone(),
                    self.ur[c].clone(),
                )
                .map_err(SolverError::from)
            })
            .collect()
    }
}

/// Fills slice nodes as the evolution sweeps past their times.
#[derive(Debug, Clone)]
pub(crate) struct OnlineCapture {
    slices: Vec<(CapturedSlice, Vec<usize>)>,
}

impl OnlineCapture {
    pub fn new(slices: Vec<Arc<HyperboloidSlice>>, n: usize) -> Self {
        let slices = slices
            .into_iter()
            .map(|s| {
                let len = s.len();
                let mut order: Vec<usize> = (0..len).collect();
                order.sort_by(|&a, &b| s.nodes[a].t.total_cmp(&s.nodes[b].t));
                (
                    CapturedSlice {
                        big_t: s.T,
                        slice: s,
                        u: vec![vec![0.0; len]; n],
                        ut: vec![vec![0.0; len]; n],
                        ur: vec![vec![0.0; len]; n],
                        filled: 0,
                        reached: vec![false; len],
                    },
                    order,
                )
            })
            .collect();
        OnlineCapture { slices }
    }

    /// Samples every node with `t ≤ bracket.t1` not yet filled.
    pub fn advance(&mut self, b: &Bracket<'_>, dr: f64) {
        let slack = 1e-12 * b.t1.max(1.0);
        for (cap, order) in &mut self.slices {
            while cap.filled < order.len() {
                let idx = order[cap.filled];
                let node = cap.slice.nodes[idx];
                if node.t > b.t1 + slack {
                    break;
                }
                for c in 0..cap.u.len() {
                    let (u, ut, ur) = b.sample(c, node.t, node.r, dr);
                    cap.u[c][idx] = u;
                    cap.ut[c][idx] = ut;
                    cap.ur[c][idx] = ur;
                }
                cap.reached[idx] = true;
                cap.filled += 1;
            }
        }
    }

    pub fn finish(self) -> Vec<CapturedSlice> {
        self.slices.into_iter().map(|(c, _)| c).collect()
    }
}

/// A stored time level for post-hoc interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub u: Vec<Vec<f64>>,
    pub ut: Vec<Vec<f64>>,
    pub acc: Vec<Vec<f64>>,
}

impl Snapshot {
    /// Copies the first `len` grid points of a state.
    pub fn new(state: &CauchyState, acc: &[Vec<f64>], len: usize) -> Self {
        let cut = |v: &[Vec<f64>]| v.iter().map(|c| c[..len.min(c.len())].to_vec()).collect();
        Snapshot {
            t: state.t,
            u: cut(&state.u),
            ut: cut(&state.ut),
            acc: cut(acc),
        }
    }
}

/// Interpolates stored snapshots onto every node of `slice`.
pub(crate) fn from_snapshots(
    snapshots: &[Snapshot],
    slice: Arc<HyperboloidSlice>,
    n: usize,
    dr: f64,
) -> Result<CapturedSlice> {
    let (first, last) = match (snapshots.first(), snapshots.last()) {
        (Some(f), Some(l)) if snapshots.len() >= 2 => (f.t, l.t),
        _ => {
            return Err(SolverError::Coverage(
                "fewer than two snapshots stored".into(),
            ))
        }
    };
    let len = slice.len();
    let mut cap = CapturedSlice {
        big_t: slice.T,
        u: vec![vec![0.0; len]; n],
        ut: vec![vec![0.0; len]; n],
        ur: vec![vec![0.0; len]; n],
        filled: len,
        reached: vec![true; len],
        slice,
    };
    let slack = 1e-12 * last.max(1.0);
    for (idx, node) in cap.slice.nodes.iter().enumerate() {
        if node.t < first - slack || node.t > last + slack {
            return Err(SolverError::Coverage(format!(
                "node at t = {} lies outside stored times [{first}, {last}]",
                node.t
            )));
        }
        let hi = snapshots
            .partition_point(|s| s.t < node.t)
            .clamp(1, snapshots.len() - 1);
        let (a, b) = (&snapshots[hi - 1], &snapshots[hi]);
        let br = Bracket {
            t0: a.t,
            t1: b.t,
            u0: &a.u,
            ut0: &a.ut,
            acc0: &a.acc,
            u1: &b.u,
            ut1: &b.ut,
            acc1: &b.acc,
        };
        for c in 0..n {
            let (u, ut, ur) = br.sample(c, node.t, node.r, dr);
            cap.u[c][idx] = u;
            cap.ut[c][idx] = ut;
            cap.ur[c][idx] = ur;
        }
    }
    Ok(cap)
}
