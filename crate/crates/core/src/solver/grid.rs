use super::system::{InitialData, SystemSpec};
use super::{Result, SolverError};

/// Ghost cells on each side of the radial grid (even mirror at the axis, zero outside).
pub const N_GHOST: usize = 2;

/// Largest Courant number accepted by the RK4 stepper.
pub const MAX_CFL: f64 = 0.5;

/// Amplitude below which a grid value counts as outside the numerical support.
pub const SUPPORT_THRESHOLD: f64 = 1e-10;

/// Vertex-centred radial grid `r_k = kΔr`, `k = 0..points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    pub r_max: f64,
    pub dr: f64,
    pub cfl: f64,
    pub n_ghost: usize,
}

impl RadialGrid {
    pub fn new(dr: f64, cfl: f64, r_max: f64) -> Result<Self> {
        if !(dr > 0.0) || !dr.is_finite() {
            return Err(SolverError::Config(format!(
                "dr must be positive, got {dr}"
            )));
        }
        if !(cfl > 0.0 && cfl <= MAX_CFL) {
            return Err(SolverError::Config(format!(
                "cfl must lie in (0, {MAX_CFL}], got {cfl}"
            )));
        }
        if !(r_max >= 4.0 * dr) {
            return Err(SolverError::Config(format!(
                "r_max = {r_max} is too small for dr = {dr}"
            )));
        }
        Ok(RadialGrid {
            r_max,
            dr,
            cfl,
            n_ghost: N_GHOST,
        })
    }

    /// A grid wide enough to hold the light cone of data supported in `r ≤ b` until `t_final`.
    pub fn for_run(b: f64, dr: f64, cfl: f64, t_final: f64) -> Result<Self> {
        Self::new(dr, cfl, t_final + b + 2.0)
    }

    pub fn dt(&self) -> f64 {
        self.cfl * self.dr
    }

    pub fn points(&self) -> usize {
        (self.r_max / self.dr).floor() as usize + 1
    }

    pub fn r(&self, k: usize) -> f64 {
        k as f64 * self.dr
    }

    pub fn radii(&self, len: usize) -> Vec<f64> {
        (0..len).map(|k| self.r(k)).collect()
    }
}

/// Discrete state at one time: per component `u_i(r_k)` and `∂_t u_i(r_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyState {
    pub t: f64,
    pub u: Vec<Vec<f64>>,
    pub ut: Vec<Vec<f64>>,
    /// Largest radius where some component exceeds [`SUPPORT_THRESHOLD`].
    pub support: f64,
}

impl CauchyState {
    pub fn zeros(n: usize, points: usize, t: f64) -> Self {
        CauchyState {
            t,
            u: vec![vec![0.0; points]; n],
            ut: vec![vec![0.0; points]; n],
            support: 0.0,
        }
    }

    pub fn from_data(data: &InitialData, grid: &RadialGrid, t: f64) -> Self {
        let n = data.components();
        let mut s = Self::zeros(n, grid.points(), t);
        for c in 0..n {
            for k in 0..grid.points() {
                let (u, ut) = data.at(c, t, grid.r(k));
                s.u[c][k] = u;
                s.ut[c][k] = ut;
            }
        }
        s.support = support_radius(&s.u, &s.ut, grid.dr, grid.points());
        s
    }

    pub fn components(&self) -> usize {
        self.u.len()
    }

    pub fn points(&self) -> usize {
        self.u.first().map_or(0, Vec::len)
    }

    /// Centred `∂_r u` of one component (zero at the axis).
    pub fn radial_derivative(&self, c: usize, dr: f64) -> Vec<f64> {
        let u = &self.u[c];
        let n = u.len();
        (0..n)
            .map(|k| {
                if k == 0 {
                    0.0
                } else {
                    let up = if k + 1 < n { u[k + 1] } else { 0.0 };
                    (up - u[k - 1]) / (2.0 * dr)
                }
            })
            .collect()
    }
}

pub(crate) fn support_radius(u: &[Vec<f64>], ut: &[Vec<f64>], dr: f64, len: usize) -> f64 {
    for k in (0..len).rev() {
        if u.iter()
            .zip(ut)
            .any(|(a, b)| a[k].abs() > SUPPORT_THRESHOLD || b[k].abs() > SUPPORT_THRESHOLD)
        {
            return k as f64 * dr;
        }
    }
    0.0
}

/// `G^{00}` and `G^{aa}` blocks held fixed over one step.
#[derive(Debug, Clone, Default)]
pub struct FrozenPrincipal {
    pub g0: Vec<f64>,
    pub g1: Vec<f64>,
}

impl FrozenPrincipal {
    pub fn from_state(spec: &SystemSpec, u: &[Vec<f64>], ut: &[Vec<f64>], active: usize) -> Self {
        let n = spec.n();
        let mut g0 = vec![0.0; active * n * n];
        let mut g1 = vec![0.0; active * n * n];
        let mut w = vec![0.0; n];
        let mut wt = vec![0.0; n];
        for k in 0..active {
            for c in 0..n {
                w[c] = u[c][k];
                wt[c] = ut[c][k];
            }
            let blk = k * n * n..(k + 1) * n * n;
            spec.principal_blocks(&w, &wt, &mut g0[blk.clone()], &mut g1[blk]);
        }
        FrozenPrincipal { g0, g1 }
    }
}

/// `∂_t²u` for every component on the first `active` grid points; later points are zero.
///
/// The axis uses the even-parity limit `Δu → 3∂_r²u`; past the last point the field is zero.
#[allow(clippy::too_many_arguments)]
pub fn rhs(
    spec: &SystemSpec,
    grid: &RadialGrid,
    t: f64,
    u: &[Vec<f64>],
    ut: &[Vec<f64>],
    frozen: Option<&FrozenPrincipal>,
    acc: &mut [Vec<f64>],
    active: usize,
) -> Result<()> {
    let n = spec.n();
    let len = u[0].len();
    let active = active.min(len);
    let dr = grid.dr;
    let inv_dr2 = 1.0 / (dr * dr);
    let mut w = vec![0.0; n];
    let mut wt = vec![0.0; n];
    let mut wr = vec![0.0; n];
    let mut lap = vec![0.0; n];
    let mut src = vec![0.0; n];
    let mut mat = vec![0.0; n * n];
    let masses2: Vec<f64> = spec.masses.iter().map(|d| d * d).collect();
    let semilinear_only = spec.sources.is_empty() && spec.forcing.iter().all(Option::is_none);
    for k in 0..active {
        let r = k as f64 * dr;
        for c in 0..n {
            let uc = &u[c];
            let mid = uc[k];
            let right = if k + 1 < len { uc[k + 1] } else { 0.0 };
            w[c] = mid;
            wt[c] = ut[c][k];
            if k == 0 {
                wr[c] = 0.0;
                lap[c] = 6.0 * (right - mid) * inv_dr2;
            } else {
                let left = uc[k - 1];
                wr[c] = (right - left) / (2.0 * dr);
                lap[c] = (right - 2.0 * mid + left) * inv_dr2 + 2.0 * wr[c] / r;
            }
        }
        if semilinear_only {
            src.iter_mut().for_each(|s| *s = 0.0);
        } else {
            spec.source(t, r, &w, &wt, &wr, &mut src);
        }
        for c in 0..n {
            src[c] += lap[c] - masses2[c] * w[c];
        }
        if let Some(fp) = frozen {
            let blk = k * n * n..(k + 1) * n * n;
            let (g0, g1) = (&fp.g0[blk.clone()], &fp.g1[blk]);
            for i in 0..n {
                for j in 0..n {
                    src[i] -= g1[i * n + j] * lap[j];
                    mat[i * n + j] = g0[i * n + j] + if i == j { 1.0 } else { 0.0 };
                }
            }
            solve_in_place(&mut mat, &mut src, n).ok_or(SolverError::NaN { t })?;
        }
        for c in 0..n {
            if !src[c].is_finite() {
                return Err(SolverError::NaN { t });
            }
            acc[c][k] = src[c];
        }
    }
    Ok(())
}

/// Gaussian elimination with partial pivoting on a row-major `n×n` system.
fn solve_in_place(a: &mut [f64], b: &mut [f64], n: usize) -> Option<()> {
    for col in 0..n {
        let piv =
            (col..n).max_by(|&x, &y| a[x * n + col].abs().total_cmp(&a[y * n + col].abs()))?;
        if a[piv * n + col].abs() < 1e-12 {
            return None;
        }
        if piv != col {
            for j in 0..n {
                a.swap(piv * n + j, col * n + j);
            }
            b.swap(piv, col);
        }
        for row in col + 1..n {
            let f = a[row * n + col] / a[col * n + col];
            for j in col..n {
                a[row * n + j] -= f * a[col * n + j];
            }
            b[row] -= f * b[col];
        }
    }
    for row in (0..n).rev() {
        let mut s = b[row];
        for j in row + 1..n {
            s -= a[row * n + j] * b[j];
        }
        b[row] = s / a[row * n + row];
    }
    Some(())
}

/// Method-of-lines integrator owning its state exclusively.
#[derive(Debug, Clone)]
pub struct Evolver<'a> {
    spec: &'a SystemSpec,
    grid: RadialGrid,
    /// Current state and its acceleration.
    pub state: CauchyState,
    pub acc: Vec<Vec<f64>>,
    /// State, acceleration and time before the last step.
    pub prev: CauchyState,
    pub prev_acc: Vec<Vec<f64>>,
    active: usize,
    /// Evolve only `r ≤ t − 1 + margin`; `None` evolves the whole grid.
    margin: Option<f64>,
    su: Vec<Vec<f64>>,
    sut: Vec<Vec<f64>>,
    sacc: Vec<Vec<f64>>,
}

impl<'a> Evolver<'a> {
    pub fn new(
        spec: &'a SystemSpec,
        grid: RadialGrid,
        state: CauchyState,
        margin: Option<f64>,
    ) -> Result<Self> {
        if state.components() != spec.n() {
            return Err(SolverError::Config(format!(
                "state has {} components, system has {}",
                state.components(),
                spec.n()
            )));
        }
        if state.points() != grid.points() {
            return Err(SolverError::Config("state does not match the grid".into()));
        }
        let n = spec.n();
        let pts = grid.points();
        let mut ev = Evolver {
            spec,
            grid,
            prev: state.clone(),
            state,
            acc: vec![vec![0.0; pts]; n],
            prev_acc: vec![vec![0.0; pts]; n],
            active: 0,
            margin,
            su: vec![vec![0.0; pts]; n],
            sut: vec![vec![0.0; pts]; n],
            sacc: vec![vec![0.0; pts]; n],
        };
        ev.active = ev.active_for(ev.state.t);
        let frozen = ev.frozen();
        rhs(
            spec,
            &ev.grid,
            ev.state.t,
            &ev.state.u,
            &ev.state.ut,
            frozen.as_ref(),
            &mut ev.acc,
            ev.active,
        )?;
        ev.prev_acc.clone_from(&ev.acc);
        Ok(ev)
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn active(&self) -> usize {
        self.active
    }

    fn active_for(&self, t: f64) -> usize {
        let pts = self.grid.points();
        match self.margin {
            None => pts,
            Some(m) => {
                let k = ((t - 1.0 + m) / self.grid.dr).ceil().max(0.0) as usize + N_GHOST;
                k.min(pts).max(self.active)
            }
        }
    }

    fn frozen(&self) -> Option<FrozenPrincipal> {
        (self.spec.quasilinear && !self.spec.principal.is_empty()).then(|| {
            FrozenPrincipal::from_state(self.spec, &self.state.u, &self.state.ut, self.active)
        })
    }

    /// One classical RK4 step of size `CFL·Δr`.
    pub fn step(&mut self) -> Result<()> {
        let dt = self.grid.dt();
        let t0 = self.state.t;
        let t1 = t0 + dt;
        self.active = self.active_for(t1);
        let act = self.active;
        let n = self.spec.n();
        let frozen = self.frozen();
        if frozen.is_some() {
            // the stored acceleration used the previous step's frozen coefficients
            rhs(
                self.spec,
                &self.grid,
                t0,
                &self.state.u,
                &self.state.ut,
                frozen.as_ref(),
                &mut self.acc,
                act,
            )?;
        }

        // prev <- y_n, accumulate y_{n+1} in prev buffers after swapping
        std::mem::swap(&mut self.prev, &mut self.state);
        std::mem::swap(&mut self.prev_acc, &mut self.acc);
        let (y, ya) = (&self.prev, &self.prev_acc);
        let next = &mut self.state;
        next.t = t1;
        for c in 0..n {
            for k in 0..act {
                next.u[c][k] = y.u[c][k] + dt / 6.0 * y.ut[c][k];
                next.ut[c][k] = y.ut[c][k] + dt / 6.0 * ya[c][k];
                self.sut[c][k] = y.ut[c][k];
                self.sacc[c][k] = ya[c][k];
            }
        }
        for (h, wgt, ts) in [
            (0.5 * dt, dt / 3.0, t0 + 0.5 * dt),
            (0.5 * dt, dt / 3.0, t0 + 0.5 * dt),
            (dt, dt / 6.0, t1),
        ] {
            for c in 0..n {
                for k in 0..act {
                    self.su[c][k] = y.u[c][k] + h * self.sut[c][k];
                    self.sut[c][k] = y.ut[c][k] + h * self.sacc[c][k];
                }
            }
            rhs(
                self.spec,
                &self.grid,
                ts,
                &self.su,
                &self.sut,
                frozen.as_ref(),
                &mut self.sacc,
                act,
            )?;
            for c in 0..n {
                for k in 0..act {
                    next.u[c][k] += wgt * self.sut[c][k];
                    next.ut[c][k] += wgt * self.sacc[c][k];
                }
            }
        }
        rhs(
            self.spec,
            &self.grid,
            t1,
            &next.u,
            &next.ut,
            frozen.as_ref(),
            &mut self.acc,
            act,
        )?;
        next.support = support_radius(&next.u, &next.ut, self.grid.dr, act);
        Ok(())
    }

    /// Largest `|u_i|` over the active region; `NaN` if any value is not finite.
    pub fn sup(&self) -> f64 {
        let mut m = 0.0f64;
        for c in &self.state.u {
            for v in &c[..self.active] {
                if !v.is_finite() {
                    return f64::NAN;
                }
                m = m.max(v.abs());
            }
        }
        m
    }
}
