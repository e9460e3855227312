use std::sync::Arc;

use crate::fields::ScalarField;
use crate::geometry::{HyperboloidSlice, SliceNode};

use super::{EnergyError, Result};

/// First-order data of a field at every node of a slice.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldJetOnSlice {
    pub slice: Arc<HyperboloidSlice>,
    /// Mass `a ≥ 0` of `□u + a²u = f`.
    pub mass: f64,
    pub u: Vec<f64>,
    pub ut: Vec<f64>,
    pub grad: Vec<[f64; 3]>,
}

impl FieldJetOnSlice {
    pub fn new(
        slice: Arc<HyperboloidSlice>,
        mass: f64,
        u: Vec<f64>,
        ut: Vec<f64>,
        grad: Vec<[f64; 3]>,
    ) -> Result<Self> {
        let n = slice.len();
        if u.len() != n || ut.len() != n || grad.len() != n {
            return Err(EnergyError::Mismatch(format!(
                "slice has {n} nodes but jet has {}/{}/{} entries",
                u.len(),
                ut.len(),
                grad.len()
            )));
        }
        if !(mass >= 0.0) {
            return Err(EnergyError::Domain(format!(
                "mass must be non-negative, got {mass}"
            )));
        }
        Ok(FieldJetOnSlice {
            slice,
            mass,
            u,
            ut,
            grad,
        })
    }

    /// Radial data `u(t, r)`, `∂_t u`, `∂_r u` at each node; `∇u = ω ∂_r u`.
    pub fn from_radial(
        slice: Arc<HyperboloidSlice>,
        mass: f64,
        u: Vec<f64>,
        ut: Vec<f64>,
        ur: Vec<f64>,
    ) -> Result<Self> {
        if ur.len() != slice.len() {
            return Err(EnergyError::Mismatch(format!(
                "slice has {} nodes but radial derivative has {}",
                slice.len(),
                ur.len()
            )));
        }
        let grad = slice
            .nodes
            .iter()
            .zip(&ur)
            .map(|(n, &d)| {
                if n.r > 0.0 {
                    [d * n.x[0] / n.r, d * n.x[1] / n.r, d * n.x[2] / n.r]
                } else {
                    [0.0; 3]
                }
            })
            .collect();
        Self::new(slice, mass, u, ut, grad)
    }

    /// Samples a closed-form field.
    pub fn from_field(slice: Arc<HyperboloidSlice>, mass: f64, f: &ScalarField) -> Result<Self> {
        let n = slice.len();
        let (mut u, mut ut, mut grad) = (
            Vec::with_capacity(n),
            Vec::with_capacity(n),
            Vec::with_capacity(n),
        );
        for node in &slice.nodes {
            let jet = f.jet(&node.point(), 1)?;
            u.push(jet.value());
            ut.push(jet.derivative([1, 0, 0, 0]));
            grad.push([
                jet.derivative([0, 1, 0, 0]),
                jet.derivative([0, 0, 1, 0]),
                jet.derivative([0, 0, 0, 1]),
            ]);
        }
        Self::new(slice, mass, u, ut, grad)
    }

    pub fn zeros(slice: Arc<HyperboloidSlice>, mass: f64) -> Self {
        let n = slice.len();
        FieldJetOnSlice {
            slice,
            mass,
            u: vec![0.0; n],
            ut: vec![0.0; n],
            grad: vec![[0.0; 3]; n],
        }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn nodes(&self) -> &[SliceNode] {
        &self.slice.nodes
    }

    /// `∂̄_i u = ∂_i u + (xⁱ/t)∂_t u` at node `k`.
    pub fn tangent(&self, k: usize) -> [f64; 3] {
        let n = &self.slice.nodes[k];
        let g = self.grad[k];
        [0, 1, 2].map(|i| g[i] + n.x[i] / n.t * self.ut[k])
    }

    /// `∂̃_i u = ωⁱ∂_t u + ∂_i u` at node `k`; `None` on the axis.
    pub fn cone_tangent(&self, k: usize) -> Option<[f64; 3]> {
        let n = &self.slice.nodes[k];
        if n.r <= 0.0 {
            return None;
        }
        let g = self.grad[k];
        Some([0, 1, 2].map(|i| n.x[i] / n.r * self.ut[k] + g[i]))
    }

    /// `T/t` at node `k`.
    pub fn lorentz_ratio(&self, k: usize) -> f64 {
        self.slice.T / self.slice.nodes[k].t
    }
}
