use crate::geometry::SpacetimePoint;

use super::{FieldError, Result};

pub type Mat4 = [[f64; 4]; 4];

/// Transition matrices between the natural frame `∂_α` and the null-adapted
/// frame `{∂_t, ∂̃_1, ∂̃_2, ∂̃_3}`.
///
/// `phi[α][β]` maps natural derivatives to frame derivatives, `psi` is its inverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameMatrices {
    pub phi: Mat4,
    pub psi: Mat4,
}

impl FrameMatrices {
    pub fn from_direction(omega: [f64; 3]) -> Self {
        let mut phi = identity();
        let mut psi = identity();
        for i in 0..3 {
            phi[i + 1][0] = omega[i];
            psi[i + 1][0] = -omega[i];
        }
        FrameMatrices { phi, psi }
    }

    pub fn at(p: &SpacetimePoint) -> Result<Self> {
        let omega = p.omega().map_err(|e| FieldError::Domain(e.to_string()))?;
        Ok(Self::from_direction(omega))
    }

    /// Column `0` of `psi`: the covector whose contractions give all-zero frame components.
    pub fn null_column(&self) -> [f64; 4] {
        [
            self.psi[0][0],
            self.psi[1][0],
            self.psi[2][0],
            self.psi[3][0],
        ]
    }
}

pub fn identity() -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut c = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

/// `Mᵀ T M`.
fn congruence(m: &Mat4, t: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for a2 in 0..4 {
        for b2 in 0..4 {
            let mut s = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    s += m[a][a2] * m[b][b2] * t[a][b];
                }
            }
            out[a2][b2] = s;
        }
    }
    out
}

/// Frame components `T̲^{α′β′} = Ψ_α^{α′}Ψ_β^{β′}T^{αβ}` of a contravariant two-tensor.
pub fn frame_transform_two_tensor(t: &Mat4, p: &SpacetimePoint) -> Result<Mat4> {
    Ok(FrameMatrices::at(p)?.to_frame(t))
}

impl FrameMatrices {
    pub fn to_frame(&self, t: &Mat4) -> Mat4 {
        congruence(&self.psi, t)
    }

    /// Inverse of [`FrameMatrices::to_frame`].
    pub fn from_frame(&self, t: &Mat4) -> Mat4 {
        congruence(&self.phi, t)
    }
}
