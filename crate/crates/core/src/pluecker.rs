//! The Plücker inner product `w(P,Q₀) = ⟨u₁∧…∧u_m, ε₁∧…∧ε_m⟩` of two oriented
//! m-planes and its reciprocal `v = 1/w`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jordan::jordan_decomposition;
use crate::subspace::Subspace;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WValue {
    pub w: f64,
    /// `(m, n)`: plane dimension and codimension.
    pub pair_dims: (usize, usize),
    /// `Π cos θ_α` over the Jordan angles; equals `|w|`.
    pub angle_product: f64,
}

fn check_planes(p: &Subspace, q0: &Subspace) -> Result<()> {
    if p.ambient_dim() != q0.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: p.ambient_dim(),
            found: q0.ambient_dim(),
        });
    }
    if p.dim() != q0.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q0.dim(),
        });
    }
    Ok(())
}

/// `det [⟨u_a, ε_b⟩]` over oriented frames, via LU with partial pivoting.
pub fn w_determinant(p: &Subspace, q0: &Subspace) -> Result<f64> {
    check_planes(p, q0)?;
    Ok((p.oriented_frame().transpose() * q0.oriented_frame()).determinant())
}

/// The w-function together with the angle product diagnostic.
pub fn w_inner(p: &Subspace, q0: &Subspace) -> Result<WValue> {
    let w = w_determinant(p, q0)?;
    let dec = jordan_decomposition(p, q0, tol::CLUSTER)?;
    let angle_product = dec.angles().iter().map(|t| t.cos()).product();
    Ok(WValue {
        w,
        pair_dims: (p.dim(), p.ambient_dim() - p.dim()),
        angle_product,
    })
}

/// `v = 1/w`, defined only where `w > 1e-12`.
pub fn v_value(p: &Subspace, q0: &Subspace) -> Result<f64> {
    let w = w_determinant(p, q0)?;
    if w <= tol::W_POSITIVE {
        return Err(Error::NonPositiveW { w });
    }
    Ok(1.0 / w)
}

/// `w(P, −Q₀)`, which is `−w(P,Q₀)`.
pub fn orientation_flip(p: &Subspace, q0: &Subspace) -> Result<f64> {
    w_determinant(p, &q0.reversed())
}
