use super::fd::{hessian, jacobian, jacobian8};
use super::patch::{gauss_w, patch_at, tangent_and_normal, ImmersedPatch};
use super::Immersion;
use crate::curvature::{laplacian_v_quadratic_unchecked, SecondFundamentalFormTable};
use crate::jordan::{aligned_bases, AlignedBases};
use crate::subspace::Subspace;
use crate::{tol, Error, Result};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use std::collections::HashMap;

/// Inner step of the eighth-order Jacobian used for `v` at each stencil point
/// of the direct Laplacian, as a multiple of the outer step. The outer second
/// difference multiplies round-off in `v` by about `1/step²`, and that round-off
/// falls with the inner step. At this width the inner truncation error stays
/// far below the outer O(step²) error.
const INNER_STEP_FACTOR: f64 = 25.0;

/// `w = det[J | Q₀] / √det(JᵀJ)`, equal to `det(νᵀQ₀)` for the normal frame
/// with `det[e | ν] > 0` but free of the eigen-solver round-off that the
/// explicit normal frame carries.
fn w_from_jacobian(j: &DMatrix<f64>, q0: &Subspace) -> Result<f64> {
    let sigma_min = j.singular_values().min();
    if !(sigma_min > tol::JACOBIAN_RANK) {
        return Err(Error::RankDeficientJacobian { sigma_min });
    }
    let (rows, n) = j.shape();
    let mut full = DMatrix::zeros(rows, rows);
    full.columns_mut(0, n).copy_from(j);
    full.columns_mut(n, rows - n).copy_from(&q0.oriented_frame());
    Ok(full.determinant() / (j.transpose() * j).determinant().sqrt())
}

fn v_at(im: &dyn Immersion, q0: &Subspace, x: &DVector<f64>, inner: f64) -> Result<(f64, DMatrix<f64>)> {
    let j = jacobian8(im, x, inner)?;
    let w = w_from_jacobian(&j, q0)?;
    if w <= tol::W_POSITIVE {
        return Err(Error::NonPositiveW { w });
    }
    Ok((1.0 / w, j))
}

fn check_q0(im: &dyn Immersion, q0: &Subspace) -> Result<()> {
    if q0.ambient_dim() != im.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: im.ambient_dim(), found: q0.ambient_dim() });
    }
    if q0.dim() != im.codim() {
        return Err(Error::DimensionMismatch { expected: im.codim(), found: q0.dim() });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConelikeReport {
    /// Largest `max v − min v` along a sampled ray.
    pub variation: f64,
    pub scales: Vec<f64>,
    /// `v` at each scale, one row per ray.
    pub v_along_rays: Vec<Vec<f64>>,
}

/// Variation of `v` along the rays through `points`, sampled at `scales`.
pub fn conelike_check(
    im: &dyn Immersion,
    q0: &Subspace,
    points: &[DVector<f64>],
    scales: &[f64],
) -> Result<ConelikeReport> {
    check_q0(im, q0)?;
    let h = im.recommended_step();
    let mut rays = Vec::with_capacity(points.len());
    let mut variation: f64 = 0.0;
    for x in points {
        let mut vs = Vec::with_capacity(scales.len());
        for &s in scales {
            let (p, k) = im.ray_point(x, s);
            im.domain().check(&p, h * k)?;
            let w = w_from_jacobian(&jacobian(im, &p, h * k)?, q0)?;
            if w <= tol::W_POSITIVE {
                return Err(Error::NonPositiveW { w });
            }
            vs.push(1.0 / w);
        }
        let hi = vs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = vs.iter().copied().fold(f64::INFINITY, f64::min);
        variation = variation.max(hi - lo);
        rays.push(vs);
    }
    Ok(ConelikeReport { variation, scales: scales.to_vec(), v_along_rays: rays })
}

/// `Δv = (1/√g) ∂_i(√g g^{ij} ∂_j v)` by nested central differences with
/// outer step `step`.
pub fn laplacian_v_direct(im: &dyn Immersion, q0: &Subspace, x: &DVector<f64>, step: f64) -> Result<f64> {
    laplacian_with_inner(im, q0, x, step, INNER_STEP_FACTOR * step)
}

/// One level of Richardson extrapolation of [`laplacian_v_direct`] over the
/// outer steps `step` and `2·step`, both using the inner step of the finer
/// level so that only the outer O(step²) error cancels.
pub fn laplacian_v_direct_extrapolated(
    im: &dyn Immersion,
    q0: &Subspace,
    x: &DVector<f64>,
    step: f64,
) -> Result<f64> {
    let inner = INNER_STEP_FACTOR * step;
    let fine = laplacian_with_inner(im, q0, x, step, inner)?;
    let coarse = laplacian_with_inner(im, q0, x, 2.0 * step, inner)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

fn laplacian_with_inner(im: &dyn Immersion, q0: &Subspace, x: &DVector<f64>, step: f64, inner: f64) -> Result<f64> {
    check_q0(im, q0)?;
    let h = step;
    im.domain().check(x, 2.0 * h + 4.0 * inner)?;
    let n = im.domain_dim();
    let mut cache: HashMap<Vec<i32>, f64> = HashMap::new();
    let mut v_off = |off: Vec<i32>| -> Result<f64> {
        if let Some(v) = cache.get(&off) {
            return Ok(*v);
        }
        let y = DVector::from_fn(n, |i, _| x[i] + h * off[i] as f64);
        let (v, _) = v_at(im, q0, &y, inner)?;
        cache.insert(off, v);
        Ok(v)
    };
    let flux = |sign: i32, i: usize, v_off: &mut dyn FnMut(Vec<i32>) -> Result<f64>| -> Result<f64> {
        let mut base = vec![0i32; n];
        base[i] = sign;
        let y = DVector::from_fn(n, |k, _| x[k] + h * base[k] as f64);
        let j = jacobian8(im, &y, inner)?;
        let g = j.transpose() * &j;
        let sqrt_g = g.determinant().sqrt();
        let ginv = g.try_inverse().ok_or(Error::RankDeficientJacobian { sigma_min: 0.0 })?;
        let mut s = 0.0;
        for jj in 0..n {
            let mut p = base.clone();
            let mut q = base.clone();
            p[jj] += 1;
            q[jj] -= 1;
            let dv = (v_off(p)? - v_off(q)?) / (2.0 * h);
            s += ginv[(i, jj)] * dv;
        }
        Ok(sqrt_g * s)
    };
    let mut div = 0.0;
    for i in 0..n {
        div += (flux(1, i, &mut v_off)? - flux(-1, i, &mut v_off)?) / (2.0 * h);
    }
    let j0 = jacobian8(im, x, inner)?;
    let sqrt_g0 = (j0.transpose() * &j0).determinant().sqrt();
    Ok(div / sqrt_g0)
}

/// Second fundamental form of `patch` in the frame aligned with the Jordan
/// angles between the normal space and `Q₀`.
pub fn aligned_table(patch: &ImmersedPatch, q0: &Subspace) -> Result<(SecondFundamentalFormTable, AlignedBases)> {
    let normal = patch.normal_space()?;
    let ab = aligned_bases(&normal, q0)?;
    let c = patch.tangent_frame.transpose() * &ab.v;
    let d = patch.normal_frame.transpose() * &ab.u;
    let (n, m) = (patch.sff.n(), patch.sff.m());
    let shapes: Vec<DMatrix<f64>> = (0..m).map(|b| patch.sff.shape_matrix(b)).collect();
    let aligned: Vec<DMatrix<f64>> = (0..m)
        .map(|al| {
            let mut s = DMatrix::zeros(n, n);
            for (b, sh) in shapes.iter().enumerate() {
                s += sh * d[(b, al)];
            }
            c.transpose() * s * &c
        })
        .collect();
    let table = SecondFundamentalFormTable::from_shape_matrices(ab.lambdas(), &aligned)?;
    Ok((table, ab))
}

/// Both sides of `Δv = v · (grouped quadratic form)` at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BridgeReport {
    pub step: f64,
    pub v: f64,
    pub direct: f64,
    pub quadratic: f64,
    pub error: f64,
    pub lambdas: Vec<f64>,
}

pub fn bridge_check(im: &dyn Immersion, q0: &Subspace, x: &DVector<f64>, step: f64) -> Result<BridgeReport> {
    check_q0(im, q0)?;
    let patch = patch_at(im, x, step)?;
    let w = gauss_w(&patch, q0)?;
    if w <= tol::W_POSITIVE {
        return Err(Error::NonPositiveW { w });
    }
    let v = 1.0 / w;
    let (table, _) = aligned_table(&patch, q0)?;
    let quadratic = v * laplacian_v_quadratic_unchecked(&table);
    let direct = laplacian_v_direct(im, q0, x, step)?;
    Ok(BridgeReport {
        step,
        v,
        direct,
        quadratic,
        error: (direct - quadratic).abs(),
        lambdas: table.lambdas().to_vec(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BridgeConvergence {
    pub coarse: BridgeReport,
    pub fine: BridgeReport,
    /// `coarse.error / fine.error`; about 4 for second-order convergence.
    pub ratio: f64,
    pub noise_floor: f64,
    /// The fine error is at most a third of the coarse one, or both sit below
    /// the noise floor (both sides vanish identically).
    pub converges: bool,
}

/// Errors below this are round-off rather than truncation.
pub const BRIDGE_NOISE_FLOOR: f64 = 1e-8;

pub fn bridge_convergence(im: &dyn Immersion, q0: &Subspace, x: &DVector<f64>, step: f64) -> Result<BridgeConvergence> {
    let coarse = bridge_check(im, q0, x, step)?;
    let fine = bridge_check(im, q0, x, 0.5 * step)?;
    let ratio = coarse.error / fine.error;
    let converges = fine.error <= coarse.error / 3.0
        || coarse.error.max(fine.error) <= BRIDGE_NOISE_FLOOR;
    Ok(BridgeConvergence { coarse, fine, ratio, noise_floor: BRIDGE_NOISE_FLOOR, converges })
}

/// Normal part of the coordinate Hessian at `y`, `B_ij = 𝒫_N F_ij`.
fn normal_hessian(im: &dyn Immersion, y: &DVector<f64>, h: f64) -> Result<Vec<DVector<f64>>> {
    let j = jacobian(im, y, h)?;
    let (_, _, nf) = tangent_and_normal(&j)?;
    let center = im.eval(y)?;
    Ok(hessian(im, y, h, &center)?
        .into_iter()
        .map(|f| &nf * (nf.transpose() * f))
        .collect())
}

/// `max |(∇_{e_k}B)(e_i, e_j) − (∇_{e_i}B)(e_k, e_j)|` over frame indices and
/// normal components, from nested central differences.
pub fn codazzi_residual(im: &dyn Immersion, x: &DVector<f64>, step: f64) -> Result<f64> {
    let h = step;
    im.domain().check(x, 2.0 * h)?;
    let n = im.domain_dim();
    let j = jacobian(im, x, h)?;
    let (_, a, nf) = tangent_and_normal(&j)?;
    let center = im.eval(x)?;
    let hess = hessian(im, x, h, &center)?;
    let g = j.transpose() * &j;
    let ginv = g.try_inverse().ok_or(Error::RankDeficientJacobian { sigma_min: 0.0 })?;
    let b0: Vec<DVector<f64>> = hess.iter().map(|f| &nf * (nf.transpose() * f)).collect();
    // Γ^l_{ki} = g^{lm} ⟨F_m, F_ki⟩.
    let gamma = |l: usize, k: usize, i: usize| -> f64 {
        (0..n).map(|mm| ginv[(l, mm)] * j.column(mm).dot(&hess[k * n + i])).sum()
    };
    let mut nabla = vec![DVector::zeros(im.ambient_dim()); n * n * n];
    for k in 0..n {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[k] += h;
        xm[k] -= h;
        let bp = normal_hessian(im, &xp, h)?;
        let bm = normal_hessian(im, &xm, h)?;
        for i in 0..n {
            for jj in 0..n {
                let d = (&bp[i * n + jj] - &bm[i * n + jj]) / (2.0 * h);
                let mut cov = &nf * (nf.transpose() * d);
                for l in 0..n {
                    cov -= &b0[l * n + jj] * gamma(l, k, i);
                    cov -= &b0[i * n + l] * gamma(l, k, jj);
                }
                nabla[(k * n + i) * n + jj] = cov;
            }
        }
    }
    let mut worst: f64 = 0.0;
    for ka in 0..n {
        for ib in 0..n {
            for jc in 0..n {
                let mut diff = DVector::zeros(im.ambient_dim());
                for k in 0..n {
                    for i in 0..n {
                        for jj in 0..n {
                            let c = a[(k, ka)] * a[(i, ib)] * a[(jj, jc)];
                            if c != 0.0 {
                                diff += (&nabla[(k * n + i) * n + jj] - &nabla[(i * n + k) * n + jj]) * c;
                            }
                        }
                    }
                }
                worst = worst.max((nf.transpose() * diff).amax());
            }
        }
    }
    Ok(worst)
}
