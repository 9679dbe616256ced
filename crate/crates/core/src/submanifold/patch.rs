use super::fd::{hessian, jacobian};
use super::{GraphFunction, Immersion};
use crate::curvature::SecondFundamentalFormTable;
use crate::pluecker::w_determinant;
use crate::subspace::{complement_frame, mgs_qr, Orientation, Subspace};
use crate::{tol, Error, Result};
use nalgebra::{DMatrix, DVector};

/// First- and second-order data of an immersion at one domain point.
#[derive(Debug, Clone, PartialEq)]
pub struct ImmersedPatch {
    pub base_point: DVector<f64>,
    pub point: DVector<f64>,
    pub step: f64,
    pub jacobian: DMatrix<f64>,
    pub metric: DMatrix<f64>,
    /// Orthonormal `e_1..e_n`, equal to `jacobian · coord_to_frame`.
    pub tangent_frame: DMatrix<f64>,
    /// Upper-triangular change of basis from coordinate vectors to the frame.
    pub coord_to_frame: DMatrix<f64>,
    /// Orthonormal `ν_1..ν_m` with `det[e | ν] > 0`.
    pub normal_frame: DMatrix<f64>,
    /// `h_{α,ij} = ⟨B(e_i, e_j), ν_α⟩`.
    pub sff: SecondFundamentalFormTable,
    /// `H = Σ_i B(e_i, e_i)`.
    pub mean_curvature: DVector<f64>,
    /// Estimated error of `H` and the metric: the change from doubling the
    /// step divided by 3 (the O(step²) Richardson estimate), plus a round-off
    /// floor of order `ε|F|/step²`.
    pub error_budget: f64,
    pub(crate) coordinate_hessian: Vec<DVector<f64>>,
}

impl ImmersedPatch {
    pub fn normal_space(&self) -> Result<Subspace> {
        Subspace::from_orthonormal(self.normal_frame.clone(), Orientation::Positive)
    }

    pub fn tangent_space(&self) -> Result<Subspace> {
        Subspace::from_orthonormal(self.tangent_frame.clone(), Orientation::Positive)
    }

    pub fn mean_curvature_norm(&self) -> f64 {
        self.mean_curvature.norm()
    }

    /// `|H − 𝒫_N Σ g^{ij} F_ij|`, comparing the frame trace with the
    /// coordinate trace.
    pub fn trace_residual(&self) -> f64 {
        let n = self.metric.nrows();
        let ginv = self.metric.clone().try_inverse().expect("metric is SPD");
        let mut tr = DVector::zeros(self.point.len());
        for i in 0..n {
            for j in 0..n {
                tr += &self.coordinate_hessian[i * n + j] * ginv[(i, j)];
            }
        }
        let nf = &self.normal_frame;
        let proj = nf * (nf.transpose() * tr);
        (&self.mean_curvature - proj).norm()
    }
}

pub(crate) fn tangent_and_normal(j: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>, DMatrix<f64>)> {
    let sigma_min = j.singular_values().min();
    if !(sigma_min > tol::JACOBIAN_RANK) {
        return Err(Error::RankDeficientJacobian { sigma_min });
    }
    let (e, r) = mgs_qr(j);
    let a = r.try_inverse().ok_or(Error::RankDeficientJacobian { sigma_min })?;
    let mut nf = complement_frame(&e);
    let mut full = DMatrix::zeros(e.nrows(), e.nrows());
    full.columns_mut(0, e.ncols()).copy_from(&e);
    full.columns_mut(e.ncols(), nf.ncols()).copy_from(&nf);
    if full.determinant() < 0.0 {
        let c = -nf.column(0);
        nf.set_column(0, &c);
    }
    Ok((e, a, nf))
}

/// Raw central-difference data: point, Jacobian, coordinate Hessians.
struct FdData {
    point: DVector<f64>,
    jac: DMatrix<f64>,
    hess: Vec<DVector<f64>>,
}

fn fd_data(im: &dyn Immersion, x: &DVector<f64>, h: f64) -> Result<FdData> {
    let point = im.eval(x)?;
    let jac = jacobian(im, x, h)?;
    let hess = hessian(im, x, h, &point)?;
    Ok(FdData { point, jac, hess })
}

/// `(4·fine − coarse)/3`, cancelling the O(h²) term of both differences.
fn richardson(fine: &FdData, coarse: &FdData) -> FdData {
    FdData {
        point: fine.point.clone(),
        jac: (&fine.jac * 4.0 - &coarse.jac) / 3.0,
        hess: fine
            .hess
            .iter()
            .zip(&coarse.hess)
            .map(|(f, c)| (f * 4.0 - c) / 3.0)
            .collect(),
    }
}

fn patch_core(im: &dyn Immersion, x: &DVector<f64>, h: f64) -> Result<ImmersedPatch> {
    assemble(im, x, h, fd_data(im, x, h)?)
}

fn assemble(im: &dyn Immersion, x: &DVector<f64>, h: f64, data: FdData) -> Result<ImmersedPatch> {
    let n = im.domain_dim();
    let m = im.codim();
    let FdData { point, jac, hess } = data;
    let (e, a, nf) = tangent_and_normal(&jac)?;
    // Normal components of the coordinate Hessian, then the frame change.
    let coord: Vec<DMatrix<f64>> = (0..m)
        .map(|al| DMatrix::from_fn(n, n, |i, j| hess[i * n + j].dot(&nf.column(al))))
        .collect();
    let framed: Vec<DMatrix<f64>> = coord.iter().map(|c| a.transpose() * c * &a).collect();
    let sff = SecondFundamentalFormTable::from_shape_matrices(Vec::new(), &framed)?;
    let mut hvec = DVector::zeros(im.ambient_dim());
    for (al, s) in framed.iter().enumerate() {
        hvec += nf.column(al) * s.trace();
    }
    Ok(ImmersedPatch {
        base_point: x.clone(),
        metric: jac.transpose() * &jac,
        point,
        step: h,
        jacobian: jac,
        tangent_frame: e,
        coord_to_frame: a,
        normal_frame: nf,
        sff,
        mean_curvature: hvec,
        error_budget: 0.0,
        coordinate_hessian: hess,
    })
}

/// Patch at `x` from central differences with step `step`. The stencil must
/// fit in the validity box with room for the doubled step used by the error
/// estimate.
pub fn patch_at(im: &dyn Immersion, x: &DVector<f64>, step: f64) -> Result<ImmersedPatch> {
    if !(step > 0.0) {
        return Err(Error::PreconditionViolated(format!("step {step} must be positive")));
    }
    im.domain().check(x, 2.0 * step)?;
    let mut p = patch_core(im, x, step)?;
    let coarse = patch_core(im, x, 2.0 * step)?;
    let drift = (&p.mean_curvature - &coarse.mean_curvature)
        .amax()
        .max((&p.metric - &coarse.metric).amax());
    let scale = p.point.amax().max(1.0);
    p.error_budget = drift / 3.0 + 8.0 * f64::EPSILON * scale / (step * step);
    Ok(p)
}

/// Patch from one level of Richardson extrapolation of the step-`step` and
/// step-`2·step` differences, accurate to O(step⁴). The error budget compares
/// with the same extrapolation one level coarser.
pub fn patch_at_extrapolated(im: &dyn Immersion, x: &DVector<f64>, step: f64) -> Result<ImmersedPatch> {
    if !(step > 0.0) {
        return Err(Error::PreconditionViolated(format!("step {step} must be positive")));
    }
    im.domain().check(x, 4.0 * step)?;
    let d1 = fd_data(im, x, step)?;
    let d2 = fd_data(im, x, 2.0 * step)?;
    let d4 = fd_data(im, x, 4.0 * step)?;
    let coarse = assemble(im, x, 2.0 * step, richardson(&d2, &d4))?;
    let mut p = assemble(im, x, step, richardson(&d1, &d2))?;
    let drift = (&p.mean_curvature - &coarse.mean_curvature)
        .amax()
        .max((&p.metric - &coarse.metric).amax());
    let scale = p.point.amax().max(1.0);
    p.error_budget = drift / 15.0 + 16.0 * f64::EPSILON * scale / (step * step);
    Ok(p)
}

/// `w(N_x M, Q₀)` with the patch's normal orientation.
pub fn gauss_w(patch: &ImmersedPatch, q0: &Subspace) -> Result<f64> {
    w_determinant(&patch.normal_space()?, q0)
}

/// `det(I + DfᵀDf)^{1/2}` from central-difference gradients.
pub fn slope_delta(g: &GraphFunction, x: &DVector<f64>, step: f64) -> Result<f64> {
    g.domain().check(x, step)?;
    let n = g.n();
    let mut df = DMatrix::zeros(g.m(), n);
    for i in 0..n {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[i] += step;
        xm[i] -= step;
        df.set_column(i, &((g.eval(&xp)? - g.eval(&xm)?) / (2.0 * step)));
    }
    let gram = DMatrix::identity(n, n) + df.transpose() * df;
    Ok(gram.determinant().sqrt())
}
