//! Jordan (principal) angles between subspaces, their angle spaces and
//! multiplicities, the anti-involutive automorphism Φ_θ on
//! `R_θ = P_θ ⊕ P_θ^⊥`, and bases of `P`, `Q₀`, `P^⊥` aligned with the angles.
//!
//! Angles come from the singular values of the cross-Gram matrix `Uᵀ E` of the
//! two frames. For θ < π/4 the cosine loses absolute accuracy, so those angles
//! (and their directions) are taken from the singular values of the projection
//! of `U` onto `Q₀^⊥`, which are the sines.

use std::f64::consts::FRAC_PI_4;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pluecker;
use crate::subspace::{complement_frame, mgs_qr, Subspace};
use crate::tol;

/// One Jordan angle with its multiplicity and an orthonormal frame of the
/// angle space `P_θ ⊂ P`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleCluster {
    pub theta: f64,
    pub multiplicity: usize,
    pub frame: DMatrix<f64>,
}

/// `(θ, multiplicity)` pair, the serializable summary of a cluster.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleClass {
    pub theta: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JordanAngleDecomposition {
    clusters: Vec<AngleCluster>,
    angles: Vec<f64>,
    directions: DMatrix<f64>,
    tolerance: f64,
}

fn check_pair(p: &Subspace, q0: &Subspace) -> Result<()> {
    if p.ambient_dim() != q0.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: p.ambient_dim(),
            found: q0.ambient_dim(),
        });
    }
    Ok(())
}

/// Right singular pairs of `m` by one-sided Jacobi, sorted by descending
/// singular value. All `ncols` right vectors are returned, so columns beyond
/// the rank carry zero singular values. Returns `(values, right_vectors)`.
///
/// nalgebra's bidiagonal SVD can lose 1e-4 relative accuracy in the middle
/// singular values of rank-deficient inputs when vectors are requested, which
/// is exactly the shape of the sine matrix for subspaces with a common
/// direction. Jacobi rotations keep small singular values to high relative
/// accuracy as well.
fn right_singular_pairs(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.ncols();
    let mut a = m.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dot(&a.column(q));
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_columns(&mut a, p, q, c, s);
                rotate_columns(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let values = idx.iter().map(|&i| norms[i]).collect();
    let cols: Vec<DVector<f64>> = idx.iter().map(|&i| v.column(i).into_owned()).collect();
    (values, DMatrix::from_columns(&cols))
}

fn rotate_columns(m: &mut DMatrix<f64>, p: usize, q: usize, c: f64, s: f64) {
    for r in 0..m.nrows() {
        let (x, y) = (m[(r, p)], m[(r, q)]);
        m[(r, p)] = c * x - s * y;
        m[(r, q)] = s * x + c * y;
    }
}

/// Computes the Jordan angles of `P` relative to `Q₀`, clustered on the cos²θ
/// scale with tolerance `cluster_tol`.
pub fn jordan_decomposition(
    p: &Subspace,
    q0: &Subspace,
    cluster_tol: f64,
) -> Result<JordanAngleDecomposition> {
    check_pair(p, q0)?;
    if !(cluster_tol > 0.0) {
        return Err(Error::PreconditionViolated(format!(
            "cluster tolerance must be positive, got {cluster_tol}"
        )));
    }
    let u = p.frame();
    let e = q0.frame();
    let k = p.dim();

    // cosines: right singular vectors of Eᵀ U live in P-coordinates
    let cross = e.transpose() * u;
    let (cosines, cos_vecs) = right_singular_pairs(&cross);
    // sines: singular values of U projected onto Q₀^⊥
    let residual = u - e * &cross;
    let (mut sines, mut sin_vecs) = right_singular_pairs(&residual);
    // ascending sine order pairs with descending cosine order
    sines.reverse();
    let sin_cols: Vec<DVector<f64>> = (0..k).rev().map(|c| sin_vecs.column(c).into_owned()).collect();
    sin_vecs = DMatrix::from_columns(&sin_cols);

    let mut thetas = Vec::with_capacity(k);
    let mut coeffs = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        let from_cos = cosines[i].min(1.0).acos();
        if from_cos < FRAC_PI_4 {
            thetas.push(sines[i].min(1.0).asin());
            coeffs.set_column(i, &sin_vecs.column(i));
        } else {
            thetas.push(from_cos);
            coeffs.set_column(i, &cos_vecs.column(i));
        }
    }
    // the two factorizations agree only up to rounding; restore exact orthogonality
    let (coeffs, _) = mgs_qr(&coeffs);

    // descending θ
    let order: Vec<usize> = (0..k).rev().collect();
    let angles: Vec<f64> = order.iter().map(|&i| thetas[i]).collect();
    let dir_cols: Vec<DVector<f64>> = order.iter().map(|&i| u * coeffs.column(i)).collect();
    let directions = DMatrix::from_columns(&dir_cols);

    let mut clusters: Vec<AngleCluster> = Vec::new();
    let mut start = 0;
    for i in 1..=k {
        let split = i == k || {
            let prev = angles[i - 1].cos().powi(2);
            let cur = angles[i].cos().powi(2);
            (prev - cur).abs() > cluster_tol
        };
        if split {
            let members = &angles[start..i];
            let theta = members.iter().sum::<f64>() / members.len() as f64;
            clusters.push(AngleCluster {
                theta,
                multiplicity: i - start,
                frame: directions.columns(start, i - start).into_owned(),
            });
            start = i;
        }
    }

    Ok(JordanAngleDecomposition {
        clusters,
        angles,
        directions,
        tolerance: cluster_tol,
    })
}

impl JordanAngleDecomposition {
    /// Clusters sorted by descending θ.
    pub fn clusters(&self) -> &[AngleCluster] {
        &self.clusters
    }

    /// Unclustered angle of each direction, descending.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Orthonormal angle directions in `P`, one column per entry of [`angles`](Self::angles).
    pub fn directions(&self) -> &DMatrix<f64> {
        &self.directions
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Cluster angles repeated by multiplicity, descending.
    pub fn angles_with_multiplicity(&self) -> Vec<f64> {
        self.clusters
            .iter()
            .flat_map(|c| std::iter::repeat(c.theta).take(c.multiplicity))
            .collect()
    }

    pub fn classes(&self) -> Vec<AngleClass> {
        self.clusters
            .iter()
            .map(|c| AngleClass {
                theta: c.theta,
                multiplicity: c.multiplicity,
            })
            .collect()
    }

    /// A cluster is the zero angle when it would merge with cos²θ = 1.
    pub fn is_zero(&self, cluster: &AngleCluster) -> bool {
        cluster.theta.sin().powi(2) <= self.tolerance
    }

    /// Total multiplicity of the nonzero angles.
    pub fn nonzero_rank(&self) -> usize {
        self.clusters
            .iter()
            .filter(|c| !self.is_zero(c))
            .map(|c| c.multiplicity)
            .sum()
    }

    /// Multiplicity of the zero angle (`dim P ∩ Q₀` up to tolerance).
    pub fn zero_multiplicity(&self) -> usize {
        self.clusters
            .iter()
            .filter(|c| self.is_zero(c))
            .map(|c| c.multiplicity)
            .sum()
    }

    pub fn nonzero_classes(&self) -> Vec<AngleClass> {
        self.clusters
            .iter()
            .filter(|c| !self.is_zero(c))
            .map(|c| AngleClass {
                theta: c.theta,
                multiplicity: c.multiplicity,
            })
            .collect()
    }
}

/// True when both multisets have the same multiplicities and angles matching
/// within `tol`.
pub fn classes_agree(a: &[AngleClass], b: &[AngleClass], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| x.multiplicity == y.multiplicity && (x.theta - y.theta).abs() <= tol)
}

/// The four angle multisets relating `P`, `Q₀` and their complements.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub p_q0: Vec<AngleClass>,
    pub q0_p: Vec<AngleClass>,
    pub p_perp_q0_perp: Vec<AngleClass>,
    pub q0_perp_p_perp: Vec<AngleClass>,
    /// Total multiplicity of the nonzero angles between `P` and `Q₀`.
    pub r: usize,
    /// Zero-angle multiplicity between `P` and `Q₀`.
    pub m0: usize,
    /// Zero-angle multiplicity between `P^⊥` and `Q₀^⊥`.
    pub m0_perp: usize,
    pub m: usize,
    pub n: usize,
    nonzero_p_q0: Vec<AngleClass>,
    nonzero_perp: Vec<AngleClass>,
}

impl SymmetryReport {
    /// `Arg(P,Q₀) = Arg(Q₀,P)`.
    pub fn forward_matches_reverse(&self, tol: f64) -> bool {
        classes_agree(&self.p_q0, &self.q0_p, tol)
    }

    /// Nonzero parts of `Arg(P,Q₀)` and `Arg(P^⊥,Q₀^⊥)` coincide with equal multiplicities.
    pub fn nonzero_parts_match(&self, tol: f64) -> bool {
        classes_agree(&self.nonzero_p_q0, &self.nonzero_perp, tol)
    }

    pub fn complements_match(&self, tol: f64) -> bool {
        classes_agree(&self.p_perp_q0_perp, &self.q0_perp_p_perp, tol)
    }

    /// `m₀ = m − r` and `m₀^⊥ = n − r`.
    pub fn zero_multiplicities_consistent(&self) -> bool {
        self.m0 + self.r == self.m && self.m0_perp + self.r == self.n
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.forward_matches_reverse(tol)
            && self.nonzero_parts_match(tol)
            && self.complements_match(tol)
            && self.zero_multiplicities_consistent()
    }
}

/// Decomposes all four pairs `(P,Q₀)`, `(Q₀,P)`, `(P^⊥,Q₀^⊥)`, `(Q₀^⊥,P^⊥)`.
pub fn symmetry_report(p: &Subspace, q0: &Subspace, cluster_tol: f64) -> Result<SymmetryReport> {
    check_pair(p, q0)?;
    if p.dim() != q0.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q0.dim(),
        });
    }
    let m = p.dim();
    let n = p.ambient_dim() - m;
    let fwd = jordan_decomposition(p, q0, cluster_tol)?;
    let rev = jordan_decomposition(q0, p, cluster_tol)?;
    let (perp, perp_rev) = if n == 0 {
        (None, None)
    } else {
        let pp = p.complement()?;
        let qp = q0.complement()?;
        (
            Some(jordan_decomposition(&pp, &qp, cluster_tol)?),
            Some(jordan_decomposition(&qp, &pp, cluster_tol)?),
        )
    };
    let classes = |d: &Option<JordanAngleDecomposition>| d.as_ref().map(|d| d.classes()).unwrap_or_default();
    Ok(SymmetryReport {
        r: fwd.nonzero_rank(),
        m0: fwd.zero_multiplicity(),
        m0_perp: perp.as_ref().map(|d| d.zero_multiplicity()).unwrap_or(0),
        m,
        n,
        nonzero_p_q0: fwd.nonzero_classes(),
        nonzero_perp: perp.as_ref().map(|d| d.nonzero_classes()).unwrap_or_default(),
        p_q0: fwd.classes(),
        q0_p: rev.classes(),
        p_perp_q0_perp: classes(&perp),
        q0_perp_p_perp: classes(&perp_rev),
    })
}

/// The anti-involutive automorphism Φ_θ of `R_θ = P_θ ⊕ P_θ^⊥`.
///
/// `frame` holds an orthonormal basis `[u₁..u_k | v₁..v_k]` of `R_θ` with the
/// `u`'s spanning `P_θ` and the `v`'s spanning `P_θ^⊥`; `matrix` is Φ_θ in
/// that basis.
#[derive(Debug, Clone, PartialEq)]
pub struct AntiInvolution {
    pub theta: f64,
    pub multiplicity: usize,
    frame: DMatrix<f64>,
    matrix: DMatrix<f64>,
    from_formula: bool,
}

/// `u ↦ −secθ cscθ (𝒫^⊥∘𝒫₀) u`, mapping `P_θ` into `P_θ^⊥`.
fn phi_forward(p: &Subspace, q0: &Subspace, theta: f64, u: &DVector<f64>) -> DVector<f64> {
    let pf = p.frame();
    let qf = q0.frame();
    let onto_q0 = qf * (qf.transpose() * u);
    let onto_p_perp = &onto_q0 - pf * (pf.transpose() * &onto_q0);
    onto_p_perp * (-1.0 / (theta.sin() * theta.cos()))
}

/// `v ↦ −secθ cscθ (𝒫∘𝒫₀^⊥) v`, mapping `P_θ^⊥` into `P_θ`.
fn phi_backward(p: &Subspace, q0: &Subspace, theta: f64, v: &DVector<f64>) -> DVector<f64> {
    let pf = p.frame();
    let qf = q0.frame();
    let onto_q0_perp = v - qf * (qf.transpose() * v);
    (pf * (pf.transpose() * onto_q0_perp)) * (-1.0 / (theta.sin() * theta.cos()))
}

/// Builds Φ_θ for the cluster at `theta_cluster_index` (descending order).
pub fn anti_involution(
    p: &Subspace,
    q0: &Subspace,
    theta_cluster_index: usize,
) -> Result<AntiInvolution> {
    anti_involution_with_tol(p, q0, theta_cluster_index, tol::CLUSTER)
}

pub fn anti_involution_with_tol(
    p: &Subspace,
    q0: &Subspace,
    theta_cluster_index: usize,
    cluster_tol: f64,
) -> Result<AntiInvolution> {
    let dec = jordan_decomposition(p, q0, cluster_tol)?;
    let count = dec.clusters().len();
    let cluster = dec.clusters().get(theta_cluster_index).ok_or(Error::ClusterOutOfRange {
        index: theta_cluster_index,
        count,
    })?;
    let theta = cluster.theta;
    let (s, c) = theta.sin_cos();
    if s < tol::ANGLE_GUARD || c < tol::ANGLE_GUARD {
        return Err(Error::DegenerateAngle { theta });
    }
    let k = cluster.multiplicity;
    let pf = p.frame();
    let qf = q0.frame();

    // v_j = −𝒫^⊥ ε_j / |𝒫^⊥ ε_j| with ε_j = 𝒫₀u_j / cosθ: the direction of
    // Φ_θ(u_j) without the secθ·cscθ factor
    let raw_v: Vec<DVector<f64>> = cluster
        .frame
        .column_iter()
        .map(|u| {
            let eps = qf * (qf.transpose() * u);
            let perp = &eps - pf * (pf.transpose() * &eps);
            -perp
        })
        .collect();
    let (v_frame, _) = mgs_qr(&DMatrix::from_columns(&raw_v));

    let mut frame = DMatrix::<f64>::zeros(p.ambient_dim(), 2 * k);
    frame.columns_mut(0, k).copy_from(&cluster.frame);
    frame.columns_mut(k, k).copy_from(&v_frame);

    let from_formula = s * c >= tol::PHI_FORMULA_SWITCH;
    let matrix = if from_formula {
        let mut m = DMatrix::<f64>::zeros(2 * k, 2 * k);
        for j in 0..k {
            let u = cluster.frame.column(j).into_owned();
            m.set_column(j, &(frame.transpose() * phi_forward(p, q0, theta, &u)));
            let v = v_frame.column(j).into_owned();
            m.set_column(k + j, &(frame.transpose() * phi_backward(p, q0, theta, &v)));
        }
        m
    } else {
        let mut m = DMatrix::<f64>::zeros(2 * k, 2 * k);
        for j in 0..k {
            m[(k + j, j)] = 1.0;
            m[(j, k + j)] = -1.0;
        }
        m
    };

    Ok(AntiInvolution {
        theta,
        multiplicity: k,
        frame,
        matrix,
        from_formula,
    })
}

impl AntiInvolution {
    /// Orthonormal frame `[P_θ | P_θ^⊥]` of the domain `R_θ`.
    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    /// Φ_θ expressed in [`frame`](Self::frame).
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn domain(&self) -> Result<Subspace> {
        Subspace::from_orthonormal(self.frame.clone(), crate::subspace::Orientation::Positive)
    }

    pub fn angle_space(&self) -> DMatrix<f64> {
        self.frame.columns(0, self.multiplicity).into_owned()
    }

    pub fn complement_angle_space(&self) -> DMatrix<f64> {
        self.frame.columns(self.multiplicity, self.multiplicity).into_owned()
    }

    /// True when the matrix was assembled from the sec·csc projection formulas
    /// rather than from matched pairs.
    pub fn from_formula(&self) -> bool {
        self.from_formula
    }

    /// Applies Φ_θ to an ambient vector lying in `R_θ`.
    pub fn apply(&self, xi: &DVector<f64>) -> DVector<f64> {
        &self.frame * (&self.matrix * (self.frame.transpose() * xi))
    }
}

/// Orthonormal bases of `Q₀`, `P` and `P^⊥` aligned with the Jordan angles.
///
/// `eps` and `u` have `m` columns, `v` has `n`; `thetas` holds θ₁ ≥ … ≥ θ_m with
/// the first `r` strictly positive. For `i > m` the convention θ_i = 0, ε_i = 0
/// applies.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedBases {
    pub eps: DMatrix<f64>,
    pub u: DMatrix<f64>,
    pub v: DMatrix<f64>,
    pub thetas: Vec<f64>,
    pub r: usize,
}

impl AlignedBases {
    pub fn m(&self) -> usize {
        self.u.ncols()
    }

    pub fn n(&self) -> usize {
        self.v.ncols()
    }

    /// θ_i with the zero convention for `i ≥ m`.
    pub fn theta(&self, i: usize) -> f64 {
        self.thetas.get(i).copied().unwrap_or(0.0)
    }

    /// `λ_α = tan θ_α` for the nonzero angles.
    pub fn lambdas(&self) -> Vec<f64> {
        self.thetas[..self.r].iter().map(|t| t.tan()).collect()
    }
}

/// Bases with `𝒫₀u_α = cosθ_α ε_α`, `𝒫₀v_i = −sinθ_i ε_i` and `v_α = Φ_{θ_α}(u_α)`,
/// oriented so that `Q₀ = ε₁∧…∧ε_m` and `P = u₁∧…∧u_m`. Requires `w(P,Q₀) > 0`.
pub fn aligned_bases(p: &Subspace, q0: &Subspace) -> Result<AlignedBases> {
    let w = pluecker::w_determinant(p, q0)?;
    if w <= tol::W_POSITIVE {
        return Err(Error::NonPositiveW { w });
    }
    let m = p.dim();
    let ambient = p.ambient_dim();
    let n = ambient - m;
    let dec = jordan_decomposition(p, q0, tol::CLUSTER)?;
    let mut u = dec.directions().clone();
    let qf = q0.frame();
    let pf = p.frame();

    let mut eps = qf * (qf.transpose() * &u);
    for mut col in eps.column_iter_mut() {
        let norm = col.norm();
        col /= norm;
    }
    if (p.oriented_frame().transpose() * &u).determinant() < 0.0 {
        u.column_mut(m - 1).neg_mut();
        eps.column_mut(m - 1).neg_mut();
    }
    if (q0.oriented_frame().transpose() * &eps).determinant() <= 0.0 {
        return Err(Error::NonPositiveW { w });
    }

    let mut thetas: Vec<f64> = dec.angles().to_vec();
    let r = thetas.iter().filter(|t| t.sin() > tol::ZERO_ANGLE_SIN).count();
    for t in thetas.iter_mut().skip(r) {
        *t = 0.0;
    }

    let raw_v: Vec<DVector<f64>> = (0..r)
        .map(|a| {
            let e = eps.column(a);
            let perp = e - pf * (pf.transpose() * e);
            -perp
        })
        .collect();
    let mut v = DMatrix::<f64>::zeros(ambient, n);
    if r > 0 {
        let (vr, _) = mgs_qr(&DMatrix::from_columns(&raw_v));
        v.columns_mut(0, r).copy_from(&vr);
    }
    if n > r {
        let mut taken = DMatrix::<f64>::zeros(ambient, m + r);
        taken.columns_mut(0, m).copy_from(&u);
        taken.columns_mut(m, r).copy_from(&v.columns(0, r));
        let rest = complement_frame(&taken);
        v.columns_mut(r, n - r).copy_from(&rest);
    }

    Ok(AlignedBases {
        eps,
        u,
        v,
        thetas,
        r,
    })
}

/// Discrete stand-in for smooth angle-space distributions: how the clusters
/// move along a sampled path of pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathContinuity {
    /// Largest change of any angle (with multiplicity) between neighbours.
    pub max_angle_step: f64,
    /// Largest change of a cluster's angle-space projector between neighbours
    /// whose cluster multiplicities agree.
    pub max_projector_step: f64,
    /// Number of neighbouring pairs whose multiplicity pattern differs.
    pub multiplicity_changes: usize,
}

/// Continuity diagnostic along `path`. The pairs must share dimensions.
pub fn path_continuity(path: &[(Subspace, Subspace)], cluster_tol: f64) -> Result<PathContinuity> {
    let decs = path
        .iter()
        .map(|(p, q)| jordan_decomposition(p, q, cluster_tol))
        .collect::<Result<Vec<_>>>()?;
    let mut out = PathContinuity {
        max_angle_step: 0.0,
        max_projector_step: 0.0,
        multiplicity_changes: 0,
    };
    for w in decs.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let (fa, fb) = (a.angles_with_multiplicity(), b.angles_with_multiplicity());
        if fa.len() != fb.len() {
            return Err(Error::DimensionMismatch { expected: fa.len(), found: fb.len() });
        }
        for (x, y) in fa.iter().zip(&fb) {
            out.max_angle_step = out.max_angle_step.max((x - y).abs());
        }
        let pattern = |d: &JordanAngleDecomposition| -> Vec<usize> {
            d.clusters().iter().map(|c| c.multiplicity).collect()
        };
        if pattern(a) != pattern(b) {
            out.multiplicity_changes += 1;
            continue;
        }
        for (ca, cb) in a.clusters().iter().zip(b.clusters()) {
            let pa = &ca.frame * ca.frame.transpose();
            let pb = &cb.frame * cb.frame.transpose();
            out.max_projector_step = out.max_projector_step.max((pa - pb).amax());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};

    fn rotated_pair(theta: f64) -> (Subspace, Subspace) {
        // ℝ⁴, Q₀ = span(e₁,e₂), P = span(cosθ e₁ + sinθ e₃, e₂)
        let q0 = Subspace::coordinate(4, [0, 1]).unwrap();
        let p = Subspace::orthonormalize(&[
            DVector::from_column_slice(&[theta.cos(), 0.0, theta.sin(), 0.0]),
            DVector::from_column_slice(&[0.0, 1.0, 0.0, 0.0]),
        ])
        .unwrap();
        (p, q0)
    }

    fn line_pair(theta: f64) -> (Subspace, Subspace) {
        let p = Subspace::coordinate(2, [0]).unwrap();
        let q0 = Subspace::orthonormalize(&[DVector::from_column_slice(&[theta.cos(), theta.sin()])]).unwrap();
        (p, q0)
    }

    #[test]
    fn rotating_plane_moves_continuously() {
        let q0 = Subspace::coordinate(4, [0, 1]).unwrap();
        let path: Vec<_> = (0..50)
            .map(|k| {
                let t = 0.2 + 0.01 * k as f64;
                let raw = DMatrix::from_column_slice(4, 2, &[t.cos(), 0.0, t.sin(), 0.0, 0.0, 1.0, 0.0, 0.0]);
                (Subspace::from_columns(&raw).unwrap(), q0.clone())
            })
            .collect();
        let c = path_continuity(&path, tol::CLUSTER).unwrap();
        assert_eq!(c.multiplicity_changes, 0);
        assert!((c.max_angle_step - 0.01).abs() < 1e-9);
        assert!(c.max_projector_step > 0.0 && c.max_projector_step < 0.011);
    }

    #[test]
    fn identical_planes_have_single_zero_cluster() {
        let p = Subspace::coordinate(4, [0, 1]).unwrap();
        let d = jordan_decomposition(&p, &p, tol::CLUSTER).unwrap();
        assert_eq!(d.clusters().len(), 1);
        assert_eq!(d.clusters()[0].multiplicity, 2);
        assert!(d.clusters()[0].theta.abs() < 1e-15);
    }

    #[test]
    fn single_rotation_gives_pi_over_six_and_zero() {
        let (p, q0) = rotated_pair(FRAC_PI_6);
        let d = jordan_decomposition(&p, &q0, tol::CLUSTER).unwrap();
        let classes = d.classes();
        assert_eq!(classes.len(), 2);
        assert!((classes[0].theta - FRAC_PI_6).abs() < 1e-15);
        assert_eq!(classes[0].multiplicity, 1);
        assert!(classes[1].theta.abs() < 1e-15);
        assert_eq!(classes[1].multiplicity, 1);
    }

    #[test]
    fn small_angles_keep_absolute_accuracy() {
        for &t in &[1e-3, 1e-7, 1e-11] {
            let (p, q0) = rotated_pair(t);
            let d = jordan_decomposition(&p, &q0, 1e-30).unwrap();
            assert!((d.angles()[0] - t).abs() < 1e-15 * t.max(1e-3), "θ={t}: got {}", d.angles()[0]);
        }
    }

    #[test]
    fn orthogonal_line_has_right_angle() {
        let (p, q0) = line_pair(FRAC_PI_2);
        let d = jordan_decomposition(&p, &q0, tol::CLUSTER).unwrap();
        assert!((d.angles()[0] - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn unequal_dimensions_pad_with_right_angles() {
        let p = Subspace::coordinate(4, [0, 1, 2]).unwrap();
        let q0 = Subspace::coordinate(4, [0, 3]).unwrap();
        let d = jordan_decomposition(&p, &q0, tol::CLUSTER).unwrap();
        assert_eq!(d.angles_with_multiplicity().len(), 3);
        assert_eq!(d.classes()[0].multiplicity, 2);
        assert!((d.classes()[0].theta - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn mismatched_ambient_is_an_error() {
        let p = Subspace::coordinate(4, [0]).unwrap();
        let q0 = Subspace::coordinate(3, [0]).unwrap();
        assert!(matches!(
            jordan_decomposition(&p, &q0, tol::CLUSTER),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn symmetry_report_for_identical_planes() {
        let p = Subspace::coordinate(5, [0, 1]).unwrap();
        let rep = symmetry_report(&p, &p, tol::CLUSTER).unwrap();
        assert_eq!(rep.p_q0, vec![AngleClass { theta: 0.0, multiplicity: 2 }]);
        assert_eq!(rep.q0_p.len(), 1);
        assert_eq!(rep.p_perp_q0_perp.len(), 1);
        assert_eq!(rep.p_perp_q0_perp[0].multiplicity, 3);
        assert_eq!((rep.r, rep.m0, rep.m0_perp), (0, 2, 3));
        assert!(rep.holds(1e-12));
    }

    #[test]
    fn symmetry_report_for_single_rotation() {
        let (p, q0) = rotated_pair(FRAC_PI_6);
        let rep = symmetry_report(&p, &q0, tol::CLUSTER).unwrap();
        assert!(rep.forward_matches_reverse(1e-12));
        assert_eq!(rep.nonzero_perp.len(), 1);
        assert!((rep.nonzero_perp[0].theta - FRAC_PI_6).abs() < 1e-12);
        assert_eq!(rep.nonzero_perp[0].multiplicity, 1);
        assert!(rep.holds(1e-12));
    }

    #[test]
    fn phi_sends_e1_to_minus_e2() {
        let (p, q0) = line_pair(FRAC_PI_6);
        let phi = anti_involution(&p, &q0, 0).unwrap();
        assert!(phi.from_formula());
        let e1 = DVector::from_column_slice(&[1.0, 0.0]);
        let img = phi.apply(&e1);
        assert!((img - DVector::from_column_slice(&[0.0, -1.0])).amax() < 1e-15);
        assert!((phi.apply(&phi.apply(&e1)) + &e1).amax() < 1e-15);
    }

    #[test]
    fn degenerate_and_missing_clusters_are_rejected() {
        let p = Subspace::coordinate(3, [0]).unwrap();
        assert!(matches!(anti_involution(&p, &p, 0), Err(Error::DegenerateAngle { .. })));
        let (p, q0) = line_pair(FRAC_PI_2);
        assert!(matches!(anti_involution(&p, &q0, 0), Err(Error::DegenerateAngle { .. })));
        let (p, q0) = line_pair(0.3);
        assert!(matches!(
            anti_involution(&p, &q0, 1),
            Err(Error::ClusterOutOfRange { index: 1, count: 1 })
        ));
    }

    #[test]
    fn near_degenerate_angle_uses_matched_pairs() {
        let (p, q0) = line_pair(1e-4);
        let phi = anti_involution(&p, &q0, 0).unwrap();
        assert!(!phi.from_formula());
        let e1 = DVector::from_column_slice(&[1.0, 0.0]);
        assert!((phi.apply(&e1) - DVector::from_column_slice(&[0.0, -1.0])).amax() < 1e-12);
    }

    #[test]
    fn aligned_bases_in_the_plane() {
        let (p, q0) = line_pair(FRAC_PI_6);
        let b = aligned_bases(&p, &q0).unwrap();
        let (s, c) = FRAC_PI_6.sin_cos();
        assert!((b.u.column(0) - DVector::from_column_slice(&[1.0, 0.0])).amax() < 1e-15);
        assert!((b.eps.column(0) - DVector::from_column_slice(&[c, s])).amax() < 1e-15);
        assert!((b.v.column(0) - DVector::from_column_slice(&[0.0, -1.0])).amax() < 1e-15);
        let proj = q0.project(&b.v.column(0).into_owned()).unwrap();
        assert!((proj + b.eps.column(0) * s).amax() < 1e-15);
    }

    #[test]
    fn aligned_bases_for_equal_planes() {
        let p = Subspace::coordinate(5, [1, 3]).unwrap();
        let b = aligned_bases(&p, &p).unwrap();
        assert_eq!(b.r, 0);
        assert!((&b.u - &b.eps).amax() < 1e-15);
        assert_eq!(b.v.ncols(), 3);
        assert!((p.frame().transpose() * &b.v).amax() < 1e-15);
    }

    #[test]
    fn aligned_bases_need_positive_w() {
        let (p, q0) = line_pair(FRAC_PI_2);
        assert!(matches!(aligned_bases(&p, &q0), Err(Error::NonPositiveW { .. })));
        let (p, q0) = line_pair(0.4);
        assert!(matches!(aligned_bases(&p, &q0.reversed()), Err(Error::NonPositiveW { .. })));
    }
}
