use super::terms::laplacian_v_quadratic;
use super::SecondFundamentalFormTable;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

/// `S_{ν₁ν₂}(e_i)` for tangent indices `i ≥ 2`; `S_{ν₂ν₁} = −S_{ν₁ν₂}` and
/// the diagonal entries vanish.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AntisymmetricForm {
    pub s12: Vec<f64>,
}

impl AntisymmetricForm {
    /// `S_{ν_aν_b}(e_{i+2})` for `a, b ∈ {0, 1}`.
    pub fn entry(&self, a: usize, b: usize, i: usize) -> f64 {
        match (a, b) {
            (0, 1) => self.s12[i],
            (1, 0) => -self.s12[i],
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum EqualityCase {
    /// `|B|² = 0`.
    CaseA,
    /// Two angles `arctan√2` and `B` determined by an antisymmetric `S`.
    CaseB {
        thetas: [f64; 2],
        s: AntisymmetricForm,
    },
    Inconsistent,
}

/// Decides which equality case a table with `v⁻¹Δv ≈ 0` falls in.
pub fn classify_equality_case(t: &SecondFundamentalFormTable, tol: f64) -> Result<EqualityCase> {
    if !t.in_regime() {
        return Err(Error::PreconditionViolated(format!("v = {} exceeds 3", t.v())));
    }
    let q = laplacian_v_quadratic(t)?;
    if q > tol {
        return Err(Error::PreconditionViolated(format!(
            "grouped Δv term {q} exceeds tolerance {tol}"
        )));
    }
    if t.norm_sq() <= tol {
        return Ok(EqualityCase::CaseA);
    }
    let root2 = std::f64::consts::SQRT_2;
    if t.r() != 2 || t.lambdas().iter().any(|l| (l - root2).abs() > tol) {
        return Ok(EqualityCase::Inconsistent);
    }
    let n = t.n();
    // Only h_{0,i1} and h_{1,i0} with i ≥ 2 may survive, and they must cancel.
    for a in 0..t.m() {
        for i in 0..n {
            for j in i..n {
                let allowed = (i >= 2 && ((a == 0 && j == 1) || (a == 1 && j == 0)))
                    || (j >= 2 && ((a == 0 && i == 1) || (a == 1 && i == 0)));
                if !allowed && t.get(a, i, j).abs() > tol {
                    return Ok(EqualityCase::Inconsistent);
                }
            }
        }
    }
    if (2..n).any(|i| (t.get(0, i, 1) + t.get(1, i, 0)).abs() > tol) {
        return Ok(EqualityCase::Inconsistent);
    }
    let s12 = (2..n).map(|i| t.get(1, i, 0)).collect();
    Ok(EqualityCase::CaseB {
        thetas: [t.lambdas()[0].atan(), t.lambdas()[1].atan()],
        s: AntisymmetricForm { s12 },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AustereReport {
    pub austere: bool,
    pub simple: bool,
    /// Largest `|e_k + e_{n−1−k}|` over the sampled normal directions.
    pub asymmetry: f64,
    pub span_dim: usize,
    #[serde(skip_serializing)]
    pub v0: Option<DVector<f64>>,
    pub directions_checked: usize,
}

const SPHERE_SEED: u64 = 0x5eed_a057;

/// Unit normal directions: a mesh of the unit sphere in ℝ^m plus the
/// coordinate directions.
fn normal_directions(m: usize) -> Vec<Vec<f64>> {
    let mut dirs: Vec<Vec<f64>> = (0..m)
        .map(|a| (0..m).map(|b| if a == b { 1.0 } else { 0.0 }).collect())
        .collect();
    match m {
        1 => {}
        2 => dirs.extend((0..64).map(|k| {
            let phi = std::f64::consts::PI * k as f64 / 64.0;
            vec![phi.cos(), phi.sin()]
        })),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(SPHERE_SEED);
            for _ in 0..256 {
                let g: Vec<f64> = (0..m).map(|_| StandardNormal.sample(&mut rng)).collect();
                let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
                dirs.push(g.into_iter().map(|x| x / norm).collect());
            }
        }
    }
    dirs
}

fn spectral_asymmetry(b: &DMatrix<f64>) -> f64 {
    let mut e: Vec<f64> = b.clone().symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(|a, b| a.total_cmp(b));
    let n = e.len();
    (0..n).map(|k| (e[k] + e[n - 1 - k]).abs()).fold(0.0, f64::max)
}

/// How far `v` is from making every shape matrix vanish on `v^⊥ × v^⊥` and at `(v, v)`.
fn v0_residual(shapes: &[DMatrix<f64>], v: &DVector<f64>) -> f64 {
    let n = v.len();
    let proj = DMatrix::identity(n, n) - v * v.transpose();
    shapes
        .iter()
        .map(|b| {
            let along = v.dot(&(b * v)).abs();
            let across = (&proj * b * &proj).amax();
            along.max(across)
        })
        .fold(0.0, f64::max)
}

fn span_dimension(shapes: &[DMatrix<f64>], tol: f64) -> usize {
    if shapes.is_empty() {
        return 0;
    }
    let n2 = shapes[0].len();
    let flat = DMatrix::from_fn(shapes.len(), n2, |a, k| shapes[a][k]);
    flat.singular_values().iter().filter(|s| **s > tol).count()
}

/// Candidate `v₀` for the simple condition. Such a vector is an eigenvector
/// of `Σ_α (B^α)²` for its top eigenvalue; when that eigenvalue is double the
/// eigenspace is searched by angle.
fn find_v0(shapes: &[DMatrix<f64>], n: usize, tol: f64) -> Option<DVector<f64>> {
    let mut sq = DMatrix::zeros(n, n);
    for b in shapes {
        sq += b * b;
    }
    let eig = SymmetricEigen::new(sq);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let top = eig.eigenvalues[idx[0]];
    let scale = top.abs().max(1.0);
    let top_space: Vec<DVector<f64>> = idx
        .iter()
        .take_while(|&&k| (eig.eigenvalues[k] - top).abs() <= 1e-9 * scale)
        .map(|&k| eig.eigenvectors.column(k).into_owned())
        .collect();
    let mut best: Option<(f64, DVector<f64>)> = None;
    let offer = |v: DVector<f64>, best: &mut Option<(f64, DVector<f64>)>| {
        let res = v0_residual(shapes, &v);
        if best.as_ref().map_or(true, |b| res < b.0) {
            *best = Some((res, v));
        }
    };
    for v in &top_space {
        offer(v.clone(), &mut best);
    }
    if top_space.len() == 2 {
        let (p, q) = (&top_space[0], &top_space[1]);
        let at = |phi: f64| p * phi.cos() + q * phi.sin();
        let steps = 720;
        let mut phi_best = 0.0;
        let mut r_best = f64::INFINITY;
        for k in 0..steps {
            let phi = std::f64::consts::PI * k as f64 / steps as f64;
            let r = v0_residual(shapes, &at(phi));
            if r < r_best {
                r_best = r;
                phi_best = phi;
            }
        }
        // Golden-section polish around the best mesh angle.
        let h = std::f64::consts::PI / steps as f64;
        let (mut lo, mut hi) = (phi_best - h, phi_best + h);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let a = hi - g * (hi - lo);
            let b = lo + g * (hi - lo);
            if v0_residual(shapes, &at(a)) < v0_residual(shapes, &at(b)) {
                hi = b;
            } else {
                lo = a;
            }
        }
        offer(at(0.5 * (lo + hi)), &mut best);
    }
    best.filter(|(r, _)| *r <= tol).map(|(_, v)| v)
}

/// Austere and simple-austere tests for the family `{B^ν}`.
pub fn austere_check(t: &SecondFundamentalFormTable, tol: f64) -> AustereReport {
    let dirs = normal_directions(t.m());
    let asymmetry = dirs
        .iter()
        .map(|nu| spectral_asymmetry(&t.shape_along(nu)))
        .fold(0.0, f64::max);
    let austere = asymmetry <= tol;
    let shapes: Vec<DMatrix<f64>> = (0..t.m()).map(|a| t.shape_matrix(a)).collect();
    let span_dim = span_dimension(&shapes, tol);
    let v0 = if austere && span_dim >= 2 {
        find_v0(&shapes, t.n(), tol)
    } else {
        None
    };
    AustereReport {
        austere,
        simple: v0.is_some(),
        asymmetry,
        span_dim,
        v0,
        directions_checked: dirs.len(),
    }
}
