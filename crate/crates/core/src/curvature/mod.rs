//! Second fundamental form coefficients in an aligned frame and the quadratic
//! forms whose sum gives `v⁻¹Δv`.
//!
//! Indices are zero-based throughout: tangent `i ∈ 0..n`, normal `α ∈ 0..m`,
//! and the first `r` tangent and normal indices carry the nonzero angles with
//! `λ_α = tanθ_α`.

mod certify;
mod equality;
mod region;
mod terms;

pub use certify::{
    certify_ii, certify_iii_positive, certify_prop35, estimate_eps0, iv_ratio_min, sample_lambdas,
    sample_table, Certificate, Eps0Estimate,
};
pub use equality::{
    austere_check, classify_equality_case, AntisymmetricForm, AustereReport, EqualityCase,
};
pub use region::{region_f, scan_region_f, RegionPoint, RegionScan};
pub use terms::{
    grouped_terms, iv_form, laplacian_v_quadratic, laplacian_v_quadratic_unchecked,
    laplacian_v_ungrouped, term_i, term_ii, term_iii, term_iii_matrix,
    term_iii_min_eigenvalue, term_iv, GroupedTerms, IvBlock,
};

use crate::{Error, Result};
use nalgebra::DMatrix;

/// Slack on `Π(1+λ²) ≤ 9` when deciding whether a table is in the `v ≤ 3` regime.
pub const REGIME_SLACK: f64 = 1e-9;

/// Coefficients `h_{α,ij}` with `h_{α,ij} = h_{α,ji}` stored once.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondFundamentalFormTable {
    n: usize,
    m: usize,
    lambdas: Vec<f64>,
    h: Vec<f64>,
}

fn packed(n: usize, i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    a * n - a * (a + 1) / 2 + b
}

impl SecondFundamentalFormTable {
    /// Zero table. `lambdas` must be strictly positive and descending with
    /// `lambdas.len() ≤ min(m, n)`.
    pub fn zeros(n: usize, m: usize, lambdas: Vec<f64>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::Shape(format!("empty table n={n}, m={m}")));
        }
        if lambdas.len() > n.min(m) {
            return Err(Error::Shape(format!(
                "r={} exceeds min(m, n)={}",
                lambdas.len(),
                n.min(m)
            )));
        }
        if lambdas.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
            return Err(Error::Shape("lambdas must be finite and positive".into()));
        }
        if lambdas.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::Shape("lambdas must be descending".into()));
        }
        Ok(Self {
            n,
            m,
            lambdas,
            h: vec![0.0; m * n * (n + 1) / 2],
        })
    }

    /// Table with `h_{α,ij} = f(α, i, j)` read for `i ≤ j`.
    pub fn from_fn(
        n: usize,
        m: usize,
        lambdas: Vec<f64>,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut t = Self::zeros(n, m, lambdas)?;
        for a in 0..m {
            for i in 0..n {
                for j in i..n {
                    t.set(a, i, j, f(a, i, j));
                }
            }
        }
        Ok(t)
    }

    /// Table from shape matrices `B^α` (symmetrized).
    pub fn from_shape_matrices(lambdas: Vec<f64>, shapes: &[DMatrix<f64>]) -> Result<Self> {
        let m = shapes.len();
        let n = shapes.first().map_or(0, |s| s.nrows());
        if shapes.iter().any(|s| s.nrows() != n || s.ncols() != n) {
            return Err(Error::Shape("shape matrices must be n×n".into()));
        }
        Self::from_fn(n, m, lambdas, |a, i, j| {
            0.5 * (shapes[a][(i, j)] + shapes[a][(j, i)])
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// `λ_α`, zero for `α ≥ r`.
    pub fn lambda(&self, alpha: usize) -> f64 {
        self.lambdas.get(alpha).copied().unwrap_or(0.0)
    }

    pub fn get(&self, alpha: usize, i: usize, j: usize) -> f64 {
        assert!(alpha < self.m && i < self.n && j < self.n, "index out of range");
        self.h[alpha * self.n * (self.n + 1) / 2 + packed(self.n, i, j)]
    }

    pub fn set(&mut self, alpha: usize, i: usize, j: usize, value: f64) {
        assert!(alpha < self.m && i < self.n && j < self.n, "index out of range");
        let k = alpha * self.n * (self.n + 1) / 2 + packed(self.n, i, j);
        self.h[k] = value;
    }

    /// `|B|² = Σ_α Σ_{i,j} h_{α,ij}²`.
    pub fn norm_sq(&self) -> f64 {
        let mut s = 0.0;
        for a in 0..self.m {
            for i in 0..self.n {
                for j in 0..self.n {
                    s += self.get(a, i, j).powi(2);
                }
            }
        }
        s
    }

    /// `Π(1+λ_α²) = v²`.
    pub fn sec_product(&self) -> f64 {
        self.lambdas.iter().map(|l| 1.0 + l * l).product()
    }

    pub fn v(&self) -> f64 {
        self.sec_product().sqrt()
    }

    /// Whether `v ≤ 3` up to [`REGIME_SLACK`].
    pub fn in_regime(&self) -> bool {
        self.sec_product() <= 9.0 + REGIME_SLACK
    }

    /// Shape matrix `B^α = (h_{α,ij})`.
    pub fn shape_matrix(&self, alpha: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(alpha, i, j))
    }

    /// `B^ν = Σ_α ν_α B^α`.
    pub fn shape_along(&self, nu: &[f64]) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n, self.n);
        for (a, c) in nu.iter().enumerate().take(self.m) {
            out += self.shape_matrix(a) * *c;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn storage_is_symmetric() {
        let mut t = SecondFundamentalFormTable::zeros(4, 2, vec![1.0]).unwrap();
        t.set(1, 3, 0, 2.5);
        assert_eq!(t.get(1, 0, 3), 2.5);
        assert_eq!(t.norm_sq(), 2.0 * 2.5 * 2.5);
    }

    #[test]
    fn rejects_bad_lambdas() {
        assert!(SecondFundamentalFormTable::zeros(3, 2, vec![1.0, 2.0]).is_err());
        assert!(SecondFundamentalFormTable::zeros(3, 2, vec![1.0, 0.0]).is_err());
        assert!(SecondFundamentalFormTable::zeros(3, 2, vec![1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn packed_indices_cover_upper_triangle() {
        let n = 5;
        let mut seen = vec![false; n * (n + 1) / 2];
        for i in 0..n {
            for j in i..n {
                seen[packed(n, i, j)] = true;
            }
        }
        assert!(seen.into_iter().all(|s| s));
    }
}
