use super::SecondFundamentalFormTable;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector, Matrix3};
use serde::Serialize;

/// `Σ_α(2+2λ_α²)h_α² + Σ_{α≠β}λ_αλ_β h_α h_β` where `h_α = h_{α,iα}` for a
/// fixed tangent index `i ≥ r`.
pub fn term_i(lambdas: &[f64], h_col: &[f64]) -> Result<f64> {
    if lambdas.is_empty() {
        return Err(Error::PreconditionViolated("term I needs r ≥ 1".into()));
    }
    if lambdas.len() != h_col.len() {
        return Err(Error::DimensionMismatch {
            expected: lambdas.len(),
            found: h_col.len(),
        });
    }
    let mut s = 0.0;
    for (a, (&la, &ha)) in lambdas.iter().zip(h_col).enumerate() {
        s += (2.0 + 2.0 * la * la) * ha * ha;
        for (b, (&lb, &hb)) in lambdas.iter().zip(h_col).enumerate() {
            if a != b {
                s += la * lb * ha * hb;
            }
        }
    }
    Ok(s)
}

/// `2h_ab² + 2h_ba² + 2λ_aλ_b h_ab h_ba`.
pub fn term_ii(lam_a: f64, lam_b: f64, h_ab: f64, h_ba: f64) -> f64 {
    2.0 * h_ab * h_ab + 2.0 * h_ba * h_ba + 2.0 * lam_a * lam_b * h_ab * h_ba
}

/// `2x²+2y²+2z²+2abxy+2bcyz+2cazx`.
pub fn term_iii(a: f64, b: f64, c: f64, x: f64, y: f64, z: f64) -> f64 {
    2.0 * (x * x + y * y + z * z) + 2.0 * a * b * x * y + 2.0 * b * c * y * z + 2.0 * c * a * z * x
}

/// Symmetric matrix `A` with `term_iii(a,b,c,x,y,z) = (x,y,z) A (x,y,z)ᵀ`.
pub fn term_iii_matrix(a: f64, b: f64, c: f64) -> Matrix3<f64> {
    Matrix3::new(2.0, a * b, c * a, a * b, 2.0, b * c, c * a, b * c, 2.0)
}

/// Minimum of the third form over the unit sphere.
pub fn term_iii_min_eigenvalue(a: f64, b: f64, c: f64) -> f64 {
    term_iii_matrix(a, b, c).symmetric_eigenvalues().min()
}

/// Coefficients entering the fourth form for one normal index `α`.
/// Entries of `cross` and `mixed` at position `α` are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct IvBlock {
    /// `h_{α,αα}`.
    pub own: f64,
    /// `cross[β] = h_{α,ββ}`.
    pub cross: Vec<f64>,
    /// `mixed[β] = h_{β,αβ}`.
    pub mixed: Vec<f64>,
}

impl IvBlock {
    pub fn zeros(r: usize) -> Self {
        Self {
            own: 0.0,
            cross: vec![0.0; r],
            mixed: vec![0.0; r],
        }
    }

    pub fn from_table(t: &SecondFundamentalFormTable, alpha: usize) -> Self {
        let r = t.r();
        Self {
            own: t.get(alpha, alpha, alpha),
            cross: (0..r).map(|b| t.get(alpha, b, b)).collect(),
            mixed: (0..r).map(|b| t.get(b, alpha, b)).collect(),
        }
    }
}

/// Fourth form for normal index `alpha < r`.
pub fn term_iv(lambdas: &[f64], alpha: usize, block: &IvBlock) -> Result<f64> {
    let r = lambdas.len();
    if alpha >= r {
        return Err(Error::ClusterOutOfRange { index: alpha, count: r });
    }
    if block.cross.len() != r || block.mixed.len() != r {
        return Err(Error::DimensionMismatch {
            expected: r,
            found: block.cross.len().min(block.mixed.len()),
        });
    }
    // h_{β,αβ} with β = α is h_{α,αα}.
    let z = |b: usize| if b == alpha { block.own } else { block.mixed[b] };
    let la = lambdas[alpha];
    let mut s = (1.0 + 2.0 * la * la) * block.own * block.own;
    for b in (0..r).filter(|&b| b != alpha) {
        let lb = lambdas[b];
        s += block.cross[b].powi(2) + (2.0 + 2.0 * lb * lb) * z(b).powi(2);
        s += 2.0 * la * lb * block.cross[b] * z(b);
    }
    for b in 0..r {
        for g in (0..r).filter(|&g| g != b) {
            s += lambdas[b] * lambdas[g] * z(b) * z(g);
        }
    }
    Ok(s)
}

/// The fourth form as `(A, d)`: `term_iv = xᵀAx` and the normalising
/// quantity `h_{α,αα}² + Σ_{β≠α}(h_{α,ββ}² + 2h_{β,αβ}²) = Σ d_k x_k²`.
/// Variables are ordered `[h_{α,αα}, h_{α,ββ} (β≠α), h_{β,αβ} (β≠α)]`.
pub fn iv_form(lambdas: &[f64], alpha: usize) -> Result<(DMatrix<f64>, DVector<f64>)> {
    let r = lambdas.len();
    if alpha >= r {
        return Err(Error::ClusterOutOfRange { index: alpha, count: r });
    }
    let others: Vec<usize> = (0..r).filter(|&b| b != alpha).collect();
    let k = others.len();
    let dim = 1 + 2 * k;
    let y = |p: usize| 1 + p;
    let z = |p: usize| 1 + k + p;
    // Slot of h_{β,αβ}; β = α maps to the own coefficient.
    let z_slot = |b: usize| {
        if b == alpha {
            0
        } else {
            z(others.iter().position(|&o| o == b).unwrap())
        }
    };
    let la = lambdas[alpha];
    let mut a = DMatrix::zeros(dim, dim);
    let mut d = DVector::from_element(dim, 1.0);
    a[(0, 0)] = 1.0 + 2.0 * la * la;
    for (p, &b) in others.iter().enumerate() {
        let lb = lambdas[b];
        a[(y(p), y(p))] = 1.0;
        a[(z(p), z(p))] = 2.0 + 2.0 * lb * lb;
        a[(y(p), z(p))] += la * lb;
        a[(z(p), y(p))] += la * lb;
        d[z(p)] = 2.0;
    }
    for b in 0..r {
        for g in (0..r).filter(|&g| g != b) {
            a[(z_slot(b), z_slot(g))] += lambdas[b] * lambdas[g];
        }
    }
    Ok((a, d))
}

/// The pieces of `v⁻¹Δv` grouped by index type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupedTerms {
    /// `Σ_α Σ_{i,j ≥ r} h_{α,ij}²`.
    pub outer: f64,
    /// `Σ_{α ≥ r} Σ_{i < r or j < r} h_{α,ij}²`. These squares appear in the
    /// ungrouped sum but belong to none of the other groups.
    pub flat_normal: f64,
    pub i_terms: f64,
    pub ii_terms: f64,
    pub iii_terms: f64,
    pub iv_terms: f64,
}

impl GroupedTerms {
    pub fn total(&self) -> f64 {
        self.outer + self.flat_normal + self.i_terms + self.ii_terms + self.iii_terms + self.iv_terms
    }
}

/// Group-by-group evaluation, without the `v ≤ 3` check.
pub fn grouped_terms(t: &SecondFundamentalFormTable) -> GroupedTerms {
    let (n, m, r) = (t.n(), t.m(), t.r());
    let lam = t.lambdas();
    let mut g = GroupedTerms {
        outer: 0.0,
        flat_normal: 0.0,
        i_terms: 0.0,
        ii_terms: 0.0,
        iii_terms: 0.0,
        iv_terms: 0.0,
    };
    for a in 0..m {
        for i in 0..n {
            for j in 0..n {
                let h2 = t.get(a, i, j).powi(2);
                if i >= r && j >= r {
                    g.outer += h2;
                } else if a >= r {
                    g.flat_normal += h2;
                }
            }
        }
    }
    if r == 0 {
        return g;
    }
    for i in r..n {
        let col: Vec<f64> = (0..r).map(|a| t.get(a, i, a)).collect();
        g.i_terms += term_i(lam, &col).expect("r ≥ 1");
        for a in 0..r {
            for b in (a + 1)..r {
                g.ii_terms += term_ii(lam[a], lam[b], t.get(a, i, b), t.get(b, i, a));
            }
        }
    }
    for a in 0..r {
        for b in (a + 1)..r {
            for c in (b + 1)..r {
                g.iii_terms += term_iii(
                    lam[a],
                    lam[b],
                    lam[c],
                    t.get(a, b, c),
                    t.get(b, c, a),
                    t.get(c, a, b),
                );
            }
        }
    }
    for a in 0..r {
        g.iv_terms += term_iv(lam, a, &IvBlock::from_table(t, a)).expect("α < r");
    }
    g
}

/// Grouped `v⁻¹Δv` for tables in the `v ≤ 3` regime.
pub fn laplacian_v_quadratic(t: &SecondFundamentalFormTable) -> Result<f64> {
    if !t.in_regime() {
        return Err(Error::RegionViolation(format!(
            "Π(1+λ²) = {} exceeds 9",
            t.sec_product()
        )));
    }
    Ok(grouped_terms(t).total())
}

/// Grouped `v⁻¹Δv` at any `v`. The identity behind it holds for every table;
/// only the sign claim needs `v ≤ 3`.
pub fn laplacian_v_quadratic_unchecked(t: &SecondFundamentalFormTable) -> f64 {
    grouped_terms(t).total()
}

/// `|B|² + 2Σ_{i,α}λ_α²h_{α,iα}² + Σ_iΣ_{α≠β}λ_αλ_β(h_{α,iα}h_{β,iβ} + h_{α,iβ}h_{β,iα})`.
pub fn laplacian_v_ungrouped(t: &SecondFundamentalFormTable) -> f64 {
    let (n, r) = (t.n(), t.r());
    let lam = t.lambdas();
    let mut s = t.norm_sq();
    for i in 0..n {
        for a in 0..r {
            s += 2.0 * lam[a] * lam[a] * t.get(a, i, a).powi(2);
            for b in (0..r).filter(|&b| b != a) {
                s += lam[a]
                    * lam[b]
                    * (t.get(a, i, a) * t.get(b, i, b) + t.get(a, i, b) * t.get(b, i, a));
            }
        }
    }
    s
}
