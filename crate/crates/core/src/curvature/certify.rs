use super::terms::{iv_form, laplacian_v_quadratic, term_ii, term_iii_min_eigenvalue};
use super::{SecondFundamentalFormTable, REGIME_SLACK};
use crate::sampling::{collect_samples, min_over_samples};
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Largest admissible `λ` when `1+λ² ≤ 9`.
const LAMBDA_MAX: f64 = 2.0 * std::f64::consts::SQRT_2;

/// JSON record of a sampling or scanning run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub lemma: String,
    pub samples: u64,
    pub seed: u64,
    pub extremal_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmin: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmax: Option<Vec<f64>>,
    pub tolerance: f64,
    pub pass: bool,
}

fn need_samples(samples: u64) -> Result<()> {
    if samples == 0 {
        return Err(Error::PreconditionViolated("samples must be ≥ 1".into()));
    }
    Ok(())
}

/// `r` descending positive values with `Π(1+λ²) ≤ 9`, by rejection from
/// `(0, 2√2]^r`.
pub fn sample_lambdas<R: Rng + ?Sized>(rng: &mut R, r: usize) -> Vec<f64> {
    loop {
        let mut l: Vec<f64> = (0..r)
            .map(|_| LAMBDA_MAX * (1.0 - rng.gen::<f64>()))
            .collect();
        l.sort_by(|a, b| b.total_cmp(a));
        if l.iter().map(|x| 1.0 + x * x).product::<f64>() <= 9.0 {
            return l;
        }
    }
}

/// Scales `lambdas` by the factor that puts `Π(1+λ²)` on 9.
fn push_to_boundary(lambdas: &[f64]) -> Vec<f64> {
    let prod = |s: f64| lambdas.iter().map(|x| 1.0 + s * s * x * x).product::<f64>();
    let (mut lo, mut hi) = (1.0, 2.0);
    while prod(hi) < 9.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if prod(mid) <= 9.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lambdas.iter().map(|x| x * lo).collect()
}

/// Table with i.i.d. uniform `[−1, 1]` coefficients.
pub fn sample_table<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    m: usize,
    lambdas: Vec<f64>,
) -> Result<SecondFundamentalFormTable> {
    SecondFundamentalFormTable::from_fn(n, m, lambdas, |_, _, _| rng.gen_range(-1.0..=1.0))
}

/// Samples `(a, b, c)` with `a ≥ b ≥ c > 0`, `(1+a²)(1+b²)(1+c²) ≤ 9` and
/// records the smallest eigenvalue of the third form.
pub fn certify_iii_positive(samples: u64, seed: u64) -> Result<Certificate> {
    need_samples(samples)?;
    let (value, _, abc) = min_over_samples(samples, seed, |rng, _| {
        let l = sample_lambdas(rng, 3);
        Some((term_iii_min_eigenvalue(l[0], l[1], l[2]), l))
    })
    .expect("samples ≥ 1");
    Ok(Certificate {
        lemma: "III".into(),
        samples,
        seed,
        extremal_value: value,
        argmin: Some(abc),
        argmax: None,
        tolerance: 0.0,
        pass: value > 0.0,
    })
}

/// Second form on `λ_aλ_b ∈ {2k/d : 1 ≤ k ≤ d}` with `h_pairs` uniform
/// coefficient pairs per grid value.
pub fn certify_ii(lambda_density: usize, h_pairs: u64, seed: u64) -> Result<Certificate> {
    need_samples(h_pairs)?;
    if lambda_density == 0 {
        return Err(Error::PreconditionViolated("density must be ≥ 1".into()));
    }
    let d = lambda_density as u64;
    let total = d * h_pairs;
    let (value, _, arg) = min_over_samples(total, seed, |rng, k| {
        let prod = 2.0 * ((k % d) + 1) as f64 / d as f64;
        let l = prod.sqrt();
        let hab = rng.gen_range(-1.0..=1.0);
        let hba = rng.gen_range(-1.0..=1.0);
        Some((term_ii(l, l, hab, hba), vec![prod, hab, hba]))
    })
    .expect("samples ≥ 1");
    let tolerance = 1e-12;
    Ok(Certificate {
        lemma: "II".into(),
        samples: total,
        seed,
        extremal_value: value,
        argmin: Some(arg),
        argmax: None,
        tolerance,
        pass: value >= -tolerance,
    })
}

/// Random tables in the `v ≤ 3` regime, half of them pushed onto `v = 3`.
/// Records the smallest grouped `v⁻¹Δv`.
pub fn certify_prop35(samples: u64, seed: u64) -> Result<Certificate> {
    need_samples(samples)?;
    let (value, _, arg) = min_over_samples(samples, seed, |rng, _| {
        let n = rng.gen_range(2..=5usize);
        let m = rng.gen_range(1..=4usize);
        let r = rng.gen_range(1..=n.min(m).min(3));
        let mut lambdas = sample_lambdas(rng, r);
        if rng.gen::<bool>() {
            lambdas = push_to_boundary(&lambdas);
        }
        let t = sample_table(rng, n, m, lambdas).expect("valid shape");
        let q = laplacian_v_quadratic(&t).expect("sampled inside the regime");
        Some((q, vec![n as f64, m as f64, r as f64, t.v()]))
    })
    .expect("samples ≥ 1");
    let tolerance = 1e-10;
    Ok(Certificate {
        lemma: "prop35".into(),
        samples,
        seed,
        extremal_value: value,
        argmin: Some(arg),
        argmax: None,
        tolerance,
        pass: value >= -tolerance,
    })
}

/// Smallest value of the fourth form over coefficient vectors with unit
/// normalising quantity, at fixed `λ` and `α`.
pub fn iv_ratio_min(lambdas: &[f64], alpha: usize) -> Result<f64> {
    let (a, d) = iv_form(lambdas, alpha)?;
    Ok(scaled(&a, &d).symmetric_eigenvalues().min())
}

fn scaled(a: &DMatrix<f64>, d: &DVector<f64>) -> DMatrix<f64> {
    let s = d.map(|x| 1.0 / x.sqrt());
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * s[i] * s[j])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eps0Estimate {
    pub rank: usize,
    /// Infimum over the grid of `λ` tuples of rank `1..=rank`.
    pub value: f64,
    pub argmin_lambdas: Vec<f64>,
    pub argmin_alpha: usize,
    pub lambda_density: usize,
    pub grid_points: u64,
    /// Smallest ratio met by the random coefficient samples.
    pub sampled_min: f64,
    /// Smallest gap between a sampled ratio and the eigenvalue bound at the
    /// same `λ`. Negative values would mean the bound is wrong.
    pub consistency_gap: f64,
    pub samples: u64,
    pub seed: u64,
}

impl Eps0Estimate {
    pub fn pass(&self) -> bool {
        self.value > 0.0 && self.consistency_gap >= -1e-10
    }

    pub fn certificate(&self) -> Certificate {
        let mut arg = self.argmin_lambdas.clone();
        arg.push(self.argmin_alpha as f64);
        Certificate {
            lemma: "IV".into(),
            samples: self.samples,
            seed: self.seed,
            extremal_value: self.value,
            argmin: Some(arg),
            argmax: None,
            tolerance: 0.0,
            pass: self.pass(),
        }
    }
}

fn lambda_tuples(rank: usize, d: usize) -> Vec<Vec<f64>> {
    fn rec(d: usize, rank: usize, max_j: usize, prod: f64, cur: &mut Vec<f64>, out: &mut Vec<Vec<f64>>) {
        if cur.len() == rank {
            out.push(cur.clone());
            return;
        }
        for j in 1..=max_j {
            let l = LAMBDA_MAX * j as f64 / d as f64;
            let p = prod * (1.0 + l * l);
            if p > 9.0 + REGIME_SLACK {
                break;
            }
            cur.push(l);
            rec(d, rank, j, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, rank, d, 1.0, &mut Vec::new(), &mut out);
    // Descending tuples.
    for t in &mut out {
        t.sort_by(|a, b| b.total_cmp(a));
    }
    out
}

/// Grid estimate of the constant in the lower bound of the fourth form,
/// taken over all ranks `1..=r`. `h_samples` random coefficient vectors check
/// the eigenvalue bound and give an independent upper estimate.
pub fn estimate_eps0(r: usize, lambda_density: usize, h_samples: u64, seed: u64) -> Result<Eps0Estimate> {
    if r == 0 {
        return Err(Error::PreconditionViolated("rank must be ≥ 1".into()));
    }
    if lambda_density == 0 {
        return Err(Error::PreconditionViolated("density must be ≥ 1".into()));
    }
    let cases: Vec<(Vec<f64>, usize)> = (1..=r)
        .flat_map(|k| lambda_tuples(k, lambda_density))
        .flat_map(|l| (0..l.len()).map(move |a| (l.clone(), a)))
        .collect();
    if cases.is_empty() {
        return Err(Error::RegionViolation("λ grid is empty".into()));
    }
    let (value, idx) = cases
        .par_iter()
        .enumerate()
        .map(|(i, (l, a))| (iv_ratio_min(l, *a).expect("α < r"), i))
        .reduce_with(|x, y| if y.0 < x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x })
        .expect("non-empty");

    let (mut sampled_min, mut consistency_gap) = (f64::INFINITY, f64::INFINITY);
    let draws = collect_samples(h_samples, seed, |rng, _| {
        let k = rng.gen_range(1..=r);
        let l = sample_lambdas(rng, k);
        let alpha = rng.gen_range(0..k);
        let (a, d) = iv_form(&l, alpha).expect("α < k");
        let x = DVector::from_fn(d.len(), |_, _| rng.gen_range(-1.0..=1.0));
        let ratio = x.dot(&(&a * &x)) / x.dot(&d.component_mul(&x));
        let bound = scaled(&a, &d).symmetric_eigenvalues().min();
        (ratio, ratio - bound)
    });
    for (ratio, gap) in draws {
        sampled_min = sampled_min.min(ratio);
        consistency_gap = consistency_gap.min(gap);
    }
    Ok(Eps0Estimate {
        rank: r,
        value,
        argmin_lambdas: cases[idx].0.clone(),
        argmin_alpha: cases[idx].1,
        lambda_density,
        grid_points: cases.len() as u64,
        sampled_min,
        consistency_gap,
        samples: h_samples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    #[test]
    fn rank_one_ratio_is_at_least_one() {
        let e = estimate_eps0(1, 20, 100, 1).unwrap();
        assert!(e.value >= 1.0 && e.pass());
        assert!(e.sampled_min >= 1.0 && e.consistency_gap >= -1e-12);
    }

    #[test]
    fn larger_rank_never_raises_the_infimum() {
        let e1 = estimate_eps0(1, 16, 0, 1).unwrap();
        let e2 = estimate_eps0(2, 16, 0, 1).unwrap();
        assert!(e2.value <= e1.value);
        assert!(e2.value > 0.0);
        assert!(iv_ratio_min(&[SQRT_2, SQRT_2], 0).unwrap() > 0.0);
    }

    #[test]
    fn boundary_push_lands_on_nine() {
        let l = push_to_boundary(&[0.4, 0.2]);
        let p: f64 = l.iter().map(|x| 1.0 + x * x).product();
        assert!((p - 9.0).abs() < 1e-12);
    }

    #[test]
    fn certificates_pass_on_small_runs() {
        assert!(certify_iii_positive(2000, 42).unwrap().pass);
        assert!(certify_ii(20, 200, 3).unwrap().pass);
        assert!(certify_prop35(2000, 7).unwrap().pass);
    }
}
