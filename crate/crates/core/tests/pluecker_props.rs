mod common;

use bernstein_lab::jordan::jordan_decomposition;
use bernstein_lab::pluecker::{orientation_flip, w_determinant, w_inner};
use bernstein_lab::{tol, Orientation, Subspace};
use common::{random_pair, rng};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn shapes() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=5, 1usize..=5)
}

/// Random rotation in SO(k): orthonormalized Gaussian matrix with the sign of
/// one column fixed.
fn rotation(r: &mut ChaCha8Rng, k: usize) -> DMatrix<f64> {
    let raw = DMatrix::from_fn(k, k, |_, _| r.gen_range(-1.0..1.0));
    let q = raw.qr().q();
    let mut q = q;
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

fn reframed(s: &Subspace, rot: &DMatrix<f64>) -> Subspace {
    Subspace::from_orthonormal(s.frame() * rot, s.orientation()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn w_ignores_orientation_preserving_reframing((m, n) in shapes(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let (p, q) = random_pair(&mut r, m, n);
        let w = w_determinant(&p, &q).unwrap();
        let p2 = reframed(&p, &rotation(&mut r, m));
        let q2 = reframed(&q, &rotation(&mut r, m));
        prop_assert!((w_determinant(&p2, &q2).unwrap() - w).abs() <= 1e-11);
    }

    #[test]
    fn w_is_symmetric_in_absolute_value((m, n) in shapes(), seed in any::<u64>()) {
        let (p, q) = random_pair(&mut rng(seed), m, n);
        let a = w_determinant(&p, &q).unwrap().abs();
        let b = w_determinant(&q, &p).unwrap().abs();
        prop_assert!((a - b).abs() <= 1e-11);
    }

    #[test]
    fn w_magnitude_is_product_of_cosines((m, n) in shapes(), seed in any::<u64>()) {
        let (p, q) = random_pair(&mut rng(seed), m, n);
        let wv = w_inner(&p, &q).unwrap();
        let cosines: f64 = jordan_decomposition(&p, &q, tol::CLUSTER).unwrap().angles().iter().map(|t| t.cos()).product();
        prop_assert!((wv.w.abs() - cosines).abs() <= 1e-10);
        prop_assert!((orientation_flip(&p, &q).unwrap() + wv.w).abs() <= 1e-12);
    }

    #[test]
    fn w_vanishes_with_a_right_angle((m, n) in shapes(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let q = Subspace::random(&mut r, m + n, m);
        let qp = q.complement().unwrap();
        // one vector from Q₀^⊥, the rest random
        let normal: DVector<f64> = qp.frame() * DVector::from_fn(n, |_, _| r.gen_range(-1.0..1.0));
        let mut cols = vec![normal];
        cols.extend((1..m).map(|_| DVector::from_fn(m + n, |_, _| r.gen_range(-1.0..1.0))));
        let p = Subspace::orthonormalize(&cols).unwrap();
        prop_assert!(w_determinant(&p, &q).unwrap().abs() <= 1e-10);
        let dec = jordan_decomposition(&p, &q, tol::CLUSTER).unwrap();
        prop_assert!((dec.angles()[0] - std::f64::consts::FRAC_PI_2).abs() <= 1e-9);
    }

    #[test]
    fn reversing_either_orientation_negates_w((m, n) in shapes(), seed in any::<u64>()) {
        let (p, q) = random_pair(&mut rng(seed), m, n);
        let w = w_determinant(&p, &q).unwrap();
        prop_assert!((w_determinant(&p.reversed(), &q).unwrap() + w).abs() <= 1e-12);
        prop_assert!((w_determinant(&p, &q.reversed()).unwrap() + w).abs() <= 1e-12);
        let neg = Subspace::from_orthonormal(p.frame().clone(), Orientation::Negative).unwrap();
        prop_assert_eq!(neg.orientation().sign(), -1.0);
    }
}
