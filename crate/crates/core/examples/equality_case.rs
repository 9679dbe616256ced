//! Tables where `Δv` vanishes: the flat case and the two-angle family.

use bernstein_lab::curvature::{
    austere_check, classify_equality_case, laplacian_v_quadratic, EqualityCase,
    SecondFundamentalFormTable,
};
use std::f64::consts::SQRT_2;

fn main() -> bernstein_lab::Result<()> {
    let flat = SecondFundamentalFormTable::zeros(3, 2, vec![1.0])?;
    println!("zero table: {:?}", classify_equality_case(&flat, 1e-9)?);

    // two angles arctan√2, coupled through an antisymmetric form
    let mut t = SecondFundamentalFormTable::zeros(4, 2, vec![SQRT_2, SQRT_2])?;
    for i in 2..4 {
        t.set(0, i, 1, 0.7);
        t.set(1, i, 0, -0.7);
    }
    println!("Δv/v = {:.3e}", laplacian_v_quadratic(&t)?);
    if let EqualityCase::CaseB { thetas, s } = classify_equality_case(&t, 1e-9)? {
        println!("angles {:.6} {:.6} (arctan√2 = {:.6})", thetas[0], thetas[1], SQRT_2.atan());
        println!("S(ν₀, ν₁)(e₂) = {:+.3}, S(ν₁, ν₀)(e₂) = {:+.3}", s.entry(0, 1, 0), s.entry(1, 0, 0));
    }
    let a = austere_check(&t, 1e-8);
    println!("austere {} simple {} span {}", a.austere, a.simple, a.span_dim);
    Ok(())
}
