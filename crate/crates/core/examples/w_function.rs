//! The Plücker inner product `w` of oriented planes and its angle product.

use bernstein_lab::pluecker::{orientation_flip, v_value, w_inner};
use bernstein_lab::Subspace;
use nalgebra::DMatrix;

fn main() -> bernstein_lab::Result<()> {
    // a 2-plane in ℝ⁴ tilted from the coordinate plane by 0.3 and 0.9
    let (a, b): (f64, f64) = (0.3, 0.9);
    let frame = DMatrix::from_column_slice(
        4,
        2,
        &[a.cos(), 0.0, a.sin(), 0.0, 0.0, b.cos(), 0.0, b.sin()],
    );
    let p = Subspace::from_columns(&frame)?;
    let q0 = Subspace::coordinate(4, [0, 1])?;

    let w = w_inner(&p, &q0)?;
    println!("w = {:.12}", w.w);
    println!("Π cos θ = {:.12}", w.angle_product);
    println!("cos a · cos b = {:.12}", a.cos() * b.cos());
    println!("v = 1/w = {:.12}", v_value(&p, &q0)?);
    println!("reversed orientation: {:.12}", w_inner(&p.reversed(), &q0)?.w);
    println!("flip factor = {}", orientation_flip(&p, &q0)?);
    Ok(())
}
