//! Cones over spherical submanifolds and the scale invariance of `v` along rays.

use bernstein_lab::submanifold::{
    cone_over, conelike_check, equatorial_circle, object, patch_at, small_circle,
};
use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn main() -> bernstein_lab::Result<()> {
    let flat = cone_over(Arc::new(equatorial_circle()), (0.5, 4.0))?;
    let round = cone_over(Arc::new(small_circle(0.6)), (0.5, 4.0))?;
    let x = DVector::from_column_slice(&[1.5, 0.7]);
    println!("cone over the equator: |H| = {:.2e}", patch_at(&flat, &x, 1e-4)?.mean_curvature_norm());
    println!("cone over a small circle: |H| = {:.6}", patch_at(&round, &x, 1e-4)?.mean_curvature_norm());

    let obj = object("clifford-cone")?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let pts: Vec<_> = (0..3).map(|_| obj.sample_point(&mut rng)).collect();
    let r = conelike_check(obj.immersion.as_ref(), &obj.q0, &pts, &[0.5, 1.0, 2.0, 4.0])?;
    for ray in &r.v_along_rays {
        println!("v along a ray at scales {:?}: {:.10?}", r.scales, ray);
    }
    println!("variation {:.2e}", r.variation);
    Ok(())
}
