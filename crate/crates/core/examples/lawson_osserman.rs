//! The Lawson–Osserman cone: minimal, with `w ≡ 1/9` and `v ≡ 9`.

use bernstein_lab::submanifold::{gauss_w, object, patch_at, slope_delta};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> bernstein_lab::Result<()> {
    let obj = object("lawson-osserman")?;
    let graph = obj.graph.as_ref().expect("graph object");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..5 {
        let x = obj.sample_point(&mut rng);
        let p = patch_at(obj.immersion.as_ref(), &x, 1e-4)?;
        println!(
            "|x| = {:.3}  |H| = {:.2e}  w = {:.10}  slope Δ = {:.8}",
            x.norm(),
            p.mean_curvature_norm(),
            gauss_w(&p, &obj.q0)?,
            slope_delta(graph, &x, 1e-4)?
        );
    }
    Ok(())
}
