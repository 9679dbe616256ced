//! Jordan angles between two random 3-planes in ℝ⁷, plus the anti-involution
//! on the largest-angle cluster.

use bernstein_lab::jordan::{anti_involution, jordan_decomposition, symmetry_report};
use bernstein_lab::{tol, Subspace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> bernstein_lab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let p = Subspace::random(&mut rng, 7, 3);
    let q0 = Subspace::random(&mut rng, 7, 3);

    let dec = jordan_decomposition(&p, &q0, tol::CLUSTER)?;
    for c in dec.classes() {
        println!("θ = {:.6} rad ({:.3}°), multiplicity {}", c.theta, c.theta.to_degrees(), c.multiplicity);
    }
    println!("nonzero rank {}", dec.nonzero_rank());

    let sym = symmetry_report(&p, &q0, tol::CLUSTER)?;
    println!("angles agree with the reversed pair: {}", sym.holds(1e-10));

    let phi = anti_involution(&p, &q0, 0)?;
    let sq = phi.matrix() * phi.matrix();
    let k = sq.nrows();
    let defect = (sq + nalgebra::DMatrix::<f64>::identity(k, k)).abs().max();
    println!("θ = {:.6}: |Φ² + Id| = {defect:.2e} on a {k}-dimensional domain", phi.theta);
    let u = phi.angle_space().column(0).into_owned();
    println!("Φ maps P_θ into its complement: |⟨u, Φu⟩| = {:.2e}", u.dot(&phi.apply(&u)).abs());
    Ok(())
}
