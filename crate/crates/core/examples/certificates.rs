//! Sampled certificates for the quadratic-form lemmas and the ε₀ estimate.

use bernstein_lab::curvature::{
    certify_ii, certify_iii_positive, certify_prop35, estimate_eps0, term_iii_min_eigenvalue,
};

fn main() -> bernstein_lab::Result<()> {
    let seed = 11;
    for cert in [
        certify_ii(50, 10_000, seed)?,
        certify_iii_positive(100_000, seed)?,
        certify_prop35(10_000, seed)?,
    ] {
        println!(
            "{:<12} extremal {:>12.6e}  pass {}",
            cert.lemma, cert.extremal_value, cert.pass
        );
    }

    println!("III matrix at a = b = c = 0.5: smallest eigenvalue {:.6}", term_iii_min_eigenvalue(0.5, 0.5, 0.5));

    for r in 1..=3 {
        let e = estimate_eps0(r, 30, 2_000, seed)?;
        println!("ε₀ estimate, rank ≤ {r}: {:.6e} (sampled {:.6e})", e.value, e.sampled_min);
    }
    Ok(())
}
