//! Grid scan of the three-variable bound over its region.

use bernstein_lab::curvature::{region_f, scan_region_f, RegionPoint};

fn main() -> bernstein_lab::Result<()> {
    for d in [20, 50, 100] {
        let s = scan_region_f(d)?;
        println!(
            "density {d:>3}: max {:.8} at (u, v, w) = ({:.4}, {:.4}, {:.4}) over {} points",
            s.max_found, s.argmax.u, s.argmax.v, s.argmax.w, s.evaluations
        );
    }
    let inside = RegionPoint::new(4.0, 1.5, 1.2)?;
    println!("f(4, 1.5, 1.2) = {:.8}", region_f(&inside)?);
    // uvw > 9 is outside the region
    println!("{:?}", RegionPoint::new(4.0, 2.5, 1.2).unwrap_err());
    Ok(())
}
