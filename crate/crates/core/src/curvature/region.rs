use crate::{Error, Result};
use serde::Serialize;

/// A point of `Ω = {u > 3 > v ≥ w > 1, uvw ≤ 9}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionPoint {
    pub u: f64,
    pub v: f64,
    pub w: f64,
}

/// Relative slack on `uvw ≤ 9`, absorbing the rounding of `u = 9/(vw)`.
const PRODUCT_SLACK: f64 = 1e-12;

impl RegionPoint {
    pub fn new(u: f64, v: f64, w: f64) -> Result<Self> {
        let p = Self { u, v, w };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let Self { u, v, w } = *self;
        let inside = u > 3.0 && 3.0 > v && v >= w && w > 1.0 && u * v * w <= 9.0 * (1.0 + PRODUCT_SLACK);
        if inside {
            Ok(())
        } else {
            Err(Error::RegionViolation(format!("({u}, {v}, {w}) is outside Ω")))
        }
    }

    pub fn product(&self) -> f64 {
        self.u * self.v * self.w
    }
}

/// `1/(3−u) + 1/(3−v) + 1/(3−w)`.
pub fn region_f(p: &RegionPoint) -> Result<f64> {
    p.validate()?;
    Ok(f_raw(p.u, p.v, p.w))
}

fn f_raw(u: f64, v: f64, w: f64) -> f64 {
    1.0 / (3.0 - u) + 1.0 / (3.0 - v) + 1.0 / (3.0 - w)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionScan {
    pub max_found: f64,
    pub argmax: RegionPoint,
    pub grid_density: usize,
    pub evaluations: u64,
}

/// Point on the face `uvw = 9` above `(v, w)`, if it lies in Ω.
fn on_face(v: f64, w: f64) -> Option<(f64, RegionPoint)> {
    if !(1.0 < w && w <= v && v < 3.0) {
        return None;
    }
    let u = 9.0 / (v * w);
    let p = RegionPoint { u, v, w };
    p.validate().ok()?;
    Some((f_raw(u, v, w), p))
}

/// Grid search over Ω followed by compass refinement of the best grid point.
///
/// The grid uses `v, w ∈ {1 + 2k/d : 0 < k < d}` and `u` stepping from just
/// above 3 to the face `uvw = 9`, which is always included. The refinement
/// then moves `(v, w)` on that face with a halving step.
pub fn scan_region_f(grid_density: usize) -> Result<RegionScan> {
    if grid_density < 10 {
        return Err(Error::PreconditionViolated(format!(
            "grid density {grid_density} < 10"
        )));
    }
    let d = grid_density;
    let h = 2.0 / d as f64;
    let mut best: Option<(f64, RegionPoint)> = None;
    let mut evaluations = 0u64;
    let consider = |cand: (f64, RegionPoint), best: &mut Option<(f64, RegionPoint)>| {
        if best.map_or(true, |b| cand.0 > b.0) {
            *best = Some(cand);
        }
    };
    for kv in 1..d {
        let v = 1.0 + h * kv as f64;
        for kw in 1..=kv {
            let w = 1.0 + h * kw as f64;
            let Some((top, face)) = on_face(v, w) else { continue };
            evaluations += 1;
            consider((top, face), &mut best);
            for ku in 1..d {
                let p = RegionPoint { u: 3.0 + (face.u - 3.0) * ku as f64 / d as f64, v, w };
                // where vw = 3 the face sits on u = 3 and the steps round onto it
                if p.validate().is_err() {
                    continue;
                }
                evaluations += 1;
                consider((f_raw(p.u, v, w), p), &mut best);
            }
        }
    }
    let (mut value, mut point) = best.ok_or_else(|| {
        Error::RegionViolation("grid produced no interior points".into())
    })?;

    // f increases in u, so the refinement stays on the face uvw = 9.
    if let Some((fv, fp)) = on_face(point.v, point.w) {
        if fv > value {
            value = fv;
            point = fp;
        }
    }
    let mut step = h;
    while step > 1e-16 {
        let mut moved = false;
        for (dv, dw) in [(-1.0, 0.0), (0.0, -1.0), (-1.0, -1.0), (1.0, 0.0), (0.0, 1.0)] {
            let cand = on_face(point.v + dv * step, point.w + dw * step);
            evaluations += 1;
            if let Some((fv, fp)) = cand {
                if fv > value {
                    value = fv;
                    point = fp;
                    moved = true;
                    break;
                }
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    Ok(RegionScan {
        max_found: value,
        argmax: point,
        grid_density: d,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_examples() {
        let p = RegionPoint::new(4.0, 1.5, 1.5).unwrap();
        assert!((region_f(&p).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let p = RegionPoint::new(3.01, 1.01, 1.01).unwrap();
        let expected = 1.0 / (3.0 - 3.01) + 2.0 / 1.99;
        assert!((region_f(&p).unwrap() - expected).abs() < 1e-9);
        assert!(RegionPoint::new(2.0, 1.5, 1.2).is_err());
        assert!(RegionPoint::new(5.0, 1.5, 1.5).is_err());
        assert!(RegionPoint::new(4.0, 1.2, 1.5).is_err());
    }

    #[test]
    fn limit_probe_approaches_five_sixths() {
        let mut last = f64::NEG_INFINITY;
        for k in 1..8 {
            let d = 10f64.powi(-k);
            let v = 1.0 + d;
            let p = RegionPoint::new(9.0 / (v * v), v, v).unwrap();
            let f = region_f(&p).unwrap();
            assert!(f < 5.0 / 6.0 && f > last);
            last = f;
        }
        assert!(5.0 / 6.0 - last < 1e-6);
    }

    #[test]
    fn scan_reaches_the_corner() {
        let s = scan_region_f(20).unwrap();
        assert!(s.max_found <= 5.0 / 6.0 + 1e-6);
        assert!(s.max_found > 5.0 / 6.0 - 1e-9);
        assert!((s.argmax.product() - 9.0).abs() < 1e-3);
        assert!(scan_region_f(9).is_err());
    }

    #[test]
    fn grid_through_the_vw_equals_three_curve_stays_finite() {
        // d = 21 puts (v, w) = (7/3, 9/7) on the grid, where u = 9/(vw) = 3
        for d in [21, 35, 42] {
            let s = scan_region_f(d).unwrap();
            assert!(s.max_found.is_finite() && s.max_found <= 5.0 / 6.0 + 1e-6, "d = {d}: {}", s.max_found);
        }
    }
}
