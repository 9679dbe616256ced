//! Finite-difference geometry of immersions `F: U ⊂ ℝⁿ → ℝ^(n+m)`: frames,
//! second fundamental form, mean curvature, the normal Gauss map paired with a
//! fixed `Q₀`, and the direct side of the `Δv` identity.

mod checks;
mod fd;
mod objects;
mod patch;

pub use checks::{
    aligned_table, bridge_check, bridge_convergence, codazzi_residual, conelike_check,
    laplacian_v_direct, laplacian_v_direct_extrapolated, BridgeConvergence, BridgeReport, ConelikeReport,
};
pub use objects::{
    affine_graph, clifford_cone, clifford_torus, equatorial_circle, helicoid, lawson_osserman,
    lawson_osserman_graph, object, object_names, paraboloid, small_circle, small_circle_cone,
    sphere_graph, Expected, TestObject,
};
pub use patch::{gauss_w, patch_at, patch_at_extrapolated, slope_delta, ImmersedPatch};

use crate::{Error, Result};
use nalgebra::DVector;
use std::sync::Arc;

/// Axis-aligned validity box of a chart.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl DomainBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len(), "box bounds differ in length");
        Self { lo, hi }
    }

    pub fn cube(dim: usize, half_width: f64) -> Self {
        Self::new(vec![-half_width; dim], vec![half_width; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// Whether the closed ball of sup-radius `radius` around `x` lies inside.
    pub fn contains_ball(&self, x: &DVector<f64>, radius: f64) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(v, (lo, hi))| v - radius >= *lo && v + radius <= *hi)
    }

    pub fn check(&self, x: &DVector<f64>, radius: f64) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        if self.contains_ball(x, radius) {
            Ok(())
        } else {
            Err(Error::OutOfBox(x.iter().copied().collect()))
        }
    }
}

/// A chart `F: U → ℝ^(n+m)`.
pub trait Immersion: Send + Sync {
    fn name(&self) -> &str;

    fn domain_dim(&self) -> usize;

    fn ambient_dim(&self) -> usize;

    fn domain(&self) -> &DomainBox;

    fn eval(&self, x: &DVector<f64>) -> Result<DVector<f64>>;

    fn recommended_step(&self) -> f64 {
        crate::tol::FD_STEP
    }

    fn codim(&self) -> usize {
        self.ambient_dim() - self.domain_dim()
    }

    /// The point `s·x` on the ray through `x`, in domain coordinates, and the
    /// factor to apply to the finite-difference step there. Graphs dilate the
    /// whole domain vector and scale the step with it.
    fn ray_point(&self, x: &DVector<f64>, s: f64) -> (DVector<f64>, f64) {
        (x * s, s)
    }
}

type VecFn = dyn Fn(&DVector<f64>) -> Result<DVector<f64>> + Send + Sync;

/// Immersion from a closure.
#[derive(Clone)]
pub struct FnImmersion {
    name: String,
    domain_dim: usize,
    ambient_dim: usize,
    domain: DomainBox,
    step: f64,
    f: Arc<VecFn>,
}

impl FnImmersion {
    pub fn new(
        name: impl Into<String>,
        ambient_dim: usize,
        domain: DomainBox,
        f: impl Fn(&DVector<f64>) -> Result<DVector<f64>> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            domain_dim: domain.dim(),
            ambient_dim,
            domain,
            step: crate::tol::FD_STEP,
            f: Arc::new(f),
        }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }
}

impl std::fmt::Debug for FnImmersion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FnImmersion")
            .field("name", &self.name)
            .field("domain_dim", &self.domain_dim)
            .field("ambient_dim", &self.ambient_dim)
            .finish()
    }
}

impl Immersion for FnImmersion {
    fn name(&self) -> &str {
        &self.name
    }
    fn domain_dim(&self) -> usize {
        self.domain_dim
    }
    fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }
    fn domain(&self) -> &DomainBox {
        &self.domain
    }
    fn eval(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        self.domain.check(x, 0.0)?;
        let y = (self.f)(x)?;
        if y.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: y.len(),
            });
        }
        Ok(y)
    }
    fn recommended_step(&self) -> f64 {
        self.step
    }
}

/// `f = (f¹..f^m): U ⊂ ℝⁿ → ℝ^m`, viewed through its graph `x ↦ (x, f(x))`.
#[derive(Clone)]
pub struct GraphFunction {
    name: String,
    n: usize,
    m: usize,
    domain: DomainBox,
    f: Arc<VecFn>,
}

impl GraphFunction {
    pub fn new(
        name: impl Into<String>,
        m: usize,
        domain: DomainBox,
        f: impl Fn(&DVector<f64>) -> Result<DVector<f64>> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            n: domain.dim(),
            m,
            domain,
            f: Arc::new(f),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn domain(&self) -> &DomainBox {
        &self.domain
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        self.domain.check(x, 0.0)?;
        let y = (self.f)(x)?;
        if y.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: y.len(),
            });
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::OutOfBox(x.iter().copied().collect()));
        }
        Ok(y)
    }
}

impl std::fmt::Debug for GraphFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GraphFunction")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("m", &self.m)
            .finish()
    }
}

impl Immersion for GraphFunction {
    fn name(&self) -> &str {
        &self.name
    }
    fn domain_dim(&self) -> usize {
        self.n
    }
    fn ambient_dim(&self) -> usize {
        self.n + self.m
    }
    fn domain(&self) -> &DomainBox {
        &self.domain
    }
    fn eval(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        let y = GraphFunction::eval(self, x)?;
        Ok(DVector::from_iterator(
            self.n + self.m,
            x.iter().chain(y.iter()).copied(),
        ))
    }
}

/// `(t, y) ↦ t·x(y)` over a spherical immersion `x`.
#[derive(Clone)]
pub struct ConeImmersion {
    name: String,
    base: Arc<dyn Immersion>,
    domain: DomainBox,
}

/// How far from the unit sphere a base immersion may stray.
const SPHERE_TOL: f64 = 1e-10;

/// Cone over `base`, which must map into the unit sphere. The radial
/// coordinate comes first and ranges over `t_range`.
pub fn cone_over(base: Arc<dyn Immersion>, t_range: (f64, f64)) -> Result<ConeImmersion> {
    if !(t_range.0 > 0.0 && t_range.1 > t_range.0) {
        return Err(Error::PreconditionViolated(format!(
            "cone radial range {t_range:?} must satisfy 0 < t₀ < t₁"
        )));
    }
    let bx = base.domain();
    let k = bx.dim();
    // Corners are often singular for spherical charts, so probe a 5^k lattice
    // strictly inside the box.
    let mut deviation: f64 = 0.0;
    let probes = 5usize.pow(k as u32);
    for idx in 0..probes {
        let mut rem = idx;
        let y = DVector::from_fn(k, |i, _| {
            let c = (rem % 5) as f64;
            rem /= 5;
            bx.lo[i] + (bx.hi[i] - bx.lo[i]) * (c + 0.5) / 5.0
        });
        let x = base.eval(&y)?;
        deviation = deviation.max((x.norm() - 1.0).abs());
    }
    if deviation > SPHERE_TOL {
        return Err(Error::NotSpherical { deviation });
    }
    let mut lo = vec![t_range.0];
    let mut hi = vec![t_range.1];
    lo.extend_from_slice(&bx.lo);
    hi.extend_from_slice(&bx.hi);
    Ok(ConeImmersion {
        name: format!("cone over {}", base.name()),
        base,
        domain: DomainBox::new(lo, hi),
    })
}

impl ConeImmersion {
    pub fn base(&self) -> &Arc<dyn Immersion> {
        &self.base
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

impl Immersion for ConeImmersion {
    fn name(&self) -> &str {
        &self.name
    }
    fn domain_dim(&self) -> usize {
        self.base.domain_dim() + 1
    }
    fn ambient_dim(&self) -> usize {
        self.base.ambient_dim()
    }
    fn domain(&self) -> &DomainBox {
        &self.domain
    }
    fn eval(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        self.domain.check(x, 0.0)?;
        let y = x.rows(1, x.len() - 1).into_owned();
        Ok(self.base.eval(&y)? * x[0])
    }
    fn recommended_step(&self) -> f64 {
        self.base.recommended_step()
    }
    fn ray_point(&self, x: &DVector<f64>, s: f64) -> (DVector<f64>, f64) {
        let mut p = x.clone();
        p[0] *= s;
        (p, 1.0)
    }
}
