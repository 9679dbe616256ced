//! Named test immersions with their known geometry.

use super::{cone_over, DomainBox, FnImmersion, GraphFunction, Immersion};
use crate::subspace::Subspace;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::Arc;

/// `(√5/2)·η(x)/|x|` with `η(z₁, z₂) = (|z₁|²−|z₂|², 2z₁z̄₂)` the Hopf map,
/// `z₁ = x₁ + ix₂`, `z₂ = x₃ + ix₄`. Homogeneous of degree one.
pub fn lawson_osserman(x: &DVector<f64>) -> Result<DVector<f64>> {
    if x.len() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: x.len() });
    }
    let r = x.norm();
    if r == 0.0 {
        return Err(Error::AtVertex);
    }
    let (x1, x2, x3, x4) = (x[0], x[1], x[2], x[3]);
    let c = 5f64.sqrt() / (2.0 * r);
    Ok(DVector::from_vec(vec![
        c * (x1 * x1 + x2 * x2 - x3 * x3 - x4 * x4),
        c * 2.0 * (x1 * x3 + x2 * x4),
        c * 2.0 * (x2 * x3 - x1 * x4),
    ]))
}

pub fn lawson_osserman_graph() -> GraphFunction {
    GraphFunction::new("lawson-osserman", 3, DomainBox::cube(4, 8.0), lawson_osserman)
}

/// `x ↦ Ax + b` on `[−2, 2]³` with a fixed 2×3 matrix.
pub fn affine_graph() -> GraphFunction {
    let a = DMatrix::from_row_slice(2, 3, &[0.3, -0.5, 0.2, 0.1, 0.4, -0.7]);
    let b = DVector::from_vec(vec![0.25, -0.5]);
    GraphFunction::new("affine", 2, DomainBox::cube(3, 2.0), move |x| Ok(&a * x + &b))
}

/// Upper hemisphere `√(ρ² − |x|²)` over `|x_i| ≤ ρ/2`.
pub fn sphere_graph(rho: f64) -> GraphFunction {
    GraphFunction::new("sphere", 1, DomainBox::cube(2, 0.5 * rho), move |x| {
        Ok(DVector::from_element(1, (rho * rho - x.norm_squared()).sqrt()))
    })
}

/// `|x|²` on `[−3, 3]²`; not a cone.
pub fn paraboloid() -> GraphFunction {
    GraphFunction::new("paraboloid", 1, DomainBox::cube(2, 3.0), |x| {
        Ok(DVector::from_element(1, x.norm_squared()))
    })
}

/// `(u cos s, u sin s, c s)`.
pub fn helicoid(c: f64) -> FnImmersion {
    let bx = DomainBox::new(vec![-2.0, -4.0], vec![2.0, 4.0]);
    FnImmersion::new("helicoid", 3, bx, move |p| {
        let (u, s) = (p[0], p[1]);
        Ok(DVector::from_vec(vec![u * s.cos(), u * s.sin(), c * s]))
    })
}

/// `S¹(1/√2) × S¹(1/√2) ⊂ S³`.
pub fn clifford_torus() -> FnImmersion {
    FnImmersion::new("clifford-torus", 4, DomainBox::cube(2, 7.0), |p| {
        let (a, b) = (p[0], p[1]);
        Ok(DVector::from_vec(vec![a.cos(), a.sin(), b.cos(), b.sin()]) * FRAC_1_SQRT_2)
    })
}

/// Great circle `z = 0` of `S²`.
pub fn equatorial_circle() -> FnImmersion {
    FnImmersion::new("equator", 3, DomainBox::cube(1, 7.0), |p| {
        Ok(DVector::from_vec(vec![p[0].cos(), p[0].sin(), 0.0]))
    })
}

/// Circle of radius `radius` on `S²` at height `√(1 − radius²)`.
pub fn small_circle(radius: f64) -> FnImmersion {
    let z = (1.0 - radius * radius).sqrt();
    FnImmersion::new("small-circle", 3, DomainBox::cube(1, 7.0), move |p| {
        Ok(DVector::from_vec(vec![radius * p[0].cos(), radius * p[0].sin(), z]))
    })
}

pub fn clifford_cone() -> Arc<dyn Immersion> {
    let cone = cone_over(Arc::new(clifford_torus()), (0.05, 20.0))
        .expect("the Clifford torus is spherical")
        .named("clifford-cone");
    Arc::new(cone)
}

pub fn small_circle_cone() -> Arc<dyn Immersion> {
    let cone = cone_over(Arc::new(small_circle(0.5)), (0.05, 20.0))
        .expect("small circle is spherical")
        .named("small-circle-cone");
    Arc::new(cone)
}

/// Known geometry of a test object at its sample points.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Expected {
    pub minimal: bool,
    pub cone: bool,
    pub w: Option<f64>,
    pub slope_delta: Option<f64>,
    pub mean_curvature_norm: Option<f64>,
}

type Sampler = dyn Fn(&mut ChaCha8Rng) -> DVector<f64> + Send + Sync;

/// A registered immersion with its default `Q₀`, expected values and a
/// sampler of admissible points (where `w > 0`).
#[derive(Clone)]
pub struct TestObject {
    pub name: &'static str,
    pub immersion: Arc<dyn Immersion>,
    pub graph: Option<GraphFunction>,
    pub q0: Subspace,
    pub expected: Expected,
    sampler: Arc<Sampler>,
}

impl TestObject {
    pub fn sample_point(&self, rng: &mut ChaCha8Rng) -> DVector<f64> {
        (self.sampler)(rng)
    }
}

impl std::fmt::Debug for TestObject {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TestObject").field("name", &self.name).finish()
    }
}

const NAMES: [&str; 7] = [
    "affine",
    "sphere",
    "helicoid",
    "clifford-cone",
    "lawson-osserman",
    "small-circle-cone",
    "paraboloid",
];

pub fn object_names() -> &'static [&'static str] {
    &NAMES
}

fn uniform_box(lo: Vec<f64>, hi: Vec<f64>) -> Arc<Sampler> {
    Arc::new(move |rng: &mut ChaCha8Rng| {
        DVector::from_fn(lo.len(), |i, _| rng.gen_range(lo[i]..=hi[i]))
    })
}

fn coordinate_q0(ambient: usize, m: usize) -> Subspace {
    Subspace::coordinate(ambient, ambient - m..ambient).expect("valid coordinate plane")
}

/// Looks up a registered test object.
pub fn object(name: &str) -> Result<TestObject> {
    let graph_object = |name: &'static str, g: GraphFunction, expected: Expected, sampler| {
        let q0 = coordinate_q0(g.n() + g.m(), g.m());
        TestObject {
            name,
            immersion: Arc::new(g.clone()),
            graph: Some(g),
            q0,
            expected,
            sampler,
        }
    };
    let obj = match name {
        "affine" => graph_object(
            "affine",
            affine_graph(),
            Expected { minimal: true, mean_curvature_norm: Some(0.0), ..Default::default() },
            uniform_box(vec![-1.0; 3], vec![1.0; 3]),
        ),
        "sphere" => graph_object(
            "sphere",
            sphere_graph(1.0),
            Expected { mean_curvature_norm: Some(2.0), ..Default::default() },
            uniform_box(vec![-0.3; 2], vec![0.3; 2]),
        ),
        "paraboloid" => graph_object(
            "paraboloid",
            paraboloid(),
            Expected::default(),
            uniform_box(vec![-1.0; 2], vec![1.0; 2]),
        ),
        "lawson-osserman" => graph_object(
            "lawson-osserman",
            lawson_osserman_graph(),
            Expected {
                minimal: true,
                cone: true,
                w: Some(1.0 / 9.0),
                slope_delta: Some(9.0),
                mean_curvature_norm: Some(0.0),
            },
            Arc::new(|rng: &mut ChaCha8Rng| {
                let g = DVector::from_fn(4, |_, _| StandardNormal.sample(rng));
                let r: f64 = g.norm();
                g / r
            }),
        ),
        "helicoid" => TestObject {
            name: "helicoid",
            immersion: Arc::new(helicoid(1.0)),
            graph: None,
            q0: coordinate_q0(3, 1),
            expected: Expected { minimal: true, mean_curvature_norm: Some(0.0), ..Default::default() },
            sampler: uniform_box(vec![0.5, -PI], vec![1.5, PI]),
        },
        "clifford-cone" => TestObject {
            name: "clifford-cone",
            immersion: clifford_cone(),
            graph: None,
            q0: coordinate_q0(4, 1),
            expected: Expected {
                minimal: true,
                cone: true,
                mean_curvature_norm: Some(0.0),
                ..Default::default()
            },
            // w = −sin φ₂/√2 here, so φ₂ ∈ [0.6−π, −0.6] keeps w above 0.39.
            sampler: uniform_box(vec![1.0, -PI, 0.6 - PI], vec![1.0, PI, -0.6]),
        },
        "small-circle-cone" => TestObject {
            name: "small-circle-cone",
            immersion: small_circle_cone(),
            graph: None,
            q0: coordinate_q0(3, 1),
            expected: Expected {
                cone: true,
                mean_curvature_norm: Some(3f64.sqrt()),
                ..Default::default()
            },
            sampler: uniform_box(vec![1.0, -PI], vec![1.0, PI]),
        },
        other => {
            return Err(Error::PreconditionViolated(format!(
                "unknown test object '{other}' (known: {})",
                NAMES.join(", ")
            )))
        }
    };
    Ok(obj)
}
