//! Acceptance run: one line per criterion, non-zero exit if any fails.

mod common;

use bernstein_lab::curvature::*;
use bernstein_lab::jordan::{anti_involution, jordan_decomposition, symmetry_report};
use bernstein_lab::pluecker::{orientation_flip, w_determinant};
use bernstein_lab::submanifold::*;
use bernstein_lab::{tol, Subspace};
use common::{jacobi_eigen, jacobi_singular_values, random_pair, rng, svd_oracle_angles};
use nalgebra::{DMatrix, DVector};
use serde_json::Value;
use std::f64::consts::SQRT_2;
use std::process::Command;
use std::time::Instant;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

const SHAPES: [(usize, usize); 5] = [(1, 2), (2, 2), (2, 3), (3, 4), (4, 5)];

/// `count` pairs cycling through the shapes, seeded.
fn pairs(count: usize, seed: u64) -> Vec<(Subspace, Subspace)> {
    let mut r = rng(seed);
    (0..count)
        .map(|k| {
            let (m, n) = SHAPES[k % SHAPES.len()];
            random_pair(&mut r, m, n)
        })
        .collect()
}

fn jordan_oracle() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut worst_cos2: f64 = 0.0;
    for (p, q) in pairs(500, 2024) {
        let dec = jordan_decomposition(&p, &q, tol::CLUSTER).unwrap();
        let ours = dec.angles_with_multiplicity();
        let oracle = svd_oracle_angles(&p, &q);
        for (a, b) in ours.iter().zip(&oracle) {
            worst = worst.max((a - b).abs());
        }
        // second route: spectrum of 𝒫∘𝒫₀ on P
        let (vals, _) = jacobi_eigen(&(p.frame().transpose() * q.projector().matrix() * p.frame()));
        let mut cos2: Vec<f64> = ours.iter().map(|t| t.cos().powi(2)).collect();
        cos2.sort_by(f64::total_cmp);
        for (a, b) in cos2.iter().zip(&vals) {
            worst_cos2 = worst_cos2.max((a - b).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-9 && worst_cos2 <= 1e-12 && secs < 10.0,
        format!("max |Δθ| = {worst:.2e} (≤ 1e-9), max |Δcos²θ| vs 𝒫∘𝒫₀ = {worst_cos2:.2e}, {secs:.2} s (< 10 s)"),
    )
}

fn symmetry_suite() -> Outcome {
    let start = Instant::now();
    let tolerance = 1e-9;
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let mut phis = 0;
    for (k, (p, q)) in pairs(200, 77).into_iter().enumerate() {
        let s = symmetry_report(&p, &q, tol::CLUSTER).unwrap();
        if !s.holds(tolerance) {
            failures.push(format!("pair {k}: Arg symmetry or m_θ = m_θ^⊥"));
        }
        let dec = jordan_decomposition(&p, &q, tol::CLUSTER).unwrap();
        let perp = p.complement().unwrap();
        let mut planes: Vec<DMatrix<f64>> = Vec::new();
        for (idx, c) in dec.clusters().iter().enumerate() {
            let (sn, cs) = c.theta.sin_cos();
            if sn < tol::ANGLE_GUARD || cs < tol::ANGLE_GUARD {
                continue;
            }
            phis += 1;
            let phi = anti_involution(&p, &q, idx).unwrap();
            let mat = phi.matrix();
            let id = DMatrix::<f64>::identity(mat.nrows(), mat.nrows());
            worst = worst.max((mat.transpose() * mat - &id).amax());
            worst = worst.max((mat * mat + &id).amax());
            for u in phi.angle_space().column_iter() {
                let u = u.into_owned();
                let img = phi.apply(&u);
                worst = worst.max((perp.project(&img).unwrap() - &img).amax());
                let formula = perp.project(&q.project(&u).unwrap()).unwrap() * (-1.0 / (sn * cs));
                worst = worst.max((img - formula).amax());
            }
            for v in phi.complement_angle_space().column_iter() {
                let v = v.into_owned();
                let img = phi.apply(&v);
                worst = worst.max((p.project(&img).unwrap() - &img).amax());
            }
            planes.push(phi.frame().clone());
        }
        for i in 0..planes.len() {
            for j in i + 1..planes.len() {
                worst = worst.max((planes[i].transpose() * &planes[j]).amax());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        failures.is_empty() && worst <= tolerance && secs < 10.0,
        format!(
            "{} symmetry failures, {phis} Φ_θ checked, max residual {worst:.2e} (≤ 1e-9), {secs:.2} s (< 10 s)",
            failures.len()
        ),
    )
}

fn w_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut worst_flip: f64 = 0.0;
    for (p, q) in pairs(500, 2024) {
        let w = w_determinant(&p, &q).unwrap();
        let cosines: f64 = jacobi_singular_values(&(p.frame().transpose() * q.frame())).iter().product();
        worst = worst.max((w.abs() - cosines).abs());
        worst_flip = worst_flip.max((orientation_flip(&p, &q).unwrap() + w).abs());
    }
    outcome(
        worst <= 1e-10 && worst_flip <= 1e-12,
        format!("max ||w| − Π cos θ| = {worst:.2e} (≤ 1e-10), max |w + w_flipped| = {worst_flip:.2e} (≤ 1e-12)"),
    )
}

fn second_form() -> Outcome {
    let cert = certify_ii(100, 10_000, 42).unwrap();
    let mut worst_eq: f64 = 0.0;
    for k in 0..100 {
        let t = -5.0 + 10.0 * k as f64 / 99.0;
        worst_eq = worst_eq.max(term_ii(SQRT_2, SQRT_2, t, -t).abs());
        worst_eq = worst_eq.max(term_ii(1.0, 2.0, t, -t).abs());
    }
    outcome(
        cert.extremal_value >= -1e-12 && worst_eq <= 1e-12,
        format!(
            "min term II over 100 λλ values × 10⁴ pairs = {:.2e} (≥ −1e-12), max |II| on λλ = 2, h_ab = −h_ba: {worst_eq:.2e} (≤ 1e-12)",
            cert.extremal_value
        ),
    )
}

fn third_form() -> Outcome {
    let start = Instant::now();
    let cert = certify_iii_positive(100_000, 42).unwrap();
    let scan = scan_region_f(100).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let product = scan.argmax.product();
    outcome(
        cert.extremal_value > 0.0 && scan.max_found <= 5.0 / 6.0 + 1e-6 && (product - 9.0).abs() <= 1e-3 && secs < 60.0,
        format!(
            "min eigenvalue over 10⁵ samples = {:.4} (> 0), scan max = {:.10} (≤ 5/6 + 1e-6), |uvw − 9| = {:.1e}, {secs:.2} s (< 60 s)",
            cert.extremal_value,
            scan.max_found,
            (product - 9.0).abs()
        ),
    )
}

fn eps0() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for r in 1..=3 {
        let e = estimate_eps0(r, 30, 5_000, 7).unwrap();
        pass &= e.value > 0.0 && e.pass();
        parts.push(format!("r={r}: {:.4e}", e.value));
    }
    outcome(pass, format!("{} (all > 0)", parts.join(", ")))
}

fn prop35() -> Outcome {
    let cert = certify_prop35(10_000, 35).unwrap();
    let mut worst_q: f64 = 0.0;
    let mut worst_theta: f64 = 0.0;
    let mut classified = true;
    for (n, m) in [(3, 2), (4, 3), (5, 2), (6, 4)] {
        for k in 0..10 {
            let t = -1.5 + 3.0 * (k as f64 + 0.5) / 10.0;
            let mut tab = SecondFundamentalFormTable::zeros(n, m, vec![SQRT_2, SQRT_2]).unwrap();
            for i in 2..n {
                tab.set(0, i, 1, t);
                tab.set(1, i, 0, -t);
            }
            worst_q = worst_q.max(laplacian_v_quadratic(&tab).unwrap().abs());
            match classify_equality_case(&tab, 1e-9).unwrap() {
                EqualityCase::CaseB { thetas, s } => {
                    for th in thetas {
                        worst_theta = worst_theta.max((th - SQRT_2.atan()).abs());
                    }
                    for i in 0..n - 2 {
                        classified &= s.entry(0, 1, i) == -s.entry(1, 0, i) && s.entry(0, 0, i) == 0.0;
                        // S_{ν_a ν_b}(e_i) = h_{b, i a}
                        classified &= s.entry(0, 1, i) == tab.get(1, i + 2, 0);
                        classified &= s.entry(1, 0, i) == tab.get(0, i + 2, 1);
                    }
                }
                _ => classified = false,
            }
        }
    }
    outcome(
        cert.extremal_value >= -1e-10 && worst_q <= 1e-10 && worst_theta <= 1e-9 && classified,
        format!(
            "min Δv-quadratic over 10⁴ tables = {:.3e} (≥ −1e-10), case (b): max |q| = {worst_q:.1e}, max |θ − arctan√2| = {worst_theta:.1e}, CaseB with antisymmetric S: {classified}",
            cert.extremal_value
        ),
    )
}

fn lawson_osserman_values() -> Outcome {
    let start = Instant::now();
    let obj = object("lawson-osserman").unwrap();
    let g = obj.graph.clone().unwrap();
    let mut r = rng(8);
    let (mut dw, mut ds, mut hmax) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..20 {
        let x = obj.sample_point(&mut r);
        let p = patch_at(&g, &x, 1e-4).unwrap();
        dw = dw.max((gauss_w(&p, &obj.q0).unwrap() - 1.0 / 9.0).abs());
        ds = ds.max((slope_delta(&g, &x, 1e-4).unwrap() - 9.0).abs());
        hmax = hmax.max(p.mean_curvature_norm());
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        dw <= 1e-6 && ds <= 1e-5 && hmax < 1e-5 && secs < 5.0,
        format!("max |w − 1/9| = {dw:.1e}, max |Δ_f − 9| = {ds:.1e}, max |H| = {hmax:.1e}, {secs:.2} s (< 5 s)"),
    )
}

fn bridge() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    let mut r = rng(9);
    for name in ["clifford-cone", "lawson-osserman"] {
        let obj = object(name).unwrap();
        let (mut worst, mut min_ratio, mut all_converge) = (0.0f64, f64::INFINITY, true);
        for _ in 0..5 {
            let x = obj.sample_point(&mut r);
            let c = bridge_convergence(obj.immersion.as_ref(), &obj.q0, &x, 1e-3).unwrap();
            worst = worst.max(c.coarse.error);
            if c.coarse.error > c.noise_floor {
                min_ratio = min_ratio.min(c.ratio);
            }
            all_converge &= c.converges;
        }
        pass &= worst <= 1e-3 && all_converge;
        let ratio = if min_ratio.is_finite() { format!("min ratio {min_ratio:.2}") } else { "at noise floor".into() };
        parts.push(format!("{name}: max error {worst:.1e}, {ratio}, converges {all_converge}"));
    }
    outcome(pass, parts.join("; "))
}

fn cone_minimality() -> Outcome {
    let mut r = rng(10);
    let clifford = object("clifford-cone").unwrap();
    let small = object("small-circle-cone").unwrap();
    let (mut hc, mut hs) = (0.0f64, f64::INFINITY);
    for _ in 0..10 {
        let x = clifford.sample_point(&mut r);
        hc = hc.max(patch_at(clifford.immersion.as_ref(), &x, 1e-4).unwrap().mean_curvature_norm());
        let y = small.sample_point(&mut r);
        hs = hs.min(patch_at(small.immersion.as_ref(), &y, 1e-4).unwrap().mean_curvature_norm());
    }
    outcome(
        hc < 1e-5 && hs > 0.1,
        format!("Clifford cone max |H| = {hc:.1e} (< 1e-5), small-circle cone min |H| = {hs:.4} (> 0.1)"),
    )
}

fn conelike() -> Outcome {
    let scales = [0.25, 0.5, 1.0, 2.0, 4.0];
    let mut r = rng(11);
    let mut parts = Vec::new();
    let mut pass = true;
    for name in ["lawson-osserman", "clifford-cone", "small-circle-cone"] {
        let obj = object(name).unwrap();
        let pts: Vec<DVector<f64>> = (0..5).map(|_| obj.sample_point(&mut r)).collect();
        let rep = conelike_check(obj.immersion.as_ref(), &obj.q0, &pts, &scales).unwrap();
        pass &= rep.variation <= 1e-9;
        parts.push(format!("{name} {:.1e}", rep.variation));
    }
    let para = object("paraboloid").unwrap();
    let pts = vec![DVector::from_vec(vec![0.3, 0.2]), DVector::from_vec(vec![-0.4, 0.1])];
    let rep = conelike_check(para.immersion.as_ref(), &para.q0, &pts, &scales).unwrap();
    pass &= rep.variation > 1e-3;
    outcome(pass, format!("variation {} (≤ 1e-9); paraboloid {:.3} (> 1e-3)", parts.join(", "), rep.variation))
}

fn determinism() -> Outcome {
    let runs = [
        vec!["angles", "--samples", "50", "--seed", "4"],
        vec!["certify-III", "--samples", "20000", "--seed", "42"],
        vec!["certify-prop35", "--samples", "3000", "--seed", "1"],
        vec!["estimate-eps0", "--density", "15", "--samples", "500", "--rank", "2"],
        vec!["check-immersion", "--object", "lawson-osserman"],
        vec!["bridge-check", "--object", "clifford-cone", "--samples", "2"],
    ];
    let mut identical = 0;
    let mut mismatched = Vec::new();
    for args in &runs {
        let payload = || -> Option<String> {
            let out = Command::new(env!("CARGO_BIN_EXE_bernstein")).args(args).output().ok()?;
            let mut v: Value = serde_json::from_slice(&out.stdout).ok()?;
            v.as_object_mut()?.remove("timestamp");
            Some(v.to_string())
        };
        match (payload(), payload()) {
            (Some(a), Some(b)) if a == b => identical += 1,
            _ => mismatched.push(args[0]),
        }
    }
    outcome(
        mismatched.is_empty(),
        format!("{identical}/{} commands byte-identical across reruns {mismatched:?}", runs.len()),
    )
}

fn main() {
    let criteria: [(&str, &str, fn() -> Outcome); 12] = [
        ("AC-01", "Jordan-angle oracle equivalence", jordan_oracle),
        ("AC-02", "angle symmetry and Φ_θ suite", symmetry_suite),
        ("AC-03", "w as product of cosines", w_identity),
        ("AC-04", "second form positivity and equality set", second_form),
        ("AC-05", "third form positivity and region scan", third_form),
        ("AC-06", "positive ε₀ for r = 1, 2, 3", eps0),
        ("AC-07", "Δv quadratic positivity and equality case (b)", prop35),
        ("AC-08", "Lawson–Osserman cone values", lawson_osserman_values),
        ("AC-09", "identity bridge", bridge),
        ("AC-10", "minimal vs non-minimal cones", cone_minimality),
        ("AC-11", "cone-like property", conelike),
        ("AC-12", "CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (id, title, check) in criteria {
        let o = check();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!("[{tag}] {id} {title}: {}", o.detail);
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
