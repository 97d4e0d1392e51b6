//! End-to-end checks run as a plain binary so each prints one status line.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use helicoid_core::cmc::{classify_closed, delta_theta, find_r, generate_cmc_curve};
use helicoid_core::export::{curve_to_csv, export_csv, export_obj, mesh_to_obj, parse_csv, parse_obj};
use helicoid_core::geometry::{mean_curvature, reconstruct_point, Pitch};
use helicoid_core::linalg::{norm, Matrix};
use helicoid_core::mesh::build_mesh;
use helicoid_core::minimal::{minimal_closed_form, minimal_invariant, minimal_law, MinimalCurveSpec};
use helicoid_core::ode::{conserved_drift, integrate_curve, InitialData, IntegratorConfig};
use helicoid_core::rotating::{convergence_experiment, generate_rotating_curve, verify_soliton_structure};
use helicoid_core::selfsim::{helicoidal_samples, reduce_general, soliton_residual, MotionSpec};

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn p(h: f64) -> Pitch<f64> {
    Pitch::from_h(h).unwrap()
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Composite 5-point Gauss-Legendre of `∫_0^{π/2} sqrt(1 - k² sin² t) dt`.
fn elliptic_e_oracle(k: f64) -> f64 {
    let nodes = [0.0, 0.538_469_310_105_683_1, -0.538_469_310_105_683_1, 0.906_179_845_938_664, -0.906_179_845_938_664];
    let weights = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let panels = 400;
    let width = FRAC_PI_2 / panels as f64;
    let mut sum = 0.0;
    for j in 0..panels {
        let mid = width * (j as f64 + 0.5);
        for (x, w) in nodes.iter().zip(&weights) {
            let t = mid + 0.5 * width * x;
            sum += w * 0.5 * width * (1.0 - k * k * t.sin().powi(2)).sqrt();
        }
    }
    sum
}

fn alpha_oracle(h: f64) -> f64 {
    let s = (h * h + 4.0).sqrt();
    s / (h * PI) * elliptic_e_oracle(2.0 / s) + 0.5
}

const HS: [f64; 5] = [0.2, 0.5, 1.0, 2.0, 5.0];

fn unit_circle_curvature() -> Outcome {
    let worst = [0.2, 1.0, 5.0]
        .iter()
        .map(|&h| (mean_curvature(0.0, -1.0, 1.0, p(h)) + 1.0).abs())
        .fold(0.0, f64::max);
    ensure(worst < 1e-14, format!("max |H + 1| = {:.2e}", worst))
}

fn delta_theta_endpoints() -> Outcome {
    let mut worst: f64 = 0.0;
    for &h in &HS {
        let at0 = TAU * (h * h + 1.0).sqrt() / h;
        let s = (h * h + 4.0).sqrt();
        let at1 = 2.0 * s / h * elliptic_e_oracle(2.0 / s) + PI;
        worst = worst.max((delta_theta(0.0, p(h)).map_err(|e| e.to_string())? - at0).abs());
        worst = worst.max((delta_theta(1.0, p(h)).map_err(|e| e.to_string())? - at1).abs());
    }
    ensure(worst < 1e-9, format!("max endpoint error = {:.2e}", worst))
}

fn delta_theta_monotone() -> Outcome {
    let mut increases = 0;
    for &h in &HS {
        let values: Vec<f64> = (0..=50).map(|i| delta_theta(0.1 * i as f64, p(h)).unwrap()).collect();
        increases += values.windows(2).filter(|w| w[1] >= w[0]).count();
    }
    let tail = (delta_theta(1e4, p(1.0)).map_err(|e| e.to_string())? - TAU).abs();
    ensure(
        increases == 0 && tail < 1e-3,
        format!("non-decreasing steps = {}, |Δθ(1e4, 1) - 2π| = {:.2e}", increases, tail),
    )
}

fn closed_curves() -> Outcome {
    let triples = [(1.0, 4, 3), (1.0, 6, 5), (0.5, 2, 1), (0.5, 3, 2), (0.2, 13, 5), (2.0, 11, 10), (5.0, 52, 51)];
    let mut lines = Vec::new();
    let mut ok = true;
    for &(h, pp, q) in &triples {
        find_r(pp, q, p(h), 1e-10).map_err(|e| format!("({}, {}, {}): {}", h, pp, q, e))?;
        let rep = classify_closed(pp, q, p(h)).map_err(|e| format!("({}, {}, {}): {}", h, pp, q, e))?;
        let want = if pp as f64 / q as f64 > alpha_oracle(h) { pp as i64 } else { pp as i64 - q as i64 };
        let closes = rep.closure_error < 1e-6 * (rep.r + 1.0);
        let rotation = (rep.rotation_number - pp as f64).abs() < 1e-6;
        let winding = rep.winding_number == Some(want);
        ok &= closes && rotation && winding;
        lines.push(format!(
            "({}, {}, {}) closure {:.1e} rotation {:.6} winding {:?}/{}",
            h, pp, q, rep.closure_error, rep.rotation_number, rep.winding_number, want
        ));
    }
    ensure(ok, lines.join("; "))
}

fn minimal_cross_check() -> Outcome {
    let (mut dist, mut drift, mut hmax) = (0.0f64, 0.0f64, 0.0f64);
    for &h in &[0.5, 1.0, 2.0] {
        for &a in &[0.5, 1.0, 2.0] {
            let spec = MinimalCurveSpec::new(p(h), a, 0.0).map_err(|e| e.to_string())?;
            let start = spec.state_at(0.0);
            let curve = integrate_curve(
                &minimal_law(p(h)),
                &InitialData::new(start.point(), start.theta),
                &IntegratorConfig::window(-10.0, 10.0),
            )
            .map_err(|e| e.to_string())?;
            for i in 0..=2000 {
                let s = -10.0 + 0.01 * i as f64;
                dist = dist.max(curve.state_at(s).unwrap().point().distance(&spec.state_at(s).point()));
            }
            drift = drift.max(conserved_drift(&curve, |t, n| minimal_invariant(t, n, p(h))));
            for st in curve.states() {
                hmax = hmax.max(mean_curvature(st.tau, st.nu, st.k, p(h)).abs());
            }
        }
    }
    ensure(
        dist < 1e-7 && drift < 1e-9 && hmax < 1e-10,
        format!("C0 = {:.2e}, drift = {:.2e}, max |H| = {:.2e}", dist, drift, hmax),
    )
}

fn rotating_structure() -> Outcome {
    let ts: Vec<f64> = (0..9).map(|i| -3.0 + 0.75 * i as f64).collect();
    let rotation = MotionSpec::new(0.0, Matrix::z_rotation_generator(), vec![0.0; 3]).unwrap();
    let mut lines = Vec::new();
    let mut ok = true;
    for &h in &[0.5, 1.0, 5.0] {
        for &a in &[0.0, 1.0] {
            let curve = generate_rotating_curve(p(h), a, 50.0).map_err(|e| e.to_string())?;
            let report = verify_soliton_structure(&curve).map_err(|e| e.to_string())?;
            let samples = helicoidal_samples(&curve, p(h), &ts).map_err(|e| e.to_string())?;
            let residual = soliton_residual(&samples, &rotation);
            let pass = report.passes() && residual < 1e-8;
            ok &= pass;
            if !pass {
                lines.push(format!(
                    "h={} A={}: failed {:?}, |nu| ends ({:.2}, {:.2}), |k| ends ({:.3}, {:.3}), theta growth ({:.2}, {:.2}), residual {:.1e}",
                    h,
                    a,
                    report.failures(),
                    report.nu_ends.0.abs(),
                    report.nu_ends.1.abs(),
                    report.k_ends.0.abs(),
                    report.k_ends.1.abs(),
                    report.theta_growth.0,
                    report.theta_growth.1,
                    residual
                ));
            }
        }
    }
    if ok {
        lines.push("all six curves pass".into());
    }
    ensure(ok, lines.join("; "))
}

fn small_pitch_convergence() -> Outcome {
    let table = convergence_experiment(1.0, &[0.1, 0.05, 0.025, 0.0125], (-5.0, 5.0), 0).map_err(|e| e.to_string())?;
    let distances: Vec<String> = table.rows.iter().map(|r| format!("{:.3e}", r.c0)).collect();
    ensure(
        table.strictly_decreasing() && (0.8..=1.2).contains(&table.slope),
        format!("distances [{}], slope {:.3}", distances.join(", "), table.slope),
    )
}

fn reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let skew = |rng: &mut ChaCha8Rng| {
        let mut m = Matrix::zeros(3);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let v = rng.gen_range(-2.0..2.0);
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
        m
    };
    let vec3 = |rng: &mut ChaCha8Rng| (0..3).map(|_| rng.gen_range(-3.0..3.0)).collect::<Vec<f64>>();

    let mut solve: f64 = 0.0;
    for _ in 0..100 {
        let mut b: f64 = rng.gen_range(-2.0..2.0);
        if b.abs() < 0.05 {
            b = 0.05f64.copysign(b);
        }
        let spec = MotionSpec::new(b, skew(&mut rng), vec3(&mut rng)).unwrap();
        let (w, _) = reduce_general(&spec).map_err(|e| e.to_string())?;
        let aw = spec.a.mul_vec(&w);
        let r: Vec<f64> = (0..3).map(|i| aw[i] + b * w[i] - spec.c[i]).collect();
        solve = solve.max(norm(&r));
    }

    let pitch = p(0.8);
    let (curve, _) = generate_cmc_curve(0.6, pitch, 1, 0.3).map_err(|e| e.to_string())?;
    let ts: Vec<f64> = (0..5).map(|i| -2.0 + i as f64).collect();
    let samples = helicoidal_samples(&curve, pitch, &ts).map_err(|e| e.to_string())?;
    let (mut kernel, mut invariance): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let spec = MotionSpec::new(0.0, skew(&mut rng), vec3(&mut rng)).unwrap();
        let (w, reduced) = reduce_general(&spec).map_err(|e| e.to_string())?;
        kernel = kernel.max(norm(&reduced.a.mul_vec(&reduced.c)));
        for s in samples.iter().step_by(7) {
            let t = s.translated(&w);
            let before = spec.residual(&s.point, &s.normal, s.mean_curvature);
            let after = reduced.residual(&t.point, &t.normal, t.mean_curvature);
            invariance = invariance.max((before - after).abs());
        }
    }
    ensure(
        solve < 1e-12 && kernel < 1e-12 && invariance < 1e-10,
        format!("solve {:.1e}, |A c0| {:.1e}, invariance {:.1e}", solve, kernel, invariance),
    )
}

fn mesh_convergence() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for surface in common::Surface::ALL {
        let (errors, ratios) = common::refinement(surface);
        ok &= ratios.iter().all(|r| *r >= 1.8);
        let e: Vec<String> = errors.iter().map(|v| format!("{:.2e}", v)).collect();
        let r: Vec<String> = ratios.iter().map(|v| format!("{:.2}", v)).collect();
        lines.push(format!("{} errors [{}] ratios [{}]", surface.name(), e.join(", "), r.join(", ")));
    }
    ensure(ok, lines.join("; "))
}

fn exporters() -> Outcome {
    let curve = generate_rotating_curve(p(1.0), 1.0, 5.0).map_err(|e| e.to_string())?;
    let rows = parse_csv(&curve_to_csv(&curve)).map_err(|e| e.to_string())?;
    let csv_ok = rows.len() == curve.len()
        && rows.iter().zip(curve.states()).all(|(row, st)| {
            let x = reconstruct_point(st);
            (row.s, row.tau, row.nu, row.theta, row.k, row.x, row.y) == (st.s, st.tau, st.nu, st.theta, st.k, x.x, x.y)
        });

    let mesh_for = |c: &helicoid_core::GeneratingCurve<f64>| build_mesh(c, p(1.0), (0.0, TAU), 24);
    let spec = MinimalCurveSpec::new(p(1.0), 0.7, 0.0).unwrap();
    let minimal = minimal_closed_form(&spec, (-2.0, 2.0), 41).map_err(|e| e.to_string())?;
    let mesh = mesh_for(&minimal).map_err(|e| e.to_string())?;
    let obj = parse_obj(&mesh_to_obj(&mesh)).map_err(|e| e.to_string())?;
    let obj_ok = obj.vertices == mesh.vertices && obj.normals == mesh.normals && obj.faces == mesh.triangles;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for run in 0..2 {
        let c = generate_rotating_curve(p(1.0), 1.0, 5.0).map_err(|e| e.to_string())?;
        export_csv(&c, &dir.path().join(format!("{}.csv", run))).map_err(|e| e.to_string())?;
        let m = minimal_closed_form(&spec, (-2.0, 2.0), 41).and_then(|c| mesh_for(&c)).map_err(|e| e.to_string())?;
        export_obj(&m, &dir.path().join(format!("{}.obj", run))).map_err(|e| e.to_string())?;
    }
    let read = |name: &str| std::fs::read(dir.path().join(name)).unwrap();
    let identical = read("0.csv") == read("1.csv") && read("0.obj") == read("1.obj");
    ensure(
        csv_ok && obj_ok && identical,
        format!("csv round-trip {}, obj round-trip {}, byte-identical {}", csv_ok, obj_ok, identical),
    )
}

fn main() -> ExitCode {
    let checks: [Check; 10] = [
        ("unit-circle mean curvature", unit_circle_curvature),
        ("delta-theta endpoint values", delta_theta_endpoints),
        ("delta-theta monotone with 2π tail", delta_theta_monotone),
        ("closed-curve classification", closed_curves),
        ("minimal closed-form cross-check", minimal_cross_check),
        ("rotating soliton structure", rotating_structure),
        ("h -> 0 convergence rate", small_pitch_convergence),
        ("translation reduction", reduction),
        ("mesh curvature refinement", mesh_convergence),
        ("exporter determinism and round-trips", exporters),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        let (status, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{} {:>2} {} ({:.1} s): {}", status, i + 1, name, start.elapsed().as_secs_f64(), detail);
    }
    println!("acceptance: {} passed, {} failed", checks.len() - failed, failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
