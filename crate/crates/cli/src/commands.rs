use std::f64::consts::{FRAC_PI_2, TAU};
use std::path::PathBuf;

use serde_json::{json, Map, Value};

use helicoid_core::cmc::{self, classify_closed_with, find_r, generate_cmc_curve_with};
use helicoid_core::export::{curve_to_csv, curves_to_svg, mesh_to_obj, SvgStyle};
use helicoid_core::geometry::{mean_curvature, reconstruct_point, PlanePoint};
use helicoid_core::linalg::{norm, Matrix};
use helicoid_core::mesh::{build_mesh, discrete_mean_curvature_all};
use helicoid_core::minimal::{minimal_closed_form_arclength, minimal_invariant, MinimalCurveSpec};
use helicoid_core::ode::{integrate_curve, resample_uniform, InitialData, IntegratorConfig};
use helicoid_core::rotating::{
    convergence_experiment, curve_self_intersection, rotating_law, verify_soliton_structure, MAX_DERIV_ORDER,
};
use helicoid_core::selfsim::{helicoidal_samples, reduce_general, soliton_residual, MotionSpec};
use helicoid_core::{Curve, Pitch};

use crate::args::Command;
use crate::config::{Format, RunConfig};
use crate::CliError;

const DEFAULT_TOL: f64 = 1e-10;
const DEFAULT_T_RANGE: (f64, f64) = (0.0, 2.0 * TAU);

/// Rendered output of a run and where it goes.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub format: Format,
    pub content: String,
    pub path: Option<PathBuf>,
}

/// Result of one family computation before rendering.
struct FamilyRun {
    family: &'static str,
    pitch: Pitch,
    params: Map<String, Value>,
    results: Map<String, Value>,
    warnings: Vec<String>,
    /// Curve that files are made from, uniformly sampled.
    curve: Option<Curve>,
    circles: Vec<f64>,
    origin_marker: bool,
}

impl FamilyRun {
    fn new(family: &'static str, pitch: Pitch) -> Self {
        let mut params = Map::new();
        params.insert("h".into(), json!(pitch.h()));
        params.insert("mu".into(), json!(pitch.mu()));
        Self {
            family,
            pitch,
            params,
            results: Map::new(),
            warnings: Vec::new(),
            curve: None,
            circles: Vec::new(),
            origin_marker: false,
        }
    }

    fn param(&mut self, key: &str, v: Value) {
        self.params.insert(key.into(), v);
    }

    fn result(&mut self, key: &str, v: Value) {
        self.results.insert(key.into(), v);
    }

    fn report(&self) -> Value {
        json!({
            "family": self.family,
            "params": self.params,
            "results": self.results,
            "warnings": self.warnings,
            "schema": 1,
        })
    }
}

fn precondition(msg: impl Into<String>) -> CliError {
    CliError::Precondition(msg.into())
}

fn pitch_of(cfg: &RunConfig) -> Result<Pitch, CliError> {
    match (cfg.h, cfg.mu) {
        (Some(_), Some(_)) => Err(precondition("give either --h or --mu, not both")),
        (Some(h), None) => Ok(Pitch::from_h(h)?),
        (None, Some(mu)) => Ok(Pitch::from_mu(mu)?),
        (None, None) => Ok(Pitch::from_h(1.0)?),
    }
}

fn tol_of(cfg: &RunConfig) -> Result<f64, CliError> {
    let tol = cfg.tol.unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0 && tol < 1.0) {
        return Err(precondition(format!("tolerance must lie in (0, 1), got {}", tol)));
    }
    Ok(tol)
}

fn window_of(cfg: &RunConfig, default: (f64, f64)) -> Result<(f64, f64), CliError> {
    let (lo, hi) = cfg.s_range.unwrap_or(default);
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(precondition(format!("s range must satisfy lo < hi, got [{}, {}]", lo, hi)));
    }
    Ok((lo, hi))
}

fn samples_of(cfg: &RunConfig, format: Format) -> Result<usize, CliError> {
    let n = cfg.samples.unwrap_or(if format == Format::Obj { 201 } else { 1001 });
    if n < 3 {
        return Err(precondition("need at least 3 samples"));
    }
    Ok(n)
}

fn default_format(cmd: Command) -> Format {
    match cmd {
        Command::Mesh => Format::Obj,
        _ => Format::Json,
    }
}

/// Computes everything the run needs and renders it; nothing is written.
pub fn execute(cmd: Command, cfg: &RunConfig) -> Result<Output, CliError> {
    let format = cfg.format.unwrap_or_else(|| default_format(cmd));
    let content = match cmd {
        Command::Converge => {
            require_json(cmd, format)?;
            pretty(&converge(cfg)?)
        }
        Command::Reduce => {
            require_json(cmd, format)?;
            pretty(&reduce(cfg)?)
        }
        Command::Mesh => {
            let family = cfg.family.as_deref().unwrap_or("rotating");
            let run = family_run(family, cfg, Format::Obj)?;
            match format {
                Format::Obj => render(&run, Format::Obj, cfg)?,
                Format::Json => pretty(&mesh_report(run, cfg)?),
                other => {
                    return Err(precondition(format!(
                        "mesh writes obj or json, not {}",
                        other.name()
                    )))
                }
            }
        }
        _ => {
            let run = family_run(cmd.name(), cfg, format)?;
            render(&run, format, cfg)?
        }
    };
    Ok(Output {
        format,
        content,
        path: cfg.out.clone(),
    })
}

fn require_json(cmd: Command, format: Format) -> Result<(), CliError> {
    if format != Format::Json {
        return Err(precondition(format!("{} only produces json output", cmd.name())));
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn family_run(family: &str, cfg: &RunConfig, format: Format) -> Result<FamilyRun, CliError> {
    let samples = samples_of(cfg, format)?;
    match family {
        "rotating" => rotating(cfg, samples),
        "minimal" => minimal(cfg, samples),
        "cmc" => cmc_family(cfg, samples),
        "classify" => classify(cfg, samples),
        other => Err(precondition(format!(
            "unknown family {:?} (expected rotating, minimal or cmc)",
            other
        ))),
    }
}

fn render(run: &FamilyRun, format: Format, cfg: &RunConfig) -> Result<String, CliError> {
    let curve = || {
        run.curve
            .as_ref()
            .ok_or_else(|| CliError::Internal("no curve was produced".into()))
    };
    Ok(match format {
        Format::Json => pretty(&run.report()),
        Format::Csv => curve_to_csv(curve()?),
        Format::Svg => {
            let style = SvgStyle {
                circles: run.circles.clone(),
                origin_marker: run.origin_marker,
                normalize: cfg.normalize.unwrap_or(false),
                ..SvgStyle::default()
            };
            let circles = if style.normalize {
                let outer = run.circles.iter().cloned().fold(0.0, f64::max);
                run.circles.iter().map(|r| r / outer).collect()
            } else {
                style.circles.clone()
            };
            curves_to_svg(&[curve()?.points()], &SvgStyle { circles, ..style })
        }
        Format::Obj => mesh_to_obj(&mesh_of(run, cfg)?),
    })
}

fn mesh_of(run: &FamilyRun, cfg: &RunConfig) -> Result<helicoid_core::Mesh, CliError> {
    let t_range = cfg.t_range.unwrap_or(DEFAULT_T_RANGE);
    let n_t = cfg.n_t.unwrap_or(129);
    let curve = run
        .curve
        .as_ref()
        .ok_or_else(|| CliError::Internal("no curve was produced".into()))?;
    let params: Vec<(&str, f64)> = run
        .params
        .iter()
        .filter_map(|(k, v)| v.as_f64().map(|x| (k.as_str(), x)))
        .collect();
    Ok(build_mesh(curve, run.pitch, t_range, n_t)?.with_provenance(run.family, &params))
}

fn mesh_report(run: FamilyRun, cfg: &RunConfig) -> Result<Value, CliError> {
    let mesh = mesh_of(&run, cfg)?;
    mesh.validate().map_err(|e| CliError::Internal(e.to_string()))?;
    let estimates = discrete_mean_curvature_all(&mesh);
    let dev = estimates
        .iter()
        .map(|&(v, h)| (h - mesh.mean_curvature[v]).abs())
        .fold(0.0, f64::max);
    let mut out = run.report();
    let results = out["results"].as_object_mut().expect("results object");
    results.insert(
        "mesh".into(),
        json!({
            "vertices": mesh.vertices.len(),
            "triangles": mesh.triangles.len(),
            "n_s": mesh.n_s,
            "n_t": mesh.n_t,
            "t_range": [mesh.t_values[0], mesh.t_values[mesh.n_t - 1]],
            "interior_vertices": estimates.len(),
            "max_mean_curvature_deviation": dev,
        }),
    );
    Ok(out)
}

fn rotating(cfg: &RunConfig, samples: usize) -> Result<FamilyRun, CliError> {
    let pitch = pitch_of(cfg)?;
    let a = cfg.a.unwrap_or(0.0);
    let theta0 = cfg.theta0.unwrap_or(0.0);
    let window = window_of(cfg, (-50.0, 50.0))?;
    let tol = tol_of(cfg)?;
    let mut run = FamilyRun::new("rotating", pitch);
    run.param("A", json!(a));
    run.param("theta0", json!(theta0));
    run.param("s_range", json!([window.0, window.1]));
    run.param("tol", json!(tol));
    if a < 0.0 {
        run.warnings
            .push("A < 0 gives the reflected curve; using |A|".into());
    }
    let z0 = PlanePoint::new(0.0, a.abs()).rotated(theta0);
    let config = IntegratorConfig::window(window.0, window.1).with_tol(tol);
    let curve = integrate_curve(&rotating_law(pitch), &InitialData::new(z0, theta0), &config)?;

    let law = curve.law().clone();
    let law_residual = curve
        .states()
        .iter()
        .map(|st| (st.k - law.curvature(st.tau, st.nu)).abs())
        .fold(0.0, f64::max);
    run.result("samples", json!(curve.len()));
    run.result("law_residual", json!(law_residual));

    if window.0 <= -20.0 && window.1 >= 20.0 {
        let rep = verify_soliton_structure(&curve)?;
        run.result(
            "structure",
            json!({
                "passes": rep.passes(),
                "failures": rep.failures(),
                "tau_zeros": rep.tau_zeros,
                "k_zeros": rep.k_zeros,
                "r_minima": rep.r_minima,
                "r_min": [rep.r_min.0, rep.r_min.1],
                "tau_ends": [rep.tau_ends.0, rep.tau_ends.1],
                "nu_ends": [rep.nu_ends.0, rep.nu_ends.1],
                "k_ends": [rep.k_ends.0, rep.k_ends.1],
                "angle_defect": [rep.angle_defect.0, rep.angle_defect.1],
                "theta_growth": [rep.theta_growth.0, rep.theta_growth.1],
                "phi_growth": [rep.phi_growth.0, rep.phi_growth.1],
                "ode_residual": rep.ode_residual,
            }),
        );
        if !rep.passes() {
            run.warnings.push(format!(
                "structure thresholds not met on this window: {}",
                rep.failures().join(", ")
            ));
        }
    } else {
        run.warnings
            .push("window shorter than |s| = 20 on some side; structure check skipped".into());
    }

    if !pitch.is_infinite() {
        let coarse = resample_uniform(&curve, window, 401)?;
        let ts: Vec<f64> = (0..8).map(|j| j as f64 * FRAC_PI_2 / 2.0).collect();
        let surf = helicoidal_samples(&coarse, pitch, &ts)?;
        let spec = MotionSpec::new(0.0, Matrix::z_rotation_generator(), vec![0.0; 3])?;
        run.result("soliton_residual", json!(soliton_residual(&surf, &spec)));
    }
    let crossing = curve_self_intersection(&curve, 1e-3)?;
    run.result("embedded", json!(crossing.is_none()));
    if let Some((s1, s2, p)) = crossing {
        run.result("self_intersection", json!({ "s": [s1, s2], "point": [p.x, p.y] }));
    }
    run.curve = Some(resample_uniform(&curve, window, samples)?);
    run.origin_marker = true;
    Ok(run)
}

fn minimal(cfg: &RunConfig, samples: usize) -> Result<FamilyRun, CliError> {
    let pitch = pitch_of(cfg)?;
    let a = cfg.a.unwrap_or(0.0);
    let theta0 = cfg.theta0.unwrap_or(0.0);
    let window = window_of(cfg, (-10.0, 10.0))?;
    let spec = MinimalCurveSpec::new(pitch, a, theta0)?;
    let mut run = FamilyRun::new("minimal", pitch);
    run.param("A", json!(a));
    run.param("theta0", json!(theta0));
    run.param("s_range", json!([window.0, window.1]));
    let curve = minimal_closed_form_arclength(&spec, window, samples)?;
    let max_h = curve
        .states()
        .iter()
        .map(|st| mean_curvature(st.tau, st.nu, st.k, pitch).abs())
        .fold(0.0, f64::max);
    let min_r = curve.states().iter().map(|st| st.r()).fold(f64::INFINITY, f64::min);
    let (neg, pos) = spec.growth_limits();
    run.result("invariant", json!(minimal_invariant(0.0, a, pitch)));
    run.result("max_abs_mean_curvature", json!(max_h));
    run.result("min_radius", json!(min_r));
    run.result("growth_limits", json!([[neg.x, neg.y], [pos.x, pos.y]]));
    run.result("helicoid", json!(a == 0.0));
    run.curve = Some(curve);
    run.origin_marker = true;
    Ok(run)
}

fn cmc_family(cfg: &RunConfig, samples: usize) -> Result<FamilyRun, CliError> {
    let pitch = pitch_of(cfg)?;
    let theta0 = cfg.theta0.unwrap_or(0.0);
    let tol = tol_of(cfg)?;
    let mut run = FamilyRun::new("cmc", pitch);
    let (r, ratio) = match (cfg.r, cfg.p, cfg.q) {
        (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
            return Err(precondition("give either --R or --p and --q, not both"))
        }
        (Some(r), None, None) => {
            if !(r >= 0.0 && r.is_finite()) {
                return Err(precondition(format!("R must be finite and >= 0, got {}", r)));
            }
            (r, None)
        }
        (None, Some(p), Some(q)) => (find_r(p, q, pitch, tol)?, Some((p, q))),
        _ => return Err(precondition("cmc needs --R, or --p and --q")),
    };
    let excursions = cfg.excursions.unwrap_or(ratio.map_or(1, |(_, q)| q as usize));
    if excursions == 0 {
        return Err(precondition("need at least one excursion"));
    }
    run.param("R", json!(r));
    if let Some((p, q)) = ratio {
        run.param("p", json!(p));
        run.param("q", json!(q));
    }
    run.param("theta0", json!(theta0));
    run.param("excursions", json!(excursions));
    let config = IntegratorConfig::default().with_tol(tol.min(1e-11));
    let (curve, traj) = generate_cmc_curve_with(r, pitch, excursions, theta0, &config)?;
    let end = traj.excursion_ends[excursions - 1];
    let x0 = reconstruct_point(curve.origin_state());
    let xe = reconstruct_point(&curve.state_at(end.min(curve.s_range().1)).expect("inside curve"));
    let max_h_dev = curve
        .states()
        .iter()
        .map(|st| (mean_curvature(st.tau, st.nu, st.k, pitch) + 1.0).abs())
        .fold(0.0, f64::max);
    run.result("R", json!(r));
    run.result("delta_theta", json!(cmc::delta_theta(r, pitch)?));
    run.result("delta_phi", json!(cmc::delta_phi(r, pitch)?));
    run.result("alpha", json!(cmc::alpha(pitch)));
    run.result("period", json!(traj.period));
    run.result("quadrature_period", json!(traj.quadrature_period));
    run.result("circle_drift", json!(traj.circle_drift));
    run.result("max_mean_curvature_deviation", json!(max_h_dev));
    run.result("end_gap", json!(xe.distance(&x0)));
    run.result("annulus", json!([(r - 1.0).abs(), r + 1.0]));
    run.curve = Some(resample_uniform(&curve, (0.0, end), samples)?);
    run.circles = vec![(r - 1.0).abs(), r + 1.0];
    run.origin_marker = true;
    Ok(run)
}

fn classify(cfg: &RunConfig, samples: usize) -> Result<FamilyRun, CliError> {
    let pitch = pitch_of(cfg)?;
    let (p, q) = match (cfg.p, cfg.q) {
        (Some(p), Some(q)) => (p, q),
        _ => return Err(precondition("classify needs --p and --q")),
    };
    let theta0 = cfg.theta0.unwrap_or(0.0);
    let tol = tol_of(cfg)?.min(1e-11);
    let config = IntegratorConfig::default().with_tol(tol);
    let rep = classify_closed_with(p, q, pitch, theta0, &config)?;
    let mut run = FamilyRun::new("classify", pitch);
    run.param("p", json!(p));
    run.param("q", json!(q));
    run.param("theta0", json!(theta0));
    run.result("R", json!(rep.r));
    run.result("rotation_number", json!(rep.rotation_number.round() as i64));
    run.result("rotation_number_raw", json!(rep.rotation_number));
    run.result("winding_number", json!(rep.winding_number));
    run.result("winding_raw", json!(rep.winding_raw));
    run.result("expected_winding", json!(rep.expected_winding()));
    run.result("regime", json!(rep.regime.name()));
    run.result("alpha", json!(rep.alpha));
    run.result("ratio", json!(p as f64 / q as f64));
    run.result("delta_theta", json!(rep.delta_theta));
    run.result("delta_phi", json!(rep.delta_phi));
    run.result("period", json!(rep.period));
    run.result("closure_error", json!(rep.closure_error));
    run.result("symmetry_error", json!(rep.symmetry_error));
    run.result("min_radius", json!(rep.min_radius));
    run.result("passes_origin", json!(rep.passes_origin));
    if rep.passes_origin {
        run.warnings.push("curve passes within 1e-6 of the origin; winding number undefined".into());
    }
    let (curve, _) = generate_cmc_curve_with(rep.r, pitch, q as usize, theta0, &config)?;
    let end = (rep.period * q as f64).min(curve.s_range().1);
    run.curve = Some(resample_uniform(&curve, (0.0, end), samples)?);
    run.circles = vec![(rep.r - 1.0).abs(), rep.r + 1.0];
    run.origin_marker = true;
    Ok(run)
}

fn converge(cfg: &RunConfig) -> Result<Value, CliError> {
    let a = cfg.a.unwrap_or(1.0);
    let interval = window_of(cfg, (-5.0, 5.0))?;
    let h_list = cfg.h_list.clone().unwrap_or_else(|| vec![0.1, 0.05, 0.025, 0.0125]);
    if h_list.len() < 2 {
        return Err(precondition("need at least two pitches"));
    }
    if h_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(precondition("pitches must be strictly decreasing"));
    }
    let table = convergence_experiment(a, &h_list, interval, MAX_DERIV_ORDER)?;
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| json!({ "h": r.h, "c0": r.c0, "derivatives": r.derivatives, "curve_c0": r.curve_c0 }))
        .collect();
    let mut warnings = Vec::new();
    if !table.strictly_decreasing() {
        warnings.push("distances are not strictly decreasing".to_string());
    }
    Ok(json!({
        "family": "converge",
        "params": { "A": a, "interval": [interval.0, interval.1], "h_list": h_list, "deriv_order": MAX_DERIV_ORDER },
        "results": {
            "rows": rows,
            "slope": table.slope,
            "derivative_slopes": table.derivative_slopes,
            "curve_slope": table.curve_slope,
            "strictly_decreasing": table.strictly_decreasing(),
        },
        "warnings": warnings,
        "schema": 1,
    }))
}

fn reduce(cfg: &RunConfig) -> Result<Value, CliError> {
    let b = cfg.b.unwrap_or(0.0);
    let a = match &cfg.matrix {
        Some(rows) => Matrix::from_rows(rows)?,
        None => Matrix::z_rotation_generator(),
    };
    let c = cfg.c.clone().unwrap_or_else(|| vec![0.0; a.dim()]);
    let spec = MotionSpec::new(b, a, c)?;
    let (w, reduced) = reduce_general(&spec)?;
    let aw = spec.a.mul_vec(&w);
    let solve_residual: Vec<f64> = (0..w.len())
        .map(|i| aw[i] + b * w[i] + reduced.c[i] - spec.c[i])
        .collect();
    Ok(json!({
        "family": "reduce",
        "params": { "b": b, "matrix": spec.a.rows(), "c": spec.c },
        "results": {
            "w": w,
            "reduced": { "b": reduced.b, "matrix": reduced.a.rows(), "c": reduced.c },
            "decomposition_residual": norm(&solve_residual),
            "kernel_residual": norm(&reduced.a.mul_vec(&reduced.c)),
        },
        "warnings": Vec::<String>::new(),
        "schema": 1,
    }))
}
