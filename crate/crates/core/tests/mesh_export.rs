mod common;

use std::f64::consts::TAU;
use std::fs;

use helicoid_core::cmc::classify_closed_with;
use helicoid_core::export::{
    curve_to_csv, curves_to_svg, export_csv, export_obj, mesh_to_obj, parse_csv, parse_obj, parse_svg_polylines,
    write_atomic, SvgStyle, CSV_HEADER,
};
use helicoid_core::geometry::{reconstruct_point, Pitch, PlanePoint};
use helicoid_core::mesh::{build_mesh, discrete_mean_curvature};
use helicoid_core::minimal::{minimal_closed_form, MinimalCurveSpec};
use helicoid_core::ode::IntegratorConfig;
use helicoid_core::rotating::generate_rotating_curve;
use helicoid_core::Error;

use common::{mesh_error, refinement, Surface};

fn helicoid_mesh(n_s: usize, n_t: usize) -> helicoid_core::Mesh {
    let pitch = Pitch::from_h(1.0).unwrap();
    let curve = minimal_closed_form(&MinimalCurveSpec::new(pitch, 0.7, 0.0).unwrap(), (-2.0, 2.0), n_s).unwrap();
    build_mesh(&curve, pitch, (0.0, TAU), n_t).unwrap()
}

#[test]
fn grid_counts_and_normals() {
    let mesh = helicoid_mesh(3, 3);
    assert_eq!(mesh.vertices.len(), 9);
    assert_eq!(mesh.triangles.len(), 8);
    let mesh = helicoid_mesh(17, 9);
    assert_eq!(mesh.triangles.len(), 16 * 8 * 2);
    for n in &mesh.normals {
        assert!((n.norm() - 1.0).abs() < 1e-14);
    }
    mesh.validate().unwrap();
    assert_eq!(mesh.family, "minimal");
}

#[test]
fn boundary_vertices_have_no_estimate() {
    let mesh = helicoid_mesh(5, 5);
    assert!(matches!(discrete_mean_curvature(&mesh, 0), Err(Error::BoundaryVertex(0))));
    assert!(discrete_mean_curvature(&mesh, mesh.vertex_index(2, 2)).is_ok());
}

#[test]
fn infinite_pitch_gives_a_prism() {
    let pitch = Pitch::infinite();
    let curve = generate_rotating_curve(pitch, 1.0, 2.0).unwrap();
    let mesh = build_mesh(&curve, pitch, (0.0, 1.0), 4).unwrap();
    for (v, x) in mesh.vertices.iter().enumerate() {
        let (i, j) = mesh.grid_position(v);
        let p = curve.states()[i].point();
        assert_eq!((x.x, x.y, x.z), (p.x, p.y, mesh.t_values[j]));
        assert_eq!(mesh.normals[v].z, 0.0);
    }
    mesh.validate().unwrap();
}

#[test]
fn discrete_curvature_converges_on_each_surface() {
    for surface in Surface::ALL {
        let (errors, ratios) = refinement(surface);
        for r in &ratios {
            assert!(*r >= 1.8, "{}: errors {:?}", surface.name(), errors);
        }
    }
}

#[test]
fn cylinder_estimate_is_close_on_a_fine_grid() {
    assert!(mesh_error(Surface::Cylinder, 128) < 1e-4);
}

#[test]
fn csv_round_trip() {
    let curve = generate_rotating_curve(Pitch::from_h(1.0).unwrap(), 0.4, 3.0).unwrap();
    let text = curve_to_csv(&curve);
    assert!(text.starts_with(CSV_HEADER));
    let rows = parse_csv(&text).unwrap();
    assert_eq!(rows.len(), curve.len());
    for (row, st) in rows.iter().zip(curve.states()) {
        assert_eq!((row.s, row.tau, row.nu, row.theta, row.k), (st.s, st.tau, st.nu, st.theta, st.k));
        let x = reconstruct_point(st);
        assert_eq!((row.x, row.y), (x.x, x.y));
    }
    assert!(matches!(parse_csv("s,tau\n1,2\n"), Err(Error::Parse { .. })));
}

#[test]
fn obj_round_trip() {
    let mesh = helicoid_mesh(11, 7);
    let data = parse_obj(&mesh_to_obj(&mesh)).unwrap();
    assert_eq!(data.vertices, mesh.vertices);
    assert_eq!(data.normals, mesh.normals);
    assert_eq!(data.faces, mesh.triangles);
}

#[test]
fn files_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for run in 0..2 {
        let curve = generate_rotating_curve(Pitch::from_h(2.0).unwrap(), 1.0, 4.0).unwrap();
        export_csv(&curve, &dir.path().join(format!("c{}.csv", run))).unwrap();
        export_obj(&helicoid_mesh(9, 9), &dir.path().join(format!("m{}.obj", run))).unwrap();
    }
    for (a, b) in [("c0.csv", "c1.csv"), ("m0.obj", "m1.obj")] {
        assert_eq!(fs::read(dir.path().join(a)).unwrap(), fs::read(dir.path().join(b)).unwrap());
    }
    // Only the two finished files per kind remain; temporaries are renamed away.
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 4);
}

#[test]
fn atomic_write_replaces_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.txt");
    write_atomic(&path, "first").unwrap();
    write_atomic(&path, "second").unwrap();
    assert_eq!(fs::read_to_string(&path).unwrap(), "second");
    assert!(write_atomic(&dir.path().join("missing/out.txt"), "x").is_err());
}

#[test]
fn svg_documents() {
    let empty = curves_to_svg::<f64>(&[], &SvgStyle::default());
    assert!(empty.starts_with("<?xml") || empty.starts_with("<svg"));
    assert!(empty.trim_end().ends_with("</svg>"));
    assert!(parse_svg_polylines(&empty).unwrap().is_empty());

    let circle: Vec<PlanePoint<f64>> = (0..=720).map(|i| {
        let a = TAU * i as f64 / 720.0;
        PlanePoint::new(a.cos(), a.sin())
    }).collect();
    let doc = curves_to_svg(std::slice::from_ref(&circle), &SvgStyle::default());
    let lines = parse_svg_polylines(&doc).unwrap();
    assert_eq!(lines.len(), 1);
    let (first, last) = (lines[0][0], *lines[0].last().unwrap());
    assert!((first.0 - last.0).abs() < 1e-12 && (first.1 - last.1).abs() < 1e-12);
    // Polyline points are in data units with y flipped, so the circle stays
    // centred on the origin.
    assert!((lines[0][180].1 + 1.0).abs() < 1e-12);
    assert!(lines[0].iter().all(|p| (p.0.hypot(p.1) - 1.0).abs() < 1e-6));
}

#[test]
fn closed_curve_svg_keeps_every_sample() {
    let rep = classify_closed_with(4, 3, Pitch::from_h(1.0).unwrap(), 0.0, &IntegratorConfig::default().with_tol(1e-11)).unwrap();
    assert!(rep.symmetry_error < 1e-6);
    // Rotating by 2π/3 maps the closed curve to itself.
    let (curve, traj) = helicoid_core::cmc::generate_cmc_curve(rep.r, Pitch::from_h(1.0).unwrap(), 3, 0.0).unwrap();
    let total = traj.excursion_ends[2];
    let pts: Vec<PlanePoint<f64>> = (0..=3000).map(|i| curve.state_at(total * i as f64 / 3000.0).unwrap().point()).collect();
    let doc = curves_to_svg(&[pts], &SvgStyle { normalize: true, ..SvgStyle::default() });
    let lines = parse_svg_polylines(&doc).unwrap();
    assert_eq!(lines[0].len(), 3001);
}
