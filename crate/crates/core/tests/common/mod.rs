//! Shared fixtures for the mesh refinement studies.

use helicoid_core::cmc::generate_cmc_curve;
use helicoid_core::geometry::Pitch;
use helicoid_core::mesh::{build_mesh, max_interior_deviation};
use helicoid_core::minimal::{minimal_closed_form_arclength, MinimalCurveSpec};
use helicoid_core::ode::{resample_uniform, GeneratingCurve};
use helicoid_core::rotating::generate_rotating_curve;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Surface {
    Helicoid,
    Cylinder,
    Rotating,
}

impl Surface {
    pub const ALL: [Surface; 3] = [Surface::Helicoid, Surface::Cylinder, Surface::Rotating];

    pub fn name(&self) -> &'static str {
        match self {
            Surface::Helicoid => "helicoid",
            Surface::Cylinder => "cylinder",
            Surface::Rotating => "rotating soliton",
        }
    }

    /// `n` curve samples equally spaced over `s ∈ [-1, 1]`.
    pub fn curve(&self, n: usize) -> GeneratingCurve<f64> {
        let pitch = Pitch::from_h(1.0).unwrap();
        match self {
            Surface::Helicoid => {
                let spec = MinimalCurveSpec::new(pitch, 0.0, 0.0).unwrap();
                minimal_closed_form_arclength(&spec, (-1.0, 1.0), n).unwrap()
            }
            Surface::Cylinder => {
                let (curve, _) = generate_cmc_curve(0.0, pitch, 1, 0.0).unwrap();
                resample_uniform(&curve, (0.0, 2.0), n).unwrap()
            }
            Surface::Rotating => {
                let curve = generate_rotating_curve(pitch, 0.0, 2.0).unwrap();
                resample_uniform(&curve, (-1.0, 1.0), n).unwrap()
            }
        }
    }
}

/// Grid sizes of the refinement study: three doublings.
pub const SIZES: [usize; 4] = [16, 32, 64, 128];

/// Largest interior `|H_est - H|` on an `n × n` grid over `t ∈ [0, 1]`.
pub fn mesh_error(surface: Surface, n: usize) -> f64 {
    let pitch = Pitch::from_h(1.0).unwrap();
    let mesh = build_mesh(&surface.curve(n), pitch, (0.0, 1.0), n).unwrap();
    mesh.validate().unwrap();
    max_interior_deviation(&mesh)
}

/// Errors over [`SIZES`] and the ratios between consecutive sizes.
pub fn refinement(surface: Surface) -> (Vec<f64>, Vec<f64>) {
    let errors: Vec<f64> = SIZES.iter().map(|&n| mesh_error(surface, n)).collect();
    let ratios = errors.windows(2).map(|w| w[0] / w[1]).collect();
    (errors, ratios)
}
