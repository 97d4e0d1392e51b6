//! Generating curves of helicoidal surfaces: rotating solitons of mean
//! curvature flow, minimal surfaces and constant mean curvature surfaces.
//!
//! A helicoidal surface with pitch `h` is swept by a plane curve `X(s)`
//! under the screw motion `F(s, t) = (e^{it} X(s), h t)`. Every routine is
//! generic over [`Real`]; the aliases at the crate root fix `f64`.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cmc;
pub mod elliptic;
pub mod error;
pub mod export;
pub mod geometry;
pub mod law;
pub mod linalg;
pub mod mesh;
pub mod minimal;
pub mod ode;
pub mod quadrature;
pub mod roots;
pub mod rotating;
pub mod scalar;
pub mod selfsim;

pub use cmc::{
    alpha, classify_closed, delta_phi, delta_theta, excursion_period, find_r, generate_cmc_curve, ClassificationReport,
    WindingRegime,
};
pub use elliptic::elliptic_e;
pub use error::{Error, Result};
pub use export::{curve_to_csv, curves_to_svg, mesh_to_obj, parse_csv, parse_obj, SvgStyle};
pub use geometry::{mean_curvature, reconstruct_point, surface_point, unit_normal};
pub use law::{CurvatureLaw, LawKind};
pub use linalg::Matrix;
pub use mesh::{build_mesh, discrete_mean_curvature, SurfaceMesh};
pub use minimal::{minimal_closed_form, MinimalCurveSpec};
pub use ode::{integrate_curve, GeneratingCurve, InitialData, IntegratorConfig};
pub use rotating::{convergence_experiment, generate_rotating_curve, verify_soliton_structure, SolitonReport};
pub use scalar::Real;
pub use selfsim::{reduce_general, soliton_residual, MotionSpec};

pub type Pitch = geometry::Pitch<f64>;
pub type CurveState = geometry::CurveState<f64>;
pub type PlanePoint = geometry::PlanePoint<f64>;
pub type SpacePoint = geometry::SpacePoint<f64>;
pub type Curve = ode::GeneratingCurve<f64>;
pub type Law = law::CurvatureLaw<f64>;
pub type Mesh = mesh::SurfaceMesh<f64>;
pub type Motion = selfsim::MotionSpec<f64>;
pub type Matrix64 = linalg::Matrix<f64>;
pub type Classification = cmc::ClassificationReport<f64>;
pub type Soliton = rotating::SolitonReport<f64>;
