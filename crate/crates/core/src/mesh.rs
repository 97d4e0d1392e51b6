//! Triangle meshes of helicoidal surfaces and a discrete mean curvature
//! estimate used to validate them.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{mean_curvature, reconstruct_point, surface_point, unit_normal_at, Pitch, SpacePoint, SpaceVector};
use crate::ode::GeneratingCurve;
use crate::scalar::Real;

/// Grid mesh over `n_s` curve samples and `n_t` sweep values. Vertex
/// `(i, j)` (sample `i`, sweep `j`) has index `i * n_t + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMesh<T> {
    pub vertices: Vec<SpacePoint<T>>,
    pub triangles: Vec<[usize; 3]>,
    /// Analytic unit normals.
    pub normals: Vec<SpaceVector<T>>,
    /// Analytic mean curvature.
    pub mean_curvature: Vec<T>,
    pub n_s: usize,
    pub n_t: usize,
    pub s_values: Vec<T>,
    pub t_values: Vec<T>,
    pub family: String,
    pub params: Vec<(String, f64)>,
}

impl<T: Real> SurfaceMesh<T> {
    pub fn vertex_index(&self, i: usize, j: usize) -> usize {
        i * self.n_t + j
    }

    pub fn grid_position(&self, v: usize) -> (usize, usize) {
        (v / self.n_t, v % self.n_t)
    }

    pub fn is_interior(&self, v: usize) -> bool {
        let (i, j) = self.grid_position(v);
        v < self.vertices.len() && i > 0 && i + 1 < self.n_s && j > 0 && j + 1 < self.n_t
    }

    pub fn interior_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertices.len()).filter(move |&v| self.is_interior(v))
    }

    pub fn with_provenance(mut self, family: &str, params: &[(&str, f64)]) -> Self {
        self.family = family.to_string();
        self.params = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        self
    }

    pub fn triangle_area(&self, tri: &[usize; 3]) -> T {
        let [a, b, c] = tri.map(|i| self.vertices[i]);
        (b - a).cross(&(c - a)).norm() * T::lit(0.5)
    }

    /// Checks index ranges, triangle areas against `1e-12` of the mean area
    /// and that every face normal agrees in sign with the analytic normals
    /// at its corners.
    pub fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        if self.normals.len() != n || self.mean_curvature.len() != n {
            return Err(Error::InvalidInput("per-vertex data does not match vertex count".into()));
        }
        if let Some(t) = self.triangles.iter().find(|t| t.iter().any(|&i| i >= n)) {
            return Err(Error::InvalidInput(format!("triangle {:?} indexes past {} vertices", t, n)));
        }
        if self.triangles.is_empty() {
            return Ok(());
        }
        let areas: Vec<T> = self.triangles.iter().map(|t| self.triangle_area(t)).collect();
        let mean = areas.iter().fold(T::zero(), |a, &b| a + b) / T::lit(areas.len() as f64);
        for (t, &area) in self.triangles.iter().zip(&areas) {
            if !(area > mean * T::lit(1e-12)) {
                return Err(Error::InvalidInput(format!("degenerate triangle {:?}", t)));
            }
            let [a, b, c] = t.map(|i| self.vertices[i]);
            let face = (b - a).cross(&(c - a));
            let avg = t.iter().fold(SpacePoint::default(), |acc, &i| acc + self.normals[i]);
            if face.dot(&avg) < T::zero() {
                return Err(Error::InvalidInput(format!("triangle {:?} is inverted", t)));
            }
        }
        Ok(())
    }
}

/// Grid mesh of `F(s, t) = (e^{it} X(s), h t)` over the curve samples and
/// `n_t` equally spaced `t` in `t_range`. For `h = ∞` the prism
/// `F = (X(s), t)` is used instead.
pub fn build_mesh<T: Real>(
    curve: &GeneratingCurve<T>,
    pitch: Pitch<T>,
    t_range: (T, T),
    n_t: usize,
) -> Result<SurfaceMesh<T>> {
    if curve.is_empty() {
        return Err(Error::EmptyCurve);
    }
    if n_t < 2 || !(t_range.0 < t_range.1) {
        return Err(Error::InvalidInput(format!(
            "need t_min < t_max and n_t >= 2, got [{}, {}] with {}",
            t_range.0, t_range.1, n_t
        )));
    }
    let step = (t_range.1 - t_range.0) / T::lit((n_t - 1) as f64);
    let t_values: Vec<T> = (0..n_t)
        .map(|j| if j + 1 == n_t { t_range.1 } else { t_range.0 + step * T::lit(j as f64) })
        .collect();
    let n_s = curve.len();
    let mut vertices = Vec::with_capacity(n_s * n_t);
    let mut normals = Vec::with_capacity(n_s * n_t);
    let mut hs = Vec::with_capacity(n_s * n_t);
    for st in curve.states() {
        let x = reconstruct_point(st);
        let h = mean_curvature(st.tau, st.nu, st.k, pitch);
        for &t in &t_values {
            if pitch.is_infinite() {
                vertices.push(SpacePoint::new(x.x, x.y, t));
                normals.push(unit_normal_at(st, T::zero(), pitch));
            } else {
                vertices.push(surface_point(x, t, pitch)?);
                normals.push(unit_normal_at(st, t, pitch));
            }
            hs.push(h);
        }
    }
    // The analytic normal points along F_t × F_s.
    let mut triangles = Vec::with_capacity(2 * n_s.saturating_sub(1) * (n_t - 1));
    for i in 0..n_s.saturating_sub(1) {
        for j in 0..n_t - 1 {
            let a = i * n_t + j;
            let b = a + n_t;
            let c = a + 1;
            let d = b + 1;
            triangles.push([a, c, b]);
            triangles.push([b, c, d]);
        }
    }
    Ok(SurfaceMesh {
        vertices,
        triangles,
        normals,
        mean_curvature: hs,
        n_s,
        n_t,
        s_values: curve.states().iter().map(|s| s.s).collect(),
        t_values,
        family: curve.law().kind().name().to_string(),
        params: Vec::new(),
    })
}

fn cot<T: Real>(at: SpacePoint<T>, p: SpacePoint<T>, q: SpacePoint<T>) -> T {
    let u = p - at;
    let v = q - at;
    u.dot(&v) / u.cross(&v).norm()
}

/// Estimate of `H` at an interior vertex: `-<ΔX, n>` with the cotangent
/// Laplacian `ΔX = 1/(2 A) Σ (cot α + cot β)(x_j - x_i)` over mixed
/// Voronoi areas `A`.
pub fn discrete_mean_curvature<T: Real>(mesh: &SurfaceMesh<T>, vertex: usize) -> Result<T> {
    if !mesh.is_interior(vertex) {
        return Err(Error::BoundaryVertex(vertex));
    }
    let (i, j) = mesh.grid_position(vertex);
    let idx = |di: isize, dj: isize| mesh.vertex_index((i as isize + di) as usize, (j as isize + dj) as usize);
    // The six triangles around an interior grid vertex, as (vertex, next, prev)
    // in counter-clockwise order about the analytic normal.
    let ring = [
        (idx(0, 1), idx(1, 0)),
        (idx(1, 0), idx(1, -1)),
        (idx(1, -1), idx(0, -1)),
        (idx(0, -1), idx(-1, 0)),
        (idx(-1, 0), idx(-1, 1)),
        (idx(-1, 1), idx(0, 1)),
    ];
    let x = mesh.vertices[vertex];
    let mut lap = SpacePoint::default();
    let mut area = T::zero();
    for &(p, q) in &ring {
        let (xp, xq) = (mesh.vertices[p], mesh.vertices[q]);
        let cot_p = cot(xp, x, xq);
        let cot_q = cot(xq, x, xp);
        // Edge x→q is opposite the angle at p, edge x→p opposite the angle at q.
        lap = lap + (xq - x) * cot_p + (xp - x) * cot_q;

        let tri_area = (xp - x).cross(&(xq - x)).norm() * T::lit(0.5);
        let obtuse_x = (xp - x).dot(&(xq - x)) < T::zero();
        let obtuse_other = (x - xp).dot(&(xq - xp)) < T::zero() || (x - xq).dot(&(xp - xq)) < T::zero();
        area = area
            + if obtuse_x {
                tri_area * T::lit(0.5)
            } else if obtuse_other {
                tri_area * T::lit(0.25)
            } else {
                ((xp - x).dot(&(xp - x)) * cot_q + (xq - x).dot(&(xq - x)) * cot_p) * T::lit(0.125)
            };
    }
    let lap = lap * (T::lit(2.0) * area).recip();
    Ok(-lap.dot(&mesh.normals[vertex]))
}

/// `(vertex, estimate)` for every interior vertex.
pub fn discrete_mean_curvature_all<T: Real>(mesh: &SurfaceMesh<T>) -> Vec<(usize, T)> {
    let interior: Vec<usize> = mesh.interior_vertices().collect();
    interior
        .into_par_iter()
        .map(|v| (v, discrete_mean_curvature(mesh, v).expect("interior vertex")))
        .collect()
}

/// Largest `|H_est - H|` over interior vertices.
pub fn max_interior_deviation<T: Real>(mesh: &SurfaceMesh<T>) -> T {
    discrete_mean_curvature_all(mesh)
        .into_iter()
        .map(|(v, h)| (h - mesh.mean_curvature[v]).abs())
        .fold(T::zero(), T::max)
}
