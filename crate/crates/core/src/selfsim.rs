//! Self-similar motions `F(p, t) = g(t) Q(t) F(p) + v(t)` under mean
//! curvature flow. A surface moves this way exactly when
//! `b <F, n> + <A F, n> + <c, n> = -H` with `b = g'(0)`, `A = Q'(0)` skew and
//! `c = v'(0)`.

use crate::error::{Error, Result};
use crate::geometry::{mean_curvature, reconstruct_point, surface_point, unit_normal_at, Pitch, SpacePoint};
use crate::linalg::{dot, norm, Matrix};
use crate::ode::GeneratingCurve;
use crate::scalar::Real;

fn check_skew<T: Real>(a: &Matrix<T>) -> Result<()> {
    let dev = a.skew_deviation();
    if dev > T::lit(1e-14) * a.max_abs().max(T::one()) {
        return Err(Error::NonSkew { deviation: dev.as_f64() });
    }
    Ok(())
}

/// The triple `(b, A, c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionSpec<T> {
    pub b: T,
    pub a: Matrix<T>,
    pub c: Vec<T>,
}

impl<T: Real> MotionSpec<T> {
    pub fn new(b: T, a: Matrix<T>, c: Vec<T>) -> Result<Self> {
        check_skew(&a)?;
        if c.len() != a.dim() {
            return Err(Error::InvalidInput(format!(
                "translation has {} components, rotation acts on {}",
                c.len(),
                a.dim()
            )));
        }
        Ok(Self { b, a, c })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// `b <F, n> + <A F, n> + <c, n> + H`.
    pub fn residual(&self, point: &[T], normal: &[T], mean_curvature: T) -> T {
        let af = self.a.mul_vec(point);
        self.b * dot(point, normal) + dot(&af, normal) + dot(&self.c, normal) + mean_curvature
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    /// `g = sqrt(2bt + 1)`, `Q = exp(log(2bt + 1) / (2b) A)`, `v = 0`.
    DilationRotation,
    /// `g = 1`, `Q = exp(tA)`, `v = tc`.
    TranslationRotation,
}

/// Time profile `(g, Q, v)` of a self-similar motion.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionProfile<T> {
    pub kind: ProfileKind,
    pub spec: MotionSpec<T>,
    /// Open interval of times where the profile is defined.
    pub validity: (T, T),
}

impl<T: Real> MotionProfile<T> {
    pub fn contains(&self, t: T) -> bool {
        t > self.validity.0 && t < self.validity.1
    }

    fn check(&self, t: T) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "t = {} is outside the validity interval ({}, {})",
                t, self.validity.0, self.validity.1
            )))
        }
    }

    /// Rotation angle parameter: `log(2bt + 1) / (2b)`, or `t` when `b = 0`.
    pub fn angular_parameter(&self, t: T) -> Result<T> {
        self.check(t)?;
        let b = self.spec.b;
        Ok(match self.kind {
            ProfileKind::DilationRotation if b != T::zero() => (T::lit(2.0) * b * t).ln_1p() / (T::lit(2.0) * b),
            _ => t,
        })
    }

    pub fn g(&self, t: T) -> Result<T> {
        self.check(t)?;
        Ok(match self.kind {
            ProfileKind::DilationRotation => (T::lit(2.0) * self.spec.b * t + T::one()).sqrt(),
            ProfileKind::TranslationRotation => T::one(),
        })
    }

    pub fn q(&self, t: T) -> Result<Matrix<T>> {
        let phi = self.angular_parameter(t)?;
        matrix_exp_skew(&self.spec.a, phi)
    }

    pub fn v(&self, t: T) -> Result<Vec<T>> {
        self.check(t)?;
        Ok(match self.kind {
            ProfileKind::DilationRotation => vec![T::zero(); self.spec.dim()],
            ProfileKind::TranslationRotation => self.spec.c.iter().map(|&c| c * t).collect(),
        })
    }

    /// Position at time `t` of the point that starts at `x`.
    pub fn apply(&self, t: T, x: &[T]) -> Result<Vec<T>> {
        let g = self.g(t)?;
        let q = self.q(t)?;
        let v = self.v(t)?;
        Ok(q.mul_vec(x).iter().zip(&v).map(|(&a, &b)| g * a + b).collect())
    }
}

/// Rotation combined with dilation at rate `b`.
pub fn dilation_rotation_profile<T: Real>(b: T, a: Matrix<T>) -> Result<MotionProfile<T>> {
    let n = a.dim();
    let spec = MotionSpec::new(b, a, vec![T::zero(); n])?;
    let validity = if b > T::zero() {
        (-(T::lit(2.0) * b).recip(), T::infinity())
    } else if b < T::zero() {
        (T::neg_infinity(), -(T::lit(2.0) * b).recip())
    } else {
        (T::neg_infinity(), T::infinity())
    };
    Ok(MotionProfile {
        kind: ProfileKind::DilationRotation,
        spec,
        validity,
    })
}

/// Rotation combined with a translation `c` along the rotation axis
/// (`A c = 0`).
pub fn translation_rotation_profile<T: Real>(a: Matrix<T>, c: Vec<T>) -> Result<MotionProfile<T>> {
    let spec = MotionSpec::new(T::zero(), a, c)?;
    let ac = norm(&spec.a.mul_vec(&spec.c));
    if ac > T::lit(1e-12) * norm(&spec.c) {
        return Err(Error::OrthogonalityViolated { norm: ac.as_f64() });
    }
    Ok(MotionProfile {
        kind: ProfileKind::TranslationRotation,
        spec,
        validity: (T::neg_infinity(), T::infinity()),
    })
}

/// Translation `w` and the spec it reduces to.
///
/// For `b ≠ 0`, `(A + bI) w = c` and the reduced spec has no translation.
/// For `b = 0`, `c = A w + c0` with `A c0 = 0` and `w` the minimal-norm
/// solution (orthogonal to `ker A`). A surface satisfies the original
/// equation exactly when its translate by `w` satisfies the reduced one.
pub fn reduce_general<T: Real>(spec: &MotionSpec<T>) -> Result<(Vec<T>, MotionSpec<T>)> {
    let n = spec.dim();
    if spec.b != T::zero() {
        let m = &spec.a + &Matrix::identity(n).scale(spec.b);
        let w = m.solve(&spec.c)?;
        let reduced = MotionSpec::new(spec.b, spec.a.clone(), vec![T::zero(); n])?;
        return Ok((w, reduced));
    }
    // A^T A = -A^2 is symmetric positive semidefinite with kernel ker A.
    let ata = &spec.a.transpose() * &spec.a;
    let (values, vectors) = ata.symmetric_eigen();
    let top = values.iter().fold(T::zero(), |m, &v| m.max(v.abs()));
    let cut = top * T::lit(1e-12);
    let atc = spec.a.transpose().mul_vec(&spec.c);
    let mut w = vec![T::zero(); n];
    let mut c0 = vec![T::zero(); n];
    for (lambda, v) in values.iter().zip(&vectors) {
        if *lambda > cut && *lambda > T::zero() {
            let coef = dot(v, &atc) / *lambda;
            for i in 0..n {
                w[i] = w[i] + coef * v[i];
            }
        } else {
            let coef = dot(v, &spec.c);
            for i in 0..n {
                c0[i] = c0[i] + coef * v[i];
            }
        }
    }
    let reduced = MotionSpec::new(T::zero(), spec.a.clone(), c0)?;
    Ok((w, reduced))
}

/// `exp(tA)` for skew `A`: Rodrigues' formula in dimension 3, scaling and
/// squaring with a degree-13 Taylor polynomial otherwise.
pub fn matrix_exp_skew<T: Real>(a: &Matrix<T>, t: T) -> Result<Matrix<T>> {
    check_skew(a)?;
    let k = a.scale(t);
    if a.dim() == 3 {
        let w = [k[(2, 1)], k[(0, 2)], k[(1, 0)]];
        let theta2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
        let theta = theta2.sqrt();
        let (s, c) = if theta < T::lit(1e-4) {
            // Series for sin(θ)/θ and (1 - cos θ)/θ^2.
            (
                T::one() - theta2 / T::lit(6.0) + theta2 * theta2 / T::lit(120.0),
                T::lit(0.5) - theta2 / T::lit(24.0) + theta2 * theta2 / T::lit(720.0),
            )
        } else {
            (theta.sin() / theta, (T::one() - theta.cos()) / theta2)
        };
        let k2 = &k * &k;
        return Ok(&(&Matrix::identity(3) + &k.scale(s)) + &k2.scale(c));
    }
    Ok(matrix_exp(&k))
}

/// General matrix exponential by scaling and squaring.
pub fn matrix_exp<T: Real>(m: &Matrix<T>) -> Matrix<T> {
    let n = m.dim();
    let norm1 = m.frobenius();
    let mut squarings = 0;
    let mut scale = T::one();
    while norm1 * scale > T::lit(0.5) {
        scale = scale * T::lit(0.5);
        squarings += 1;
    }
    let x = m.scale(scale);
    let mut term = Matrix::identity(n);
    let mut sum = Matrix::identity(n);
    for j in 1..=13 {
        term = (&term * &x).scale(T::lit(j as f64).recip());
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// One sampled point of a surface with its unit normal and mean curvature.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceSample<T> {
    pub point: Vec<T>,
    pub normal: Vec<T>,
    pub mean_curvature: T,
}

impl<T: Real> SurfaceSample<T> {
    pub fn from_space(point: SpacePoint<T>, normal: SpacePoint<T>, mean_curvature: T) -> Self {
        Self {
            point: point.to_array().to_vec(),
            normal: normal.to_array().to_vec(),
            mean_curvature,
        }
    }

    /// The same sample on the surface translated by `w`.
    pub fn translated(&self, w: &[T]) -> Self {
        Self {
            point: self.point.iter().zip(w).map(|(&p, &d)| p + d).collect(),
            normal: self.normal.clone(),
            mean_curvature: self.mean_curvature,
        }
    }
}

/// Samples of the helicoidal surface swept by `curve` at every curve sample
/// and every sweep parameter in `t_values`.
pub fn helicoidal_samples<T: Real>(
    curve: &GeneratingCurve<T>,
    pitch: Pitch<T>,
    t_values: &[T],
) -> Result<Vec<SurfaceSample<T>>> {
    let mut out = Vec::with_capacity(curve.len() * t_values.len());
    for st in curve.states() {
        let x = reconstruct_point(st);
        let h = mean_curvature(st.tau, st.nu, st.k, pitch);
        for &t in t_values {
            let f = surface_point(x, t, pitch)?;
            out.push(SurfaceSample::from_space(f, unit_normal_at(st, t, pitch), h));
        }
    }
    Ok(out)
}

/// `sup |b <F, n> + <A F, n> + <c, n> + H|` over the samples.
pub fn soliton_residual<T: Real>(samples: &[SurfaceSample<T>], spec: &MotionSpec<T>) -> T {
    samples
        .iter()
        .map(|s| spec.residual(&s.point, &s.normal, s.mean_curvature).abs())
        .fold(T::zero(), T::max)
}
