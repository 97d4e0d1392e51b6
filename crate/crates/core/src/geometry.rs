//! Helicoidal surfaces generated by a planar curve.
//!
//! A planar curve `X(s)` parametrized by arc length is swept by the screw
//! motion of pitch `h`: `F(s, t) = (e^{it} X(s), h t)`. Everything here is
//! expressed through the support functions `tau = <X, T>` and `nu = <X, N>`
//! of the curve, where `T` is the unit tangent and `N = iT`.
//!
//! Pitch is stored as its inverse `mu = 1/h`, so the translation-invariant
//! case `h = ∞` is the ordinary value `mu = 0`. Formulas are rewritten in
//! `mu` so that they stay finite there.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::law::CurvatureLaw;
use crate::scalar::Real;

/// Inverse pitch `mu = 1/h` of a helicoidal motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pitch<T> {
    mu: T,
}

impl<T: Real> Pitch<T> {
    /// Pitch from its inverse. `mu = 0` means `h = ∞`.
    pub fn from_mu(mu: T) -> Result<Self> {
        if !mu.is_finite() || mu < T::zero() {
            return Err(Error::InvalidInput(format!(
                "inverse pitch must be finite and non-negative, got {}",
                mu
            )));
        }
        Ok(Self { mu })
    }

    /// Pitch from a finite, positive `h`.
    pub fn from_h(h: T) -> Result<Self> {
        if !(h > T::zero()) || h.is_nan() {
            return Err(Error::InvalidInput(format!("pitch must be positive, got {}", h)));
        }
        if h.is_infinite() {
            return Ok(Self::infinite());
        }
        Self::from_mu(h.recip())
    }

    /// The translation-invariant limit `h = ∞`.
    pub fn infinite() -> Self {
        Self { mu: T::zero() }
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    /// `Some(h)` for finite pitch, `None` for `h = ∞`.
    pub fn h(&self) -> Option<T> {
        if self.mu > T::zero() {
            Some(self.mu.recip())
        } else {
            None
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.mu == T::zero()
    }

    fn finite_h(&self) -> Result<T> {
        self.h().ok_or(Error::InfinitePitch)
    }
}

/// One arc-length sample of a generating curve.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CurveState<T> {
    pub s: T,
    pub tau: T,
    pub nu: T,
    /// Tangent angle, `T = e^{i theta}`.
    pub theta: T,
    /// Signed curvature.
    pub k: T,
}

impl<T: Real> CurveState<T> {
    /// Squared distance to the origin, `tau^2 + nu^2`.
    pub fn r2(&self) -> T {
        self.tau * self.tau + self.nu * self.nu
    }

    pub fn r(&self) -> T {
        self.tau.hypot(self.nu)
    }

    pub fn point(&self) -> PlanePoint<T> {
        reconstruct_point(self)
    }

    pub fn tangent(&self) -> PlanePoint<T> {
        PlanePoint::new(self.theta.cos(), self.theta.sin())
    }

    /// Leftward normal `N = iT`.
    pub fn normal(&self) -> PlanePoint<T> {
        PlanePoint::new(-self.theta.sin(), self.theta.cos())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlanePoint<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> PlanePoint<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn norm(&self) -> T {
        self.x.hypot(self.y)
    }

    pub fn dot(&self, o: &Self) -> T {
        self.x * o.x + self.y * o.y
    }

    /// Rotation by `angle` about the origin.
    pub fn rotated(&self, angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    /// Polar angle in `(-π, π]`.
    pub fn angle(&self) -> T {
        self.y.atan2(self.x)
    }

    pub fn distance(&self, o: &Self) -> T {
        (*self - *o).norm()
    }
}

impl<T: Real> Add for PlanePoint<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Real> Sub for PlanePoint<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl<T: Real> Mul<T> for PlanePoint<T> {
    type Output = Self;
    fn mul(self, a: T) -> Self {
        Self::new(self.x * a, self.y * a)
    }
}

/// A point or vector in R^3.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SpacePoint<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

pub type SpaceVector<T> = SpacePoint<T>;

impl<T: Real> SpacePoint<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn dot(&self, o: &Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl<T: Real> Add for SpacePoint<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> Sub for SpacePoint<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Mul<T> for SpacePoint<T> {
    type Output = Self;
    fn mul(self, a: T) -> Self {
        Self::new(self.x * a, self.y * a, self.z * a)
    }
}

impl<T: Real> Neg for SpacePoint<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

/// Symmetric 2x2 matrix `[[a, b], [b, c]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sym2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Real> Sym2<T> {
    pub fn det(&self) -> T {
        self.a * self.c - self.b * self.b
    }

    pub fn inverse(&self) -> Self {
        let d = self.det();
        Self {
            a: self.c / d,
            b: -self.b / d,
            c: self.a / d,
        }
    }

    /// `sum_ij M_ij N_ij`, i.e. `trace(M N)` for symmetric matrices.
    pub fn contract(&self, o: &Self) -> T {
        self.a * o.a + T::lit(2.0) * self.b * o.b + self.c * o.c
    }
}

/// Mean curvature `H` of the helicoidal surface at a point of its
/// generating curve, with the normal of [`unit_normal`].
///
/// For finite pitch `H = -h (k (r^2 + h^2) + nu) / (tau^2 + h^2)^{3/2}`,
/// evaluated as `-(k (1 + mu^2 r^2) + mu^2 nu) / (1 + mu^2 tau^2)^{3/2}`,
/// which reduces to `H = -k` at `mu = 0`.
pub fn mean_curvature<T: Real>(tau: T, nu: T, k: T, pitch: Pitch<T>) -> T {
    let mu2 = pitch.mu * pitch.mu;
    let r2 = tau * tau + nu * nu;
    let q = T::one() + mu2 * tau * tau;
    -(k * (T::one() + mu2 * r2) + mu2 * nu) / (q * q.sqrt())
}

/// Solves the mean-curvature relation for `k`, turning a prescribed mean
/// curvature `psi(tau, nu)` into a curvature law for the generating curve:
/// `k = -(psi (tau^2 + h^2)^{3/2} / h + nu) / (r^2 + h^2)`.
pub fn prescribed_h_to_law<T, F>(psi: F, pitch: Pitch<T>) -> CurvatureLaw<T>
where
    T: Real,
    F: Fn(T, T) -> T + Send + Sync + 'static,
{
    CurvatureLaw::prescribed(psi, pitch)
}

/// Curvature value of the prescribed-mean-curvature law at one point.
pub(crate) fn prescribed_curvature<T: Real>(psi: T, tau: T, nu: T, mu: T) -> T {
    let mu2 = mu * mu;
    let q = T::one() + mu2 * tau * tau;
    -(psi * q * q.sqrt() + mu2 * nu) / (T::one() + mu2 * (tau * tau + nu * nu))
}

/// `X = (tau + i nu) e^{i theta}`.
pub fn reconstruct_point<T: Real>(state: &CurveState<T>) -> PlanePoint<T> {
    let (s, c) = state.theta.sin_cos();
    PlanePoint::new(state.tau * c - state.nu * s, state.tau * s + state.nu * c)
}

/// Direction `rT/X = (tau - i nu) / r` of the tangent relative to the
/// position; undefined at the origin.
pub fn growth_direction<T: Real>(state: &CurveState<T>) -> PlanePoint<T> {
    let r = state.r();
    PlanePoint::new(state.tau / r, -state.nu / r)
}

/// `F(s, t) = (e^{it} X(s), h t)`.
pub fn surface_point<T: Real>(curve_point: PlanePoint<T>, t: T, pitch: Pitch<T>) -> Result<SpacePoint<T>> {
    let h = pitch.finite_h()?;
    let p = curve_point.rotated(t);
    Ok(SpacePoint::new(p.x, p.y, h * t))
}

/// Metric `[[1, -nu], [-nu, r^2 + h^2]]` in the `(s, t)` coordinates.
pub fn first_fundamental_form<T: Real>(tau: T, nu: T, pitch: Pitch<T>) -> Result<Sym2<T>> {
    let h = pitch.finite_h()?;
    Ok(Sym2 {
        a: T::one(),
        b: -nu,
        c: tau * tau + nu * nu + h * h,
    })
}

/// Second fundamental form `-h / sqrt(tau^2 + h^2) [[k, 1], [1, -nu]]`.
pub fn second_fundamental_form<T: Real>(tau: T, nu: T, k: T, pitch: Pitch<T>) -> Result<Sym2<T>> {
    pitch.finite_h()?;
    let f = -(T::one() + pitch.mu * pitch.mu * tau * tau).sqrt().recip();
    Ok(Sym2 {
        a: f * k,
        b: f,
        c: -f * nu,
    })
}

/// Unit normal `(h e^{it} N, -tau) / sqrt(tau^2 + h^2)` at `t = 0`.
pub fn unit_normal<T: Real>(state: &CurveState<T>, pitch: Pitch<T>) -> SpaceVector<T> {
    unit_normal_at(state, T::zero(), pitch)
}

/// Unit normal at an arbitrary sweep parameter `t`. Valid for `mu = 0`
/// too, where it is the prism normal `(N, 0)`.
pub fn unit_normal_at<T: Real>(state: &CurveState<T>, t: T, pitch: Pitch<T>) -> SpaceVector<T> {
    let n = state.normal().rotated(t);
    let z = -pitch.mu * state.tau;
    let inv = (T::one() + z * z).sqrt().recip();
    SpacePoint::new(n.x * inv, n.y * inv, z * inv)
}

/// Coordinate tangent vectors `(dF/ds, dF/dt)` at sweep parameter `t`.
pub fn coordinate_tangents<T: Real>(
    state: &CurveState<T>,
    t: T,
    pitch: Pitch<T>,
) -> Result<(SpaceVector<T>, SpaceVector<T>)> {
    let h = pitch.finite_h()?;
    let tan = state.tangent().rotated(t);
    let x = reconstruct_point(state).rotated(t);
    Ok((
        SpacePoint::new(tan.x, tan.y, T::zero()),
        SpacePoint::new(-x.y, x.x, h),
    ))
}
