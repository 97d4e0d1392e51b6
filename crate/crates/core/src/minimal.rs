//! Minimal helicoidal surfaces.
//!
//! The generating curves have the closed form
//! `X = (tau + i (A/h) sqrt(tau^2 + h^2)) e^{-i (A/h) arsinh(tau/h) + i theta0}`,
//! where `|A|` is the distance of the curve to the origin. Arc length is
//! linear in `tau`: `s = tau (A^2 + h^2) / h^2`.

use crate::error::{Error, Result};
use crate::geometry::{CurveState, Pitch, PlanePoint};
use crate::law::{CurvatureLaw, DEFAULT_EXCLUSION_RADIUS};
use crate::ode::GeneratingCurve;
use crate::scalar::{arsinh, Real};

/// `k = -nu / (r^2 + h^2)`; `k = 0` at `h = ∞`.
pub fn minimal_law<T: Real>(pitch: Pitch<T>) -> CurvatureLaw<T> {
    CurvatureLaw::minimal(pitch)
}

/// `nu / sqrt(tau^2 + h^2)`, constant along minimal curves (equal to `A/h`).
pub fn minimal_invariant<T: Real>(tau: T, nu: T, pitch: Pitch<T>) -> T {
    let mu = pitch.mu();
    nu * mu / (T::one() + mu * mu * tau * tau).sqrt()
}

/// Parameters of a minimal generating curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimalCurveSpec<T> {
    pitch: Pitch<T>,
    pub a: T,
    pub theta0: T,
}

impl<T: Real> MinimalCurveSpec<T> {
    /// `pitch` must be finite.
    pub fn new(pitch: Pitch<T>, a: T, theta0: T) -> Result<Self> {
        if pitch.is_infinite() {
            return Err(Error::InfinitePitch);
        }
        if !a.is_finite() || !theta0.is_finite() {
            return Err(Error::InvalidInput("A and theta0 must be finite".into()));
        }
        Ok(Self { pitch, a, theta0 })
    }

    pub fn pitch(&self) -> Pitch<T> {
        self.pitch
    }

    pub fn h(&self) -> T {
        self.pitch.mu().recip()
    }

    /// `ds/dtau = 1 + A^2 / h^2`.
    pub fn speed(&self) -> T {
        let am = self.a * self.pitch.mu();
        T::one() + am * am
    }

    /// Exact state at support value `tau`.
    pub fn state_at_tau(&self, tau: T) -> CurveState<T> {
        let mu = self.pitch.mu();
        let q = (T::one() + mu * mu * tau * tau).sqrt();
        let speed = self.speed();
        CurveState {
            s: tau * speed,
            tau,
            nu: self.a * q,
            theta: -self.a * mu * arsinh(mu * tau) + self.theta0,
            k: -self.a * mu * mu / (speed * q),
        }
    }

    /// Exact state at arc length `s` (measured from the point closest to the origin).
    pub fn state_at(&self, s: T) -> CurveState<T> {
        let mut st = self.state_at_tau(s / self.speed());
        st.s = s;
        st
    }

    /// Limiting values of `rT/X` as `tau → ±∞`, `(±h - iA) / sqrt(h^2 + A^2)`.
    pub fn growth_limits(&self) -> (PlanePoint<T>, PlanePoint<T>) {
        let h = self.h();
        let n = (h * h + self.a * self.a).sqrt();
        (
            PlanePoint::new(-h / n, -self.a / n),
            PlanePoint::new(h / n, -self.a / n),
        )
    }
}

fn grid<T: Real>(lo: T, hi: T, n: usize) -> Result<Vec<T>> {
    if !(lo < hi) || n < 2 {
        return Err(Error::InvalidInput(format!(
            "need lo < hi and at least two samples, got [{}, {}] with {} samples",
            lo, hi, n
        )));
    }
    Ok((0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * T::lit(i as f64 / (n - 1) as f64)
            }
        })
        .collect())
}

/// Samples of the closed form at `n_samples` equally spaced values of `tau`.
pub fn minimal_closed_form<T: Real>(
    spec: &MinimalCurveSpec<T>,
    tau_range: (T, T),
    n_samples: usize,
) -> Result<GeneratingCurve<T>> {
    let states = grid(tau_range.0, tau_range.1, n_samples)?
        .into_iter()
        .map(|tau| spec.state_at_tau(tau))
        .collect();
    GeneratingCurve::from_states(states, Some(spec.pitch), minimal_law(spec.pitch), T::epsilon())
}

/// Samples of the closed form at `n_samples` equally spaced arc lengths.
pub fn minimal_closed_form_arclength<T: Real>(
    spec: &MinimalCurveSpec<T>,
    s_range: (T, T),
    n_samples: usize,
) -> Result<GeneratingCurve<T>> {
    let speed = spec.speed();
    minimal_closed_form(spec, (s_range.0 / speed, s_range.1 / speed), n_samples)
}

/// `X(u) = (h sinh(hu) + iA cosh(hu)) e^{-iAu + i theta0}` sampled at
/// `n_samples` equally spaced `u`.
pub fn wunderlich_parametrization<T: Real>(
    spec: &MinimalCurveSpec<T>,
    u_range: (T, T),
    n_samples: usize,
) -> Result<GeneratingCurve<T>> {
    let h = spec.h();
    let mu = spec.pitch.mu();
    let speed = spec.speed();
    let states = grid(u_range.0, u_range.1, n_samples)?
        .into_iter()
        .map(|u| {
            let hu = h * u;
            let tau = h * hu.sinh();
            CurveState {
                s: tau * speed,
                tau,
                nu: spec.a * hu.cosh(),
                theta: -spec.a * u + spec.theta0,
                k: -spec.a * mu * mu / (speed * hu.cosh()),
            }
        })
        .collect();
    GeneratingCurve::from_states(states, Some(spec.pitch), minimal_law(spec.pitch), T::epsilon())
}

/// `h = 0` limit `X = s^{1 - ia} / (1 - ia)` for `s > 0`.
pub fn minimal_h0_curve<T: Real>(a: T, s_range: (T, T), n_samples: usize) -> Result<GeneratingCurve<T>> {
    if !(s_range.0 > T::zero()) {
        return Err(Error::InvalidInput(format!(
            "the h = 0 curve is defined for s > 0, got s_min = {}",
            s_range.0
        )));
    }
    let d = T::one() + a * a;
    let states = grid(s_range.0, s_range.1, n_samples)?
        .into_iter()
        .map(|s| CurveState {
            s,
            tau: s / d,
            nu: a * s / d,
            theta: -a * s.ln(),
            k: -a / s,
        })
        .collect();
    GeneratingCurve::from_states(
        states,
        None,
        CurvatureLaw::minimal_h0(T::lit(DEFAULT_EXCLUSION_RADIUS)),
        T::epsilon(),
    )
}

/// Spec of the family member with `A = a h` and
/// `theta0 = a log(2 / (h (a^2 + 1)))`, which converges to the `h = 0`
/// curve as `h → 0`.
pub fn limit_family_spec<T: Real>(h: T, a: T) -> Result<MinimalCurveSpec<T>> {
    let pitch = Pitch::from_h(h)?;
    let theta0 = a * (T::lit(2.0) / (h * (a * a + T::one()))).ln();
    MinimalCurveSpec::new(pitch, a * h, theta0)
}

/// Limit-family curve sampled at `n_samples` equally spaced arc lengths.
pub fn minimal_limit_family<T: Real>(h: T, a: T, s_range: (T, T), n_samples: usize) -> Result<GeneratingCurve<T>> {
    let spec = limit_family_spec(h, a)?;
    minimal_closed_form_arclength(&spec, s_range, n_samples)
}

/// Direct evaluation of the limit-family point
/// `X = (s + ia sqrt(s^2 + c^2)) / (a^2 + 1) · e^{-ia log((s + sqrt(s^2 + c^2)) / 2)}`
/// with `c = h (a^2 + 1)`.
pub fn limit_family_point<T: Real>(h: T, a: T, s: T) -> PlanePoint<T> {
    let d = a * a + T::one();
    let c = h * d;
    let root = (s * s + c * c).sqrt();
    let base = PlanePoint::new(s / d, a * root / d);
    base.rotated(-a * ((s + root) / T::lit(2.0)).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{growth_direction, mean_curvature, reconstruct_point};
    use approx::assert_abs_diff_eq;

    fn spec(h: f64, a: f64) -> MinimalCurveSpec<f64> {
        MinimalCurveSpec::new(Pitch::from_h(h).unwrap(), a, 0.0).unwrap()
    }

    #[test]
    fn law_values() {
        let p1 = Pitch::from_h(1.0).unwrap();
        assert_eq!(minimal_law(p1).curvature(0.0, 0.0), 0.0);
        assert_eq!(minimal_law(p1).curvature(0.0, 1.0), -0.5);
    }

    #[test]
    fn closed_form_matches_law() {
        for &(h, a) in &[(0.5, 2.0), (1.0, -1.0), (2.0, 0.3)] {
            let sp = spec(h, a);
            let c = minimal_closed_form(&sp, (-5.0, 5.0), 101).unwrap();
            for st in c.states() {
                assert_abs_diff_eq!(st.k, c.law().curvature(st.tau, st.nu), epsilon = 1e-14);
                assert_abs_diff_eq!(minimal_invariant(st.tau, st.nu, sp.pitch()), a / h, epsilon = 1e-13);
                assert!(mean_curvature(st.tau, st.nu, st.k, sp.pitch()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn zero_a_is_a_line() {
        let c = minimal_closed_form(&spec(1.0, 0.0), (-3.0, 3.0), 11).unwrap();
        for st in c.states() {
            let x = reconstruct_point(st);
            assert_eq!(x.y, 0.0);
            assert_eq!(st.k, 0.0);
        }
    }

    #[test]
    fn wunderlich_origin_point() {
        let c = wunderlich_parametrization(&spec(1.0, 2.0), (-1.0, 1.0), 3).unwrap();
        let x = reconstruct_point(&c.states()[1]);
        assert_abs_diff_eq!(x.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x.y, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn growth_angle_at_large_tau() {
        let sp = spec(1.0, 1.0);
        let (neg, pos) = sp.growth_limits();
        let far = growth_direction(&sp.state_at_tau(1e3));
        let near = growth_direction(&sp.state_at_tau(-1e3));
        assert!((far - pos).norm() < 0.05);
        assert!((near - neg).norm() < 0.05);
    }

    #[test]
    fn h0_curve_formulae() {
        let a = 0.7;
        let c = minimal_h0_curve(a, (0.5, 5.0), 50).unwrap();
        for st in c.states() {
            assert_abs_diff_eq!(st.nu / st.tau, a, epsilon = 1e-14);
            assert_abs_diff_eq!(reconstruct_point(st).norm(), st.s / (a * a + 1.0f64).sqrt(), epsilon = 1e-13);
            assert_abs_diff_eq!(st.k, c.law().curvature(st.tau, st.nu), epsilon = 1e-13);
        }
        assert!(minimal_h0_curve(a, (0.0, 1.0), 5).is_err());
    }

    #[test]
    fn limit_family_direct_formula() {
        let x = limit_family_point(1.0, 1.0, 0.0);
        assert_abs_diff_eq!(x.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x.y, 1.0, epsilon = 1e-15);
        for &(h, a, s) in &[(0.3, 0.8, 2.0), (1.0, -0.5, -1.0), (0.01, 2.0, 0.7)] {
            let sp = limit_family_spec(h, a).unwrap();
            let p = reconstruct_point(&sp.state_at(s));
            assert!((p - limit_family_point(h, a, s)).norm() < 1e-12);
        }
        let line = limit_family_point(0.4, 0.0, 3.0);
        assert_eq!((line.x, line.y), (3.0, 0.0));
    }
}
