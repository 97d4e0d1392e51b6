//! Curvature laws `k = law(tau, nu)` for generating curves.

use std::fmt;
use std::sync::Arc;

use crate::geometry::{prescribed_curvature, Pitch};
use crate::scalar::Real;

/// Which family a law belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LawKind {
    Rotating,
    Minimal,
    Cmc,
    Prescribed,
    RotatingH0,
    MinimalH0,
    Custom,
}

impl LawKind {
    pub fn name(&self) -> &'static str {
        match self {
            LawKind::Rotating => "rotating",
            LawKind::Minimal => "minimal",
            LawKind::Cmc => "cmc",
            LawKind::Prescribed => "prescribed",
            LawKind::RotatingH0 => "rotating-h0",
            LawKind::MinimalH0 => "minimal-h0",
            LawKind::Custom => "custom",
        }
    }
}

impl fmt::Display for LawKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

type Evaluator<T> = Arc<dyn Fn(T, T) -> T + Send + Sync>;

/// Default excluded radius around the origin for the `h = 0` laws.
pub const DEFAULT_EXCLUSION_RADIUS: f64 = 1e-6;

/// An evaluable curvature law, cheap to clone.
#[derive(Clone)]
pub struct CurvatureLaw<T> {
    kind: LawKind,
    pitch: Option<Pitch<T>>,
    eval: Evaluator<T>,
    exclusion_radius: Option<T>,
}

impl<T: fmt::Debug> fmt::Debug for CurvatureLaw<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CurvatureLaw")
            .field("kind", &self.kind)
            .field("pitch", &self.pitch)
            .field("exclusion_radius", &self.exclusion_radius)
            .finish()
    }
}

impl<T: Real> CurvatureLaw<T> {
    /// Rotating/translating soliton law
    /// `k = (tau (tau^2 + h^2) - nu) / (r^2 + h^2)`; `k = tau` at `h = ∞`.
    pub fn rotating(pitch: Pitch<T>) -> Self {
        let mu2 = pitch.mu() * pitch.mu();
        Self::with_pitch(LawKind::Rotating, pitch, move |tau, nu| {
            (tau * (T::one() + mu2 * tau * tau) - mu2 * nu) / (T::one() + mu2 * (tau * tau + nu * nu))
        })
    }

    /// Minimal surface law `k = -nu / (r^2 + h^2)`; `k = 0` at `h = ∞`.
    pub fn minimal(pitch: Pitch<T>) -> Self {
        let mu2 = pitch.mu() * pitch.mu();
        Self::with_pitch(LawKind::Minimal, pitch, move |tau, nu| {
            -mu2 * nu / (T::one() + mu2 * (tau * tau + nu * nu))
        })
    }

    /// Constant mean curvature `H = -1`; `k = 1` at `h = ∞`.
    pub fn cmc(pitch: Pitch<T>) -> Self {
        Self::cmc_with(-T::one(), pitch)
    }

    /// Constant mean curvature `H`.
    pub fn cmc_with(mean_curvature: T, pitch: Pitch<T>) -> Self {
        let mu = pitch.mu();
        Self::with_pitch(LawKind::Cmc, pitch, move |tau, nu| {
            prescribed_curvature(mean_curvature, tau, nu, mu)
        })
    }

    /// Law realizing a prescribed mean curvature `H = psi(tau, nu)`.
    pub fn prescribed<F>(psi: F, pitch: Pitch<T>) -> Self
    where
        F: Fn(T, T) -> T + Send + Sync + 'static,
    {
        let mu = pitch.mu();
        Self::with_pitch(LawKind::Prescribed, pitch, move |tau, nu| {
            prescribed_curvature(psi(tau, nu), tau, nu, mu)
        })
    }

    /// `h → 0` limit of the rotating law, `k = (tau^3 - nu) / r^2`.
    /// Undefined at the origin; a disc of radius `exclusion_radius` is cut out.
    pub fn rotating_h0(exclusion_radius: T) -> Self {
        Self {
            kind: LawKind::RotatingH0,
            pitch: None,
            eval: Arc::new(|tau: T, nu: T| (tau * tau * tau - nu) / (tau * tau + nu * nu)),
            exclusion_radius: Some(exclusion_radius),
        }
    }

    /// `h → 0` limit of the minimal law, `k = -nu / r^2`.
    pub fn minimal_h0(exclusion_radius: T) -> Self {
        Self {
            kind: LawKind::MinimalH0,
            pitch: None,
            eval: Arc::new(|tau: T, nu: T| -nu / (tau * tau + nu * nu)),
            exclusion_radius: Some(exclusion_radius),
        }
    }

    /// Arbitrary law, e.g. constant curvature.
    pub fn custom<F>(f: F) -> Self
    where
        F: Fn(T, T) -> T + Send + Sync + 'static,
    {
        Self {
            kind: LawKind::Custom,
            pitch: None,
            eval: Arc::new(f),
            exclusion_radius: None,
        }
    }

    fn with_pitch<F>(kind: LawKind, pitch: Pitch<T>, f: F) -> Self
    where
        F: Fn(T, T) -> T + Send + Sync + 'static,
    {
        Self {
            kind,
            pitch: Some(pitch),
            eval: Arc::new(f),
            exclusion_radius: None,
        }
    }

    /// Overrides the excluded disc around the origin.
    pub fn with_exclusion_radius(mut self, radius: T) -> Self {
        self.exclusion_radius = Some(radius);
        self
    }

    pub fn kind(&self) -> LawKind {
        self.kind
    }

    /// Pitch the law was built for; `None` for the `h = 0` limits and custom laws.
    pub fn pitch(&self) -> Option<Pitch<T>> {
        self.pitch
    }

    pub fn exclusion_radius(&self) -> Option<T> {
        self.exclusion_radius
    }

    #[inline]
    pub fn curvature(&self, tau: T, nu: T) -> T {
        (self.eval)(tau, nu)
    }

    /// Whether `(tau, nu)` lies in the domain of the law.
    pub fn in_domain(&self, tau: T, nu: T) -> bool {
        if !(tau.is_finite() && nu.is_finite()) {
            return false;
        }
        match self.exclusion_radius {
            Some(r) => tau.hypot(nu) > r,
            None => true,
        }
    }

    /// Right-hand side of `tau' = 1 + nu k`, `nu' = -tau k`, `theta' = k`.
    #[inline]
    pub fn rhs(&self, tau: T, nu: T) -> [T; 3] {
        let k = self.curvature(tau, nu);
        [T::one() + nu * k, -tau * k, k]
    }
}
