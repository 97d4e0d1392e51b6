//! Helicoidal surfaces of constant mean curvature `H = -1`.
//!
//! In the coordinates `(x, y) = Φ_h(nu, tau)` every trajectory of the
//! generating-curve system is a circle `x^2 + (y + 1)^2 = R^2`. One trip
//! around that circle is an *excursion*: the curve travels from the outer
//! boundary `r = R + 1` of the annulus to the inner one `r = |R - 1|` and back,
//! its tangent turning by `Δθ(R)`.

pub use crate::elliptic::elliptic_e;
use crate::error::{Error, Result};
use crate::geometry::{reconstruct_point, CurveState, Pitch, PlanePoint};
use crate::law::CurvatureLaw;
use crate::ode::{detect_events, integrate, GeneratingCurve, IntegratorConfig};
use crate::quadrature;
use crate::roots::bisect_secant;
use crate::scalar::Real;

/// Law of the `H = -1` generating curves; `k = 1` at `h = ∞`.
pub fn cmc_law<T: Real>(pitch: Pitch<T>) -> CurvatureLaw<T> {
    CurvatureLaw::cmc(pitch)
}

/// Norm-preserving involution
/// `Φ_h(x1, x2) = (sqrt(r^2 + h^2) / sqrt(x2^2 + h^2) x2, h x1 / sqrt(x2^2 + h^2))`.
/// At `h = ∞` it is the swap `(x2, x1)`.
pub fn involution_phi<T: Real>(x1: T, x2: T, pitch: Pitch<T>) -> (T, T) {
    let mu2 = pitch.mu() * pitch.mu();
    let d = (T::one() + mu2 * x2 * x2).sqrt();
    let r2 = x1 * x1 + x2 * x2;
    ((T::one() + mu2 * r2).sqrt() / d * x2, x1 / d)
}

/// `x^2 + (y + 1)^2` with `(x, y) = Φ_h(nu, tau)`; constant along trajectories.
pub fn circle_invariant<T: Real>(tau: T, nu: T, pitch: Pitch<T>) -> T {
    let (x, y) = involution_phi(nu, tau, pitch);
    x * x + (y + T::one()) * (y + T::one())
}

fn check_amplitude<T: Real>(r: T) -> Result<()> {
    if !(r >= T::zero()) || !r.is_finite() {
        return Err(Error::InvalidInput(format!("amplitude R must be finite and non-negative, got {}", r)));
    }
    Ok(())
}

fn quad_periodic<T: Real, F: Fn(T) -> T>(f: F) -> Result<T> {
    let pi = T::PI();
    Ok(quadrature::integrate(f, -pi, pi, T::lit(1e-13), T::lit(1e-15))?.value)
}

/// Turning of the tangent over one excursion,
/// `Δθ = ∫ [ h sqrt(ρ^2 + h^2) / (w^2 + h^2) + w / (h sqrt(ρ^2 + h^2)) ] du`
/// over `u ∈ [-π, π]` with `w = 1 + R sin u`, `ρ^2 = R^2 + 1 + 2R sin u`.
/// Exactly `2π` at `h = ∞`.
pub fn delta_theta<T: Real>(r: T, pitch: Pitch<T>) -> Result<T> {
    check_amplitude(r)?;
    if pitch.is_infinite() {
        return Ok(T::TAU());
    }
    let mu2 = pitch.mu() * pitch.mu();
    quad_periodic(|u: T| {
        let sn = u.sin();
        let w = T::one() + r * sn;
        let rho2 = r * r + T::one() + T::lit(2.0) * r * sn;
        let q = (T::one() + mu2 * rho2).sqrt();
        q / (T::one() + mu2 * w * w) + mu2 * w / q
    })
}

/// Change of the polar angle of `X` over one excursion: `Δθ`, `Δθ - π` or
/// `Δθ - 2π` for `R < 1`, `R = 1`, `R > 1`.
pub fn delta_phi<T: Real>(r: T, pitch: Pitch<T>) -> Result<T> {
    let dt = delta_theta(r, pitch)?;
    Ok(if r < T::one() {
        dt
    } else if r == T::one() {
        dt - T::PI()
    } else {
        dt - T::TAU()
    })
}

/// Critical ratio `α_h = sqrt(h^2 + 4) / (h π) E(2 / sqrt(h^2 + 4)) + 1/2`
/// separating the two winding regimes; `α = 1` at `h = ∞`.
pub fn alpha<T: Real>(pitch: Pitch<T>) -> T {
    let mu = pitch.mu();
    let s = (T::one() + T::lit(4.0) * mu * mu).sqrt();
    let k = (T::lit(2.0) * mu / s).min(T::one());
    let e = elliptic_e(k).expect("modulus lies in [0, 1]");
    s / T::PI() * e + T::lit(0.5)
}

/// Arc length of one excursion,
/// `S = ∫ sqrt(y^2 + h^2) / h du` with `y = -1 - R sin u`.
pub fn excursion_period<T: Real>(r: T, pitch: Pitch<T>) -> Result<T> {
    check_amplitude(r)?;
    if pitch.is_infinite() {
        return Ok(T::TAU());
    }
    let mu2 = pitch.mu() * pitch.mu();
    quad_periodic(|u: T| {
        let y = T::one() + r * u.sin();
        (T::one() + mu2 * y * y).sqrt()
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Checks `gcd(p, q) = 1` and `1 < p/q < sqrt(h^2 + 1) / h`.
pub fn check_ratio<T: Real>(p: u64, q: u64, pitch: Pitch<T>) -> Result<()> {
    if p == 0 || q == 0 || gcd(p, q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    let ratio = p as f64 / q as f64;
    let mu = pitch.mu().as_f64();
    let upper = (1.0 + mu * mu).sqrt();
    if !(ratio > 1.0 && ratio < upper) {
        return Err(Error::RatioOutOfRange { ratio, upper });
    }
    Ok(())
}

/// The amplitude `R` with `Δθ(R) = 2π p / q`, to `|Δθ(R) - 2πp/q| < tol`.
pub fn find_r<T: Real>(p: u64, q: u64, pitch: Pitch<T>, tol: T) -> Result<T> {
    check_ratio(p, q, pitch)?;
    let target = T::TAU() * T::lit(p as f64) / T::lit(q as f64);
    let f = |r: T| delta_theta(r, pitch).map(|v| v - target);
    let mut hi = T::one();
    let mut doublings = 0;
    while f(hi)? >= T::zero() {
        hi = hi * T::lit(2.0);
        doublings += 1;
        if doublings > 80 {
            return Err(Error::BracketFailure(format!("Δθ stays above target up to R = {}", hi)));
        }
    }
    // The quadrature cannot fail inside the bracket once it succeeded at the
    // ends, so errors are surfaced as NaN and rejected by the solver.
    bisect_secant(|r| f(r).unwrap_or(T::nan()), T::zero(), hi, tol, T::zero())
}

/// Summary of an integrated CMC trajectory.
#[derive(Debug, Clone)]
pub struct CmcTrajectory<T> {
    pub amplitude: T,
    pub pitch: Pitch<T>,
    /// Arc length of one excursion measured on the integrated curve.
    pub period: T,
    /// The same from quadrature.
    pub quadrature_period: T,
    /// `s` at the end of each excursion.
    pub excursion_ends: Vec<T>,
    /// `(tau, nu)` at `s = 0`, always `(0, -(1 + R))`.
    pub start: (T, T),
    /// Tangent turning over the first excursion.
    pub delta_theta: T,
    /// `max |x^2 + (y + 1)^2 - R^2|` over the samples.
    pub circle_drift: T,
    /// Samples of the first excursion.
    pub first_period: Vec<CurveState<T>>,
}

/// Integrates `n_excursions` excursions from `(tau, nu) = (0, -(1 + R))`
/// with tangent angle `theta0`, at tolerance [`CMC_TOLERANCE`].
pub fn generate_cmc_curve<T: Real>(
    r: T,
    pitch: Pitch<T>,
    n_excursions: usize,
    theta0: T,
) -> Result<(GeneratingCurve<T>, CmcTrajectory<T>)> {
    let config = IntegratorConfig::default().with_tol(T::lit(CMC_TOLERANCE));
    generate_cmc_curve_with(r, pitch, n_excursions, theta0, &config)
}

/// Step tolerance for CMC curves. Closure and circle-drift checks accumulate
/// error over several excursions, so this is tighter than the general default.
pub const CMC_TOLERANCE: f64 = 1e-11;

/// As [`generate_cmc_curve`] with explicit tolerances; the window in
/// `config` is ignored.
pub fn generate_cmc_curve_with<T: Real>(
    r: T,
    pitch: Pitch<T>,
    n_excursions: usize,
    theta0: T,
    config: &IntegratorConfig<T>,
) -> Result<(GeneratingCurve<T>, CmcTrajectory<T>)> {
    check_amplitude(r)?;
    if n_excursions == 0 {
        return Err(Error::InvalidInput("at least one excursion is required".into()));
    }
    let law = cmc_law(pitch);
    let mu2 = pitch.mu() * pitch.mu();
    let quadrature_period = excursion_period(r, pitch)?;
    let start = (T::zero(), -(T::one() + r));
    let y0 = [start.0, start.1, theta0, T::zero()];
    let law_rhs = law.clone();
    // The angle u around the circle is carried along so that excursion ends
    // are events u = 2πj.
    let rhs = move |_: T, y: &[T; 4]| {
        let (tau, nu) = (y[0], y[1]);
        let k = law_rhs.curvature(tau, nu);
        let du = ((T::one() + mu2 * tau * tau) / (T::one() + mu2 * (tau * tau + nu * nu))).sqrt();
        [T::one() + nu * k, -tau * k, k, du]
    };
    let ctl = config.step_control();
    let n = T::lit(n_excursions as f64);
    let mut s_end = quadrature_period * n * T::lit(1.001) + T::lit(0.1);
    let (traj, ends) = loop {
        let traj = integrate(&rhs, |y: &[T; 4]| y.iter().all(|v| v.is_finite()), T::zero(), y0, T::zero(), s_end, &ctl)?;
        let ends: Vec<T> = detect_events(&traj, |_, y| (y[3] * T::lit(0.5)).sin())
            .into_iter()
            .map(|e| e.s)
            .filter(|&s| s > T::zero())
            .take(n_excursions)
            .collect();
        if ends.len() == n_excursions {
            break (traj, ends);
        }
        if s_end > quadrature_period * n * T::lit(4.0) + T::one() {
            return Err(Error::InvalidInput("excursion ends could not be located".into()));
        }
        s_end = s_end * T::lit(1.5);
    };

    let last = *ends.last().unwrap();
    let to_state = |s: T, y: &[T; 4]| CurveState {
        s,
        tau: y[0],
        nu: y[1],
        theta: y[2],
        k: law.curvature(y[0], y[1]),
    };
    let mut states: Vec<CurveState<T>> = traj
        .s
        .iter()
        .zip(&traj.y)
        .filter(|(&s, _)| s < last)
        .map(|(&s, y)| to_state(s, y))
        .collect();
    states.push(to_state(last, &traj.eval(last).unwrap()));

    let r2 = r * r;
    let circle_drift = states
        .iter()
        .map(|st| (circle_invariant(st.tau, st.nu, pitch) - r2).abs())
        .fold(T::zero(), T::max);
    let period = ends[0];
    let mut first_period: Vec<CurveState<T>> = states.iter().filter(|st| st.s < period).copied().collect();
    first_period.push(to_state(period, &traj.eval(period).unwrap()));
    let delta_theta = first_period.last().unwrap().theta - theta0;

    let (_, _, _, dense) = traj.into_parts();
    let curve = GeneratingCurve::from_parts(
        states,
        Some(pitch),
        law,
        config.abs_tol.max(config.rel_tol),
        0,
        Some(dense.project::<3>()),
    );
    Ok((
        curve,
        CmcTrajectory {
            amplitude: r,
            pitch,
            period,
            quadrature_period,
            excursion_ends: ends,
            start,
            delta_theta,
            circle_drift,
            first_period,
        },
    ))
}

/// Which side of `α_h` the ratio `p/q` falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindingRegime {
    /// `p/q = α_h`: the curve passes through the origin.
    ThroughOrigin,
    /// `p/q > α_h`: winding number `p`.
    WindingP,
    /// `p/q < α_h`: winding number `p - q`.
    WindingPMinusQ,
}

impl WindingRegime {
    pub fn name(&self) -> &'static str {
        match self {
            WindingRegime::ThroughOrigin => "through-origin",
            WindingRegime::WindingP => "winding-p",
            WindingRegime::WindingPMinusQ => "winding-p-minus-q",
        }
    }
}

/// Result of [`classify_closed`].
#[derive(Debug, Clone)]
pub struct ClassificationReport<T> {
    pub p: u64,
    pub q: u64,
    pub pitch: Pitch<T>,
    /// Solved amplitude.
    pub r: T,
    pub delta_theta: T,
    pub delta_phi: T,
    pub period: T,
    /// `|X(qS) - X(0)|`.
    pub closure_error: T,
    /// Total tangent turning over `q` excursions divided by `2π`.
    pub rotation_number: T,
    /// Winding number about the origin, `None` when the curve passes within
    /// `1e-6` of it.
    pub winding_number: Option<i64>,
    /// Unrounded winding sum.
    pub winding_raw: T,
    pub min_radius: T,
    pub passes_origin: bool,
    pub alpha: T,
    pub regime: WindingRegime,
    /// `max |X(s + S) - e^{iΔθ} X(s)|` over the first excursion.
    pub symmetry_error: T,
}

impl<T: Real> ClassificationReport<T> {
    /// Winding number predicted from the side of `α_h`.
    pub fn expected_winding(&self) -> Option<i64> {
        match self.regime {
            WindingRegime::ThroughOrigin => None,
            WindingRegime::WindingP => Some(self.p as i64),
            WindingRegime::WindingPMinusQ => Some(self.p as i64 - self.q as i64),
        }
    }
}

/// Distance from the origin below which winding is ill-conditioned.
pub const ORIGIN_PROXIMITY: f64 = 1e-6;

/// Signed number of turns of the polar angle of `path(s)` for
/// `s ∈ [s0, s1]`, sampled at `n` points and refined where the angle
/// jumps by more than `π/8`.
pub fn winding_along<T: Real, F: Fn(T) -> PlanePoint<T>>(path: F, s0: T, s1: T, n: usize) -> T {
    fn seg<T: Real, F: Fn(T) -> PlanePoint<T>>(path: &F, a: T, pa: PlanePoint<T>, b: T, pb: PlanePoint<T>, depth: u32) -> T {
        let cross = pa.x * pb.y - pa.y * pb.x;
        let d = cross.atan2(pa.dot(&pb));
        if d.abs() <= T::PI() / T::lit(8.0) || depth == 0 {
            return d;
        }
        let m = (a + b) * T::lit(0.5);
        let pm = path(m);
        seg(path, a, pa, m, pm, depth - 1) + seg(path, m, pm, b, pb, depth - 1)
    }
    let n = n.max(2);
    let mut total = T::zero();
    let mut a = s0;
    let mut pa = path(s0);
    for i in 1..n {
        let b = s0 + (s1 - s0) * T::lit(i as f64 / (n - 1) as f64);
        let pb = path(b);
        total = total + seg(&path, a, pa, b, pb, 30);
        a = b;
        pa = pb;
    }
    total / T::TAU()
}

/// Signed winding number of a closed polyline about the origin.
pub fn polyline_winding<T: Real>(points: &[PlanePoint<T>]) -> T {
    let n = points.len();
    if n < 2 {
        return T::zero();
    }
    let mut total = T::zero();
    for i in 0..n {
        let (a, b) = (points[i], points[(i + 1) % n]);
        total = total + (a.x * b.y - a.y * b.x).atan2(a.dot(&b));
    }
    total / T::TAU()
}

/// Builds and checks the closed curve with rotation number `p` and `q`-fold
/// symmetry.
pub fn classify_closed<T: Real>(p: u64, q: u64, pitch: Pitch<T>) -> Result<ClassificationReport<T>> {
    classify_closed_with(p, q, pitch, T::zero(), &IntegratorConfig::default().with_tol(T::lit(CMC_TOLERANCE)))
}

pub fn classify_closed_with<T: Real>(
    p: u64,
    q: u64,
    pitch: Pitch<T>,
    theta0: T,
    config: &IntegratorConfig<T>,
) -> Result<ClassificationReport<T>> {
    check_ratio(p, q, pitch)?;
    let ratio = p as f64 / q as f64;
    let a = alpha(pitch);
    let gap = (ratio - a.as_f64()).abs();
    if gap < 1e-9 {
        return Err(Error::NearOriginAmbiguity {
            ratio,
            alpha: a.as_f64(),
            gap,
        });
    }
    let r = find_r(p, q, pitch, T::lit(1e-10))?;
    let (curve, traj) = generate_cmc_curve_with(r, pitch, q as usize + 1, theta0, config)?;
    let s_q = traj.excursion_ends[q as usize - 1];
    let s_last = curve.s_range().1;
    let x_at = |s: T| reconstruct_point(&curve.state_at(s.min(s_last)).expect("inside curve"));
    let x0 = x_at(T::zero());
    let end = curve.state_at(s_q).unwrap();
    let closure_error = reconstruct_point(&end).distance(&x0);
    let rotation_number = (end.theta - theta0) / T::TAU();

    let samples_per = 4000usize;
    let closed: Vec<CurveState<T>> = curve.states().iter().filter(|st| st.s <= s_q).copied().collect();
    let mut min_radius = closed.iter().map(|st| st.r()).fold(T::infinity(), T::min);
    for ev in curve.events(|st| st.tau) {
        if ev.s <= s_q {
            min_radius = min_radius.min(ev.r());
        }
    }
    let passes_origin = min_radius < T::lit(ORIGIN_PROXIMITY);
    let winding_raw = winding_along(x_at, T::zero(), s_q, samples_per * q as usize);
    let winding_number = if passes_origin {
        None
    } else {
        Some(winding_raw.round().to_i64().unwrap_or(0))
    };

    let dt = traj.delta_theta;
    let period = traj.period;
    let mut symmetry_error = T::zero();
    for i in 0..=samples_per {
        let s = period * T::lit(i as f64 / samples_per as f64);
        let rotated = x_at(s).rotated(dt);
        symmetry_error = symmetry_error.max(rotated.distance(&x_at(s + period)));
    }

    let regime = if ratio > a.as_f64() {
        WindingRegime::WindingP
    } else {
        WindingRegime::WindingPMinusQ
    };
    Ok(ClassificationReport {
        p,
        q,
        pitch,
        r,
        delta_theta: delta_theta(r, pitch)?,
        delta_phi: delta_phi(r, pitch)?,
        period,
        closure_error,
        rotation_number,
        winding_number,
        winding_raw,
        min_radius,
        passes_origin,
        alpha: a,
        regime,
        symmetry_error,
    })
}

/// `(h, p, q)` triples of closed curves shown as reference figures.
pub const FIGURE_TRIPLES: [(f64, u64, u64); 14] = [
    (1.0, 4, 3),
    (1.0, 6, 5),
    (1.0, 11, 8),
    (1.0, 19, 15),
    (0.5, 2, 1),
    (0.5, 3, 2),
    (0.5, 5, 3),
    (0.5, 11, 6),
    (0.2, 15, 4),
    (0.2, 13, 5),
    (2.0, 11, 10),
    (2.0, 29, 26),
    (5.0, 52, 51),
    (5.0, 55, 54),
];
