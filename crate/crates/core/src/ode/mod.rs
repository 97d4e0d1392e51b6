//! Arc-length integration of generating curves.
//!
//! A curvature law `k = law(tau, nu)` determines a curve through the system
//!
//! ```text
//! tau'   = 1 + nu k
//! nu'    = -tau k
//! theta' = k
//! ```
//!
//! with `X = (tau + i nu) e^{i theta}`.

mod dopri;

pub use dopri::{integrate, DenseSolution, DenseStep, StepControl, Trajectory};

use crate::error::{Error, Result};
use crate::geometry::{reconstruct_point, CurveState, Pitch, PlanePoint};
use crate::law::CurvatureLaw;
use crate::scalar::{wrap_angle, Real};

/// Starting point and tangent angle of a curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialData<T> {
    pub z0: PlanePoint<T>,
    /// Tangent angle in `[0, 2π)`.
    pub theta0: T,
}

impl<T: Real> InitialData<T> {
    /// `theta0` is wrapped into `[0, 2π)`.
    pub fn new(z0: PlanePoint<T>, theta0: T) -> Self {
        Self {
            z0,
            theta0: wrap_angle(theta0),
        }
    }

    /// Initial support functions, `tau + i nu = e^{-i theta0} z0`.
    pub fn tau_nu(&self) -> (T, T) {
        let p = self.z0.rotated(-self.theta0);
        (p.x, p.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_step: T,
    pub min_step: T,
    pub max_steps: usize,
    pub s_min: T,
    pub s_max: T,
}

impl<T: Real> Default for IntegratorConfig<T> {
    fn default() -> Self {
        let c = StepControl::default();
        Self {
            abs_tol: c.abs_tol,
            rel_tol: c.rel_tol,
            max_step: c.max_step,
            min_step: c.min_step,
            max_steps: c.max_steps,
            s_min: T::lit(-10.0),
            s_max: T::lit(10.0),
        }
    }
}

impl<T: Real> IntegratorConfig<T> {
    pub fn window(s_min: T, s_max: T) -> Self {
        Self {
            s_min,
            s_max,
            ..Default::default()
        }
    }

    pub fn with_tol(mut self, tol: T) -> Self {
        self.abs_tol = tol;
        self.rel_tol = tol;
        self
    }

    pub fn with_max_step(mut self, max_step: T) -> Self {
        self.max_step = max_step;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > T::zero() && self.rel_tol > T::zero()) {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        if !(self.max_step > T::zero()) || !(self.min_step > T::zero()) {
            return Err(Error::InvalidInput("step bounds must be positive".into()));
        }
        if !(self.s_min <= T::zero() && T::zero() <= self.s_max && self.s_min < self.s_max) {
            return Err(Error::InvalidInput(format!(
                "integration window [{}, {}] must contain 0",
                self.s_min, self.s_max
            )));
        }
        Ok(())
    }

    pub fn step_control(&self) -> StepControl<T> {
        StepControl {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            max_step: self.max_step,
            min_step: self.min_step,
            max_steps: self.max_steps,
        }
    }
}

/// Ordered samples of a generating curve together with the law and pitch
/// that produced them.
#[derive(Debug, Clone)]
pub struct GeneratingCurve<T> {
    states: Vec<CurveState<T>>,
    pitch: Option<Pitch<T>>,
    law: CurvatureLaw<T>,
    tolerance: T,
    origin: usize,
    dense: Option<DenseSolution<T, 3>>,
}

impl<T: Real> GeneratingCurve<T> {
    /// Wraps closed-form samples. States must be sorted by `s`.
    pub fn from_states(
        states: Vec<CurveState<T>>,
        pitch: Option<Pitch<T>>,
        law: CurvatureLaw<T>,
        tolerance: T,
    ) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::EmptyCurve);
        }
        if states.windows(2).any(|w| !(w[1].s > w[0].s)) {
            return Err(Error::InvalidInput("curve samples must be strictly increasing in s".into()));
        }
        let origin = states
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.s.abs().partial_cmp(&b.1.s.abs()).unwrap())
            .map(|(i, _)| i)
            .unwrap_or(0);
        Ok(Self {
            states,
            pitch,
            law,
            tolerance,
            origin,
            dense: None,
        })
    }

    pub(crate) fn from_parts(
        states: Vec<CurveState<T>>,
        pitch: Option<Pitch<T>>,
        law: CurvatureLaw<T>,
        tolerance: T,
        origin: usize,
        dense: Option<DenseSolution<T, 3>>,
    ) -> Self {
        Self {
            states,
            pitch,
            law,
            tolerance,
            origin,
            dense,
        }
    }

    pub(crate) fn from_trajectory(
        traj: Trajectory<T, 3>,
        pitch: Option<Pitch<T>>,
        law: CurvatureLaw<T>,
        tolerance: T,
    ) -> Self {
        let (s, y, origin, dense) = traj.into_parts();
        let states = s
            .iter()
            .zip(&y)
            .map(|(&s, y)| CurveState {
                s,
                tau: y[0],
                nu: y[1],
                theta: y[2],
                k: law.curvature(y[0], y[1]),
            })
            .collect();
        Self {
            states,
            pitch,
            law,
            tolerance,
            origin,
            dense: Some(dense),
        }
    }

    pub fn states(&self) -> &[CurveState<T>] {
        &self.states
    }

    pub fn pitch(&self) -> Option<Pitch<T>> {
        self.pitch
    }

    pub fn law(&self) -> &CurvatureLaw<T> {
        &self.law
    }

    pub fn tolerance(&self) -> T {
        self.tolerance
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Sample where integration started (closest to `s = 0` for closed forms).
    pub fn origin_state(&self) -> &CurveState<T> {
        &self.states[self.origin]
    }

    pub fn s_range(&self) -> (T, T) {
        (self.states[0].s, self.states[self.states.len() - 1].s)
    }

    pub fn points(&self) -> Vec<PlanePoint<T>> {
        self.states.iter().map(reconstruct_point).collect()
    }

    pub fn has_dense_output(&self) -> bool {
        self.dense.is_some()
    }

    /// State at arbitrary `s` inside the sampled range.
    ///
    /// Uses the integrator's dense output when available; closed-form curves
    /// fall back to cubic Hermite interpolation with derivatives from the law.
    pub fn state_at(&self, s: T) -> Option<CurveState<T>> {
        let (lo, hi) = self.s_range();
        if s < lo || s > hi {
            return None;
        }
        let y = match &self.dense {
            Some(d) => d.eval(s)?,
            None => self.hermite(s),
        };
        Some(CurveState {
            s,
            tau: y[0],
            nu: y[1],
            theta: y[2],
            k: self.law.curvature(y[0], y[1]),
        })
    }

    fn hermite(&self, s: T) -> [T; 3] {
        let i = self.states.partition_point(|st| st.s < s);
        if i < self.states.len() && self.states[i].s == s {
            let st = &self.states[i];
            return [st.tau, st.nu, st.theta];
        }
        let i = i.clamp(1, self.states.len() - 1);
        let (a, b) = (&self.states[i - 1], &self.states[i]);
        let dh = b.s - a.s;
        let t = (s - a.s) / dh;
        let (t2, t3) = (t * t, t * t * t);
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let h00 = two * t3 - three * t2 + T::one();
        let h10 = t3 - two * t2 + t;
        let h01 = -two * t3 + three * t2;
        let h11 = t3 - t2;
        let da = self.law.rhs(a.tau, a.nu);
        let db = self.law.rhs(b.tau, b.nu);
        let ya = [a.tau, a.nu, a.theta];
        let yb = [b.tau, b.nu, b.theta];
        std::array::from_fn(|j| h00 * ya[j] + h10 * dh * da[j] + h01 * yb[j] + h11 * dh * db[j])
    }

    /// Midpoint check of the dense output: for every step, the interpolated
    /// state at the step midpoint is compared with a reference obtained by
    /// 16 classical Runge-Kutta substeps from the step start. Returns the
    /// largest deviation divided by the step tolerance `abs_tol + rel_tol |y|`,
    /// or `None` for curves without dense output.
    pub fn ode_residual(&self) -> Option<T> {
        let dense = self.dense.as_ref()?;
        let half = T::lit(0.5);
        let tol = self.tolerance;
        let f = |y: &[T; 3]| self.law.rhs(y[0], y[1]);
        let mut worst = T::zero();
        for st in dense.steps() {
            let (lo, hi) = (st.lo(), st.hi());
            let m = (lo + hi) * half;
            let mut y = st.eval(lo);
            let n = 16;
            let dh = (m - lo) / T::lit(n as f64);
            for _ in 0..n {
                y = rk4_step(&f, &y, dh);
            }
            let d = st.eval(m);
            for i in 0..3 {
                let scale = tol * (T::one() + y[i].abs());
                worst = worst.max((d[i] - y[i]).abs() / scale);
            }
        }
        Some(worst)
    }

    /// Zero crossings of `event(state)` along the curve.
    pub fn events<F>(&self, event: F) -> Vec<CurveState<T>>
    where
        F: Fn(&CurveState<T>) -> T,
    {
        let samples: Vec<(T, CurveState<T>)> = self.states.iter().map(|st| (st.s, *st)).collect();
        locate_crossings(&samples, |s| self.state_at(s).expect("inside range"), |st| event(st), event_tol())
            .into_iter()
            .map(|(_, st)| st)
            .collect()
    }

    /// Largest deviation of the unit-speed and law-consistency invariants
    /// over the samples: `(max ||X'| - 1|, max |k - law(tau, nu)|)`.
    ///
    /// `X'` is estimated by differentiating the reconstruction along the
    /// interpolant with a central difference.
    pub fn invariant_defects(&self) -> (T, T) {
        let d = T::lit(1e-5);
        let (lo, hi) = self.s_range();
        let mut speed = T::zero();
        let mut law = T::zero();
        for st in &self.states {
            law = law.max((st.k - self.law.curvature(st.tau, st.nu)).abs());
            let (a, b) = ((st.s - d).max(lo), (st.s + d).min(hi));
            if b - a <= T::zero() {
                continue;
            }
            let pa = self.state_at(a).unwrap().point();
            let pb = self.state_at(b).unwrap().point();
            speed = speed.max((pa.distance(&pb) / (b - a) - T::one()).abs());
        }
        (speed, law)
    }
}

fn rk4_step<T: Real, F: Fn(&[T; 3]) -> [T; 3]>(f: &F, y: &[T; 3], h: T) -> [T; 3] {
    let half = T::lit(0.5);
    let add = |a: &[T; 3], b: &[T; 3], c: T| -> [T; 3] { std::array::from_fn(|i| a[i] + b[i] * c) };
    let k1 = f(y);
    let k2 = f(&add(y, &k1, h * half));
    let k3 = f(&add(y, &k2, h * half));
    let k4 = f(&add(y, &k3, h));
    let sixth = h / T::lit(6.0);
    std::array::from_fn(|i| y[i] + sixth * (k1[i] + T::lit(2.0) * (k2[i] + k3[i]) + k4[i]))
}

fn event_tol<T: Real>() -> T {
    T::lit(1e-10)
}

/// Finds sign changes of `g` between consecutive samples and refines each by
/// bisection on `eval`. A sample where `g` vanishes exactly counts once.
fn locate_crossings<T, S, E, G>(samples: &[(T, S)], eval: E, g: G, tol: T) -> Vec<(T, S)>
where
    T: Real,
    S: Copy,
    E: Fn(T) -> S,
    G: Fn(&S) -> T,
{
    let mut out = Vec::new();
    if samples.is_empty() {
        return out;
    }
    if g(&samples[0].1) == T::zero() {
        out.push(samples[0]);
    }
    // Subdivide each sample interval so that nearby double crossings inside a
    // long step are still seen.
    const SUB: usize = 4;
    for w in samples.windows(2) {
        let (s0, s1) = (w[0].0, w[1].0);
        let mut prev_s = s0;
        let mut prev_g = g(&w[0].1);
        for j in 1..=SUB {
            let (cur_s, cur) = if j == SUB {
                (s1, w[1].1)
            } else {
                let s = s0 + (s1 - s0) * T::lit(j as f64 / SUB as f64);
                (s, eval(s))
            };
            let cur_g = g(&cur);
            if prev_g != T::zero() {
                if cur_g == T::zero() {
                    out.push((cur_s, cur));
                } else if (prev_g < T::zero()) != (cur_g < T::zero()) {
                    let (mut a, mut b) = (prev_s, cur_s);
                    let mut ga = prev_g;
                    while (b - a).abs() > tol {
                        let m = a + (b - a) * T::lit(0.5);
                        if m == a || m == b {
                            break;
                        }
                        let gm = g(&eval(m));
                        if gm == T::zero() {
                            a = m;
                            b = m;
                            break;
                        }
                        if (gm < T::zero()) == (ga < T::zero()) {
                            a = m;
                            ga = gm;
                        } else {
                            b = m;
                        }
                    }
                    let m = a + (b - a) * T::lit(0.5);
                    out.push((m, eval(m)));
                }
            }
            prev_s = cur_s;
            prev_g = cur_g;
        }
    }
    out
}

/// Event located on a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event<T, const N: usize> {
    pub s: T,
    pub state: [T; N],
}

/// Zero crossings of `event(s, state)` along a trajectory, located to
/// `1e-10` in `s` by bisection on the dense output.
pub fn detect_events<T, const N: usize, F>(traj: &Trajectory<T, N>, event: F) -> Vec<Event<T, N>>
where
    T: Real,
    F: Fn(T, &[T; N]) -> T,
{
    let samples: Vec<(T, (T, [T; N]))> = traj.s.iter().zip(&traj.y).map(|(&s, &y)| (s, (s, y))).collect();
    locate_crossings(
        &samples,
        |s| (s, traj.eval(s).expect("inside range")),
        |(s, y)| event(*s, y),
        event_tol(),
    )
    .into_iter()
    .map(|(s, (_, y))| Event { s, state: y })
    .collect()
}

/// Sources of `(tau, nu)` samples for conservation audits.
pub trait TauNuSamples<T> {
    fn tau_nu(&self) -> Vec<(T, T)>;
    fn initial_tau_nu(&self) -> (T, T);
}

impl<T: Real, const N: usize> TauNuSamples<T> for Trajectory<T, N> {
    fn tau_nu(&self) -> Vec<(T, T)> {
        self.y.iter().map(|y| (y[0], y[1])).collect()
    }
    fn initial_tau_nu(&self) -> (T, T) {
        let y = self.initial();
        (y[0], y[1])
    }
}

impl<T: Real> TauNuSamples<T> for GeneratingCurve<T> {
    fn tau_nu(&self) -> Vec<(T, T)> {
        self.states.iter().map(|s| (s.tau, s.nu)).collect()
    }
    fn initial_tau_nu(&self) -> (T, T) {
        let s = self.origin_state();
        (s.tau, s.nu)
    }
}

/// `max |Q(s) - Q(0)|` over the samples, where `Q(0)` is the value at the
/// initial condition.
pub fn conserved_drift<T, S, Q>(track: &S, quantity: Q) -> T
where
    T: Real,
    S: TauNuSamples<T> + ?Sized,
    Q: Fn(T, T) -> T,
{
    let (t0, n0) = track.initial_tau_nu();
    let q0 = quantity(t0, n0);
    track
        .tau_nu()
        .into_iter()
        .map(|(t, n)| (quantity(t, n) - q0).abs())
        .fold(T::zero(), T::max)
}

/// Integrates the curve with `k = law(tau, nu)` through `init.z0` with
/// tangent angle `init.theta0` at `s = 0`.
pub fn integrate_curve<T: Real>(
    law: &CurvatureLaw<T>,
    init: &InitialData<T>,
    config: &IntegratorConfig<T>,
) -> Result<GeneratingCurve<T>> {
    config.validate()?;
    let (tau0, nu0) = init.tau_nu();
    let law_c = law.clone();
    let law_g = law.clone();
    let traj = integrate(
        move |_, y: &[T; 3]| law_c.rhs(y[0], y[1]),
        move |y: &[T; 3]| law_g.in_domain(y[0], y[1]),
        T::zero(),
        [tau0, nu0, init.theta0],
        config.s_min,
        config.s_max,
        &config.step_control(),
    )?;
    Ok(GeneratingCurve::from_trajectory(
        traj,
        law.pitch(),
        law.clone(),
        config.abs_tol.max(config.rel_tol),
    ))
}

/// Integrates only the `(tau, nu)` phase-plane system.
pub fn integrate_tau_nu<T: Real>(
    law: &CurvatureLaw<T>,
    tau0: T,
    nu0: T,
    config: &IntegratorConfig<T>,
) -> Result<Trajectory<T, 2>> {
    config.validate()?;
    let law_c = law.clone();
    let law_g = law.clone();
    integrate(
        move |_, y: &[T; 2]| {
            let k = law_c.curvature(y[0], y[1]);
            [T::one() + y[1] * k, -y[0] * k]
        },
        move |y: &[T; 2]| law_g.in_domain(y[0], y[1]),
        T::zero(),
        [tau0, nu0],
        config.s_min,
        config.s_max,
        &config.step_control(),
    )
}

/// Resamples a curve on the uniform grid `s_min + i ds`,
/// `i = 0..=floor((s_max - s_min) / ds)`.
pub fn resample_arclength<T: Real>(curve: &GeneratingCurve<T>, ds: T) -> Result<GeneratingCurve<T>> {
    if !(ds > T::zero()) {
        return Err(Error::InvalidInput(format!("resampling step must be positive, got {}", ds)));
    }
    let (lo, hi) = curve.s_range();
    let n = ((hi - lo) / ds + T::lit(1e-9)).floor().to_usize().unwrap_or(0);
    let mut states = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let s = (lo + ds * T::lit(i as f64)).min(hi);
        states.push(curve.state_at(s).ok_or(Error::EmptyCurve)?);
    }
    // Keep the original start as the origin when it lies on the new grid.
    let mut out = GeneratingCurve {
        states,
        pitch: curve.pitch,
        law: curve.law.clone(),
        tolerance: curve.tolerance,
        origin: 0,
        dense: curve.dense.clone(),
    };
    let s0 = curve.origin_state().s;
    out.origin = out
        .states
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1.s - s0).abs().partial_cmp(&(b.1.s - s0).abs()).unwrap())
        .map(|(i, _)| i)
        .unwrap_or(0);
    Ok(out)
}

/// Resamples a curve at `n` equally spaced arc lengths spanning `s_range`,
/// which must lie inside the curve.
pub fn resample_uniform<T: Real>(curve: &GeneratingCurve<T>, s_range: (T, T), n: usize) -> Result<GeneratingCurve<T>> {
    let (lo, hi) = s_range;
    if n < 2 || !(lo < hi) {
        return Err(Error::InvalidInput(format!(
            "need s_min < s_max and at least two samples, got [{}, {}] with {}",
            lo, hi, n
        )));
    }
    let (clo, chi) = curve.s_range();
    if lo < clo || hi > chi {
        return Err(Error::CurveTooShort {
            s_min: clo.as_f64(),
            s_max: chi.as_f64(),
            required: lo.abs().max(hi.abs()).as_f64(),
        });
    }
    let step = (hi - lo) / T::lit((n - 1) as f64);
    let states = (0..n)
        .map(|i| {
            let s = if i == n - 1 { hi } else { lo + step * T::lit(i as f64) };
            curve.state_at(s).ok_or(Error::EmptyCurve)
        })
        .collect::<Result<Vec<_>>>()?;
    GeneratingCurve::from_states(states, curve.pitch, curve.law.clone(), curve.tolerance)
}
