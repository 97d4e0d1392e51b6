//! Helicoidal solitons of mean curvature flow that rotate with unit speed
//! (equivalently translate along the axis with speed `h`).

use std::collections::HashMap;

use rayon::prelude::*;

use crate::cmc::winding_along;
use crate::error::{Error, Result};
use crate::geometry::{growth_direction, reconstruct_point, CurveState, Pitch, PlanePoint};
use crate::law::{CurvatureLaw, DEFAULT_EXCLUSION_RADIUS};
use crate::ode::{integrate_curve, GeneratingCurve, InitialData, IntegratorConfig};
use crate::scalar::Real;

/// `k = (tau (tau^2 + h^2) - nu) / (r^2 + h^2)`; `k = tau` at `h = ∞`.
pub fn rotating_law<T: Real>(pitch: Pitch<T>) -> CurvatureLaw<T> {
    CurvatureLaw::rotating(pitch)
}

/// Start at the point `iA`, where `tau = 0`, with tangent angle 0.
pub fn rotating_initial_data<T: Real>(a: T) -> InitialData<T> {
    InitialData::new(PlanePoint::new(T::zero(), a.abs()), T::zero())
}

/// Curve with `(tau, nu)(0) = (0, |A|)` over `s ∈ [-L, L]`.
pub fn generate_rotating_curve<T: Real>(pitch: Pitch<T>, a: T, arc_length: T) -> Result<GeneratingCurve<T>> {
    if !(arc_length > T::zero()) {
        return Err(Error::InvalidInput(format!("arc length must be positive, got {}", arc_length)));
    }
    generate_rotating_curve_with(pitch, a, &IntegratorConfig::window(-arc_length, arc_length))
}

pub fn generate_rotating_curve_with<T: Real>(
    pitch: Pitch<T>,
    a: T,
    config: &IntegratorConfig<T>,
) -> Result<GeneratingCurve<T>> {
    integrate_curve(&rotating_law(pitch), &rotating_initial_data(a), config)
}

/// Finite-window stand-ins for the limits along the two arms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonThresholds<T> {
    /// `|nu|` at both ends must exceed this.
    pub nu: T,
    /// `|k|` at both ends must stay below this.
    pub k: T,
    /// Bound on `|rT/X ∓ i|` at the ends.
    pub angle: T,
    /// Tangent turning along each arm must exceed this.
    pub theta: T,
    /// Minimum `|s|` the curve has to cover on both sides.
    pub min_extent: T,
}

impl<T: Real> Default for SolitonThresholds<T> {
    fn default() -> Self {
        Self {
            nu: T::lit(10.0),
            k: T::lit(0.05),
            angle: T::lit(0.1),
            theta: T::lit(4.0) * T::PI(),
            min_extent: T::lit(20.0),
        }
    }
}

/// Raw measurements and pass/fail flags for a rotating soliton curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolitonReport<T> {
    pub tau_zeros: Vec<T>,
    pub k_zeros: Vec<T>,
    /// `s` of each local minimum of `r`.
    pub r_minima: Vec<T>,
    /// `(s, r)` at the smallest sampled radius.
    pub r_min: (T, T),
    /// `tau` at `(s_min, s_max)`.
    pub tau_ends: (T, T),
    /// `tau'` at the ends; small when `tau` has settled.
    pub tau_slope_ends: (T, T),
    pub nu_ends: (T, T),
    pub k_ends: (T, T),
    /// `|rT/X + i|` at `s_min` and `|rT/X - i|` at `s_max`.
    pub angle_defect: (T, T),
    /// Tangent turning from the radius minimum to each end.
    pub theta_growth: (T, T),
    /// Turning of the polar angle of `X` from the radius minimum to each end.
    pub phi_growth: (T, T),
    pub ode_residual: T,
    pub thresholds: SolitonThresholds<T>,
}

impl<T: Real> SolitonReport<T> {
    pub fn one_tau_zero(&self) -> bool {
        self.tau_zeros.len() == 1
    }

    pub fn one_k_zero(&self) -> bool {
        self.k_zeros.len() == 1
    }

    pub fn unique_r_min(&self) -> bool {
        self.r_minima.len() == 1
    }

    pub fn nu_diverges(&self) -> bool {
        self.nu_ends.0.abs() > self.thresholds.nu && self.nu_ends.1.abs() > self.thresholds.nu
    }

    /// `k → 0-` as `s → -∞` and `k → 0+` as `s → +∞`.
    pub fn k_vanishes(&self) -> bool {
        let (lo, hi) = self.k_ends;
        lo < T::zero() && hi > T::zero() && lo.abs() < self.thresholds.k && hi < self.thresholds.k
    }

    pub fn angle_settles(&self) -> bool {
        self.angle_defect.0 < self.thresholds.angle && self.angle_defect.1 < self.thresholds.angle
    }

    pub fn theta_grows(&self) -> bool {
        self.theta_growth.0 > self.thresholds.theta && self.theta_growth.1 > self.thresholds.theta
    }

    pub fn passes(&self) -> bool {
        self.one_tau_zero()
            && self.one_k_zero()
            && self.unique_r_min()
            && self.nu_diverges()
            && self.k_vanishes()
            && self.angle_settles()
            && self.theta_grows()
    }

    /// Names of the checks that fail.
    pub fn failures(&self) -> Vec<&'static str> {
        let checks: [(&'static str, bool); 7] = [
            ("tau-zero", self.one_tau_zero()),
            ("k-zero", self.one_k_zero()),
            ("r-minimum", self.unique_r_min()),
            ("nu-limit", self.nu_diverges()),
            ("k-limit", self.k_vanishes()),
            ("angle-limit", self.angle_settles()),
            ("theta-growth", self.theta_grows()),
        ];
        checks.iter().filter(|c| !c.1).map(|c| c.0).collect()
    }
}

pub fn verify_soliton_structure<T: Real>(curve: &GeneratingCurve<T>) -> Result<SolitonReport<T>> {
    verify_soliton_structure_with(curve, SolitonThresholds::default())
}

pub fn verify_soliton_structure_with<T: Real>(
    curve: &GeneratingCurve<T>,
    thresholds: SolitonThresholds<T>,
) -> Result<SolitonReport<T>> {
    if curve.is_empty() {
        return Err(Error::EmptyCurve);
    }
    let (s_min, s_max) = curve.s_range();
    if s_min > -thresholds.min_extent || s_max < thresholds.min_extent {
        return Err(Error::CurveTooShort {
            s_min: s_min.as_f64(),
            s_max: s_max.as_f64(),
            required: thresholds.min_extent.as_f64(),
        });
    }
    let states = curve.states();
    let tau_events = curve.events(|st| st.tau);
    let tau_zeros: Vec<T> = tau_events.iter().map(|e| e.s).collect();
    let k_zeros: Vec<T> = curve.events(|st| st.k).iter().map(|e| e.s).collect();
    // (r^2)' = 2 tau, so minima of r are the zeros where tau turns positive.
    let r_minima: Vec<T> = tau_events
        .iter()
        .filter(|e| T::one() + e.nu * e.k > T::zero())
        .map(|e| e.s)
        .collect();
    let mut r_min = (states[0].s, states[0].r());
    for st in states {
        if st.r() < r_min.1 {
            r_min = (st.s, st.r());
        }
    }
    for e in &tau_events {
        if e.r() <= r_min.1 {
            r_min = (e.s, e.r());
        }
    }

    let first = states[0];
    let last = states[states.len() - 1];
    let slope = |st: &CurveState<T>| T::one() + st.nu * st.k;
    let defect = |st: &CurveState<T>, sign: T| (growth_direction(st) - PlanePoint::new(T::zero(), sign)).norm();
    let centre = curve.state_at(r_min.0).unwrap();
    let x_at = |s: T| reconstruct_point(&curve.state_at(s).unwrap());
    let n_lo = ((r_min.0 - s_min) * T::lit(100.0)).to_usize().unwrap_or(2).max(2);
    let n_hi = ((s_max - r_min.0) * T::lit(100.0)).to_usize().unwrap_or(2).max(2);
    let phi_lo = winding_along(x_at, r_min.0, s_min, n_lo) * T::TAU();
    let phi_hi = winding_along(x_at, r_min.0, s_max, n_hi) * T::TAU();

    Ok(SolitonReport {
        tau_zeros,
        k_zeros,
        r_minima,
        r_min,
        tau_ends: (first.tau, last.tau),
        tau_slope_ends: (slope(&first), slope(&last)),
        nu_ends: (first.nu, last.nu),
        k_ends: (first.k, last.k),
        angle_defect: (defect(&first, -T::one()), defect(&last, T::one())),
        theta_growth: ((centre.theta - first.theta).abs(), (last.theta - centre.theta).abs()),
        phi_growth: (phi_lo.abs(), phi_hi.abs()),
        ode_residual: curve.ode_residual().unwrap_or(T::zero()),
        thresholds,
    })
}

/// Branch data of the `h = 0` trajectories
/// `tau^3 + tau nu^2 + 2 nu = 2 a tau`.
#[derive(Debug, Clone, PartialEq)]
pub struct H0Trajectory<T> {
    pub a: T,
    /// Bounded branch through the origin, `nu = (2a tau - tau^3) / (1 + sqrt(D))`
    /// with `D = 1 + 2a tau^2 - tau^4`, ordered by `tau`.
    pub branch: Vec<(T, T)>,
    /// The other root `nu = (-1 - sqrt(D)) / tau`, which joins the branch at
    /// `tau = ±tau_max` and escapes along the `nu` axis; truncated at
    /// `|nu| <= nu_cap`. Points with `tau < 0` come first.
    pub outer: Vec<(T, T)>,
    /// `sqrt(a + sqrt(a^2 + 1))`, where `D` vanishes.
    pub tau_max: T,
}

impl<T: Real> H0Trajectory<T> {
    /// `tau^3 + tau nu^2 + 2 nu - 2 a tau`.
    pub fn cubic(&self, tau: T, nu: T) -> T {
        cubic(self.a, tau, nu)
    }

    /// Largest cubic residual over all samples.
    pub fn max_residual(&self) -> T {
        self.branch
            .iter()
            .chain(&self.outer)
            .map(|&(t, n)| self.cubic(t, n).abs())
            .fold(T::zero(), T::max)
    }
}

fn cubic<T: Real>(a: T, tau: T, nu: T) -> T {
    tau * tau * tau + tau * nu * nu + T::lit(2.0) * nu - T::lit(2.0) * a * tau
}

pub fn h0_trajectory<T: Real>(a: T) -> H0Trajectory<T> {
    h0_trajectory_sampled(a, 401, T::lit(10.0))
}

/// Samples the level set with `n` points per branch; `tau` is spaced as
/// `tau_max sin(t)` so that samples cluster at the fold.
pub fn h0_trajectory_sampled<T: Real>(a: T, n: usize, nu_cap: T) -> H0Trajectory<T> {
    let n = n.max(3);
    let tau_max = (a + (a * a + T::one()).sqrt()).sqrt();
    let disc = |tau: T| (T::one() + T::lit(2.0) * a * tau * tau - tau.powi(4)).max(T::zero()).sqrt();
    let taus: Vec<T> = (0..n)
        .map(|i| {
            let t = -T::FRAC_PI_2() + T::PI() * T::lit(i as f64 / (n - 1) as f64);
            tau_max * t.sin()
        })
        .collect();
    let branch = taus
        .iter()
        .map(|&tau| (tau, (T::lit(2.0) * a * tau - tau * tau * tau) / (T::one() + disc(tau))))
        .collect();
    let outer = taus
        .iter()
        .filter(|&&tau| tau != T::zero())
        .map(|&tau| (tau, (-T::one() - disc(tau)) / tau))
        .filter(|&(_, nu)| nu.abs() <= nu_cap)
        .collect();
    H0Trajectory { a, branch, outer, tau_max }
}

/// `h = 0` limit law `k = (tau^3 - nu) / r^2` with the default excluded disc.
pub fn rotating_h0_law<T: Real>() -> CurvatureLaw<T> {
    CurvatureLaw::rotating_h0(T::lit(DEFAULT_EXCLUSION_RADIUS))
}

/// First proper crossing between two non-adjacent segments of a polyline,
/// as `(i, j, point)` with `i < j` segment indices.
pub fn find_self_intersection<T: Real>(points: &[PlanePoint<T>]) -> Option<(usize, usize, PlanePoint<T>)> {
    let n = points.len();
    if n < 4 {
        return None;
    }
    let seg_len = points
        .windows(2)
        .map(|w| w[0].distance(&w[1]))
        .fold(T::zero(), T::max);
    let cell = (seg_len * T::lit(2.0)).max(T::lit(1e-9));
    let key = |v: T| (v / cell).floor().to_i64().unwrap_or(i64::MAX);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for i in 0..n - 1 {
        let (a, b) = (points[i], points[i + 1]);
        for gx in key(a.x.min(b.x))..=key(a.x.max(b.x)) {
            for gy in key(a.y.min(b.y))..=key(a.y.max(b.y)) {
                grid.entry((gx, gy)).or_default().push(i);
            }
        }
    }
    let mut best: Option<(usize, usize, PlanePoint<T>)> = None;
    for bucket in grid.values() {
        for (x, &i) in bucket.iter().enumerate() {
            for &j in &bucket[x + 1..] {
                let (i, j) = if i < j { (i, j) } else { (j, i) };
                if j <= i + 1 {
                    continue;
                }
                if let Some(p) = segment_crossing(points[i], points[i + 1], points[j], points[j + 1]) {
                    if best.is_none_or(|b| (i, j) < (b.0, b.1)) {
                        best = Some((i, j, p));
                    }
                }
            }
        }
    }
    best
}

fn segment_crossing<T: Real>(
    a: PlanePoint<T>,
    b: PlanePoint<T>,
    c: PlanePoint<T>,
    d: PlanePoint<T>,
) -> Option<PlanePoint<T>> {
    let cross = |u: PlanePoint<T>, v: PlanePoint<T>| u.x * v.y - u.y * v.x;
    let r = b - a;
    let s = d - c;
    let denom = cross(r, s);
    if denom == T::zero() {
        return None;
    }
    let t = cross(c - a, s) / denom;
    let u = cross(c - a, r) / denom;
    let (z, o) = (T::zero(), T::one());
    (t >= z && t < o && u >= z && u < o).then(|| a + r * t)
}

/// Self-intersection of a generating curve after resampling at spacing `ds`.
pub fn curve_self_intersection<T: Real>(curve: &GeneratingCurve<T>, ds: T) -> Result<Option<(T, T, PlanePoint<T>)>> {
    let fine = crate::ode::resample_arclength(curve, ds)?;
    let pts = fine.points();
    Ok(find_self_intersection(&pts).map(|(i, j, p)| (fine.states()[i].s, fine.states()[j].s, p)))
}

/// Embeddedness check at the default resolution `ds = 1e-3`.
pub fn is_embedded<T: Real>(curve: &GeneratingCurve<T>) -> Result<bool> {
    Ok(curve_self_intersection(curve, T::lit(1e-3))?.is_none())
}

/// One row of a [`ConvergenceTable`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow<T> {
    pub h: T,
    /// `sup |(tau, nu) - (0, A)|` over the interval.
    pub c0: T,
    /// `sup |d^j/ds^j (tau, nu)|` for `j = 1..=deriv_order`.
    pub derivatives: Vec<T>,
    /// `sup |X_h(s) - iA e^{-is/A}|`.
    pub curve_c0: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable<T> {
    pub a: T,
    pub interval: (T, T),
    pub rows: Vec<ConvergenceRow<T>>,
    /// Least-squares slope of `log c0` against `log h`.
    pub slope: T,
    /// The same for each derivative order.
    pub derivative_slopes: Vec<T>,
    pub curve_slope: T,
}

impl<T: Real> ConvergenceTable<T> {
    pub fn strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].c0 < w[0].c0)
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope<T: Real>(xs: &[T], ys: &[T]) -> T {
    let n = T::lit(xs.len() as f64);
    let lx: Vec<T> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<T> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().fold(T::zero(), |a, &b| a + b) / n;
    let my = ly.iter().fold(T::zero(), |a, &b| a + b) / n;
    let (mut sxy, mut sxx) = (T::zero(), T::zero());
    for (x, y) in lx.iter().zip(&ly) {
        sxy = sxy + (*x - mx) * (*y - my);
        sxx = sxx + (*x - mx) * (*x - mx);
    }
    sxy / sxx
}

/// Largest derivative order supported by [`convergence_experiment`].
pub const MAX_DERIV_ORDER: usize = 3;

/// Distances of the rotating curves with `(tau, nu)(0) = (0, A)` to the
/// stationary point `(0, A)` of the `h = 0` limit, for each `h`.
pub fn convergence_experiment<T: Real>(
    a: T,
    h_list: &[T],
    interval: (T, T),
    deriv_order: usize,
) -> Result<ConvergenceTable<T>> {
    if a == T::zero() || !a.is_finite() {
        return Err(Error::InvalidInput("A must be non-zero".into()));
    }
    if h_list.len() < 2 {
        return Err(Error::InvalidInput("at least two values of h are required".into()));
    }
    if h_list.iter().any(|&h| !(h > T::zero())) || h_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidInput("h values must be positive and strictly decreasing".into()));
    }
    if deriv_order > MAX_DERIV_ORDER {
        return Err(Error::InvalidInput(format!("derivative order is limited to {}", MAX_DERIV_ORDER)));
    }
    let config = IntegratorConfig::window(interval.0, interval.1).with_tol(T::lit(1e-12));
    config.validate()?;
    let rows = h_list
        .par_iter()
        .map(|&h| convergence_row(a, h, &config, deriv_order))
        .collect::<Result<Vec<_>>>()?;
    let hs: Vec<T> = rows.iter().map(|r| r.h).collect();
    let slope = loglog_slope(&hs, &rows.iter().map(|r| r.c0).collect::<Vec<_>>());
    let derivative_slopes = (0..deriv_order)
        .map(|j| loglog_slope(&hs, &rows.iter().map(|r| r.derivatives[j]).collect::<Vec<_>>()))
        .collect();
    let curve_slope = loglog_slope(&hs, &rows.iter().map(|r| r.curve_c0).collect::<Vec<_>>());
    Ok(ConvergenceTable {
        a,
        interval,
        rows,
        slope,
        derivative_slopes,
        curve_slope,
    })
}

fn convergence_row<T: Real>(a: T, h: T, config: &IntegratorConfig<T>, deriv_order: usize) -> Result<ConvergenceRow<T>> {
    let pitch = Pitch::from_h(h)?;
    let law = rotating_law(pitch);
    let init = InitialData::new(PlanePoint::new(T::zero(), a), T::zero());
    let curve = integrate_curve(&law, &init, config)?;
    let (lo, hi) = curve.s_range();
    let rhs = |st: &CurveState<T>| {
        let f = law.rhs(st.tau, st.nu);
        [f[0], f[1]]
    };
    let delta = T::lit(1e-3);
    // Evaluation grid: every accepted step plus a uniform grid.
    let mut grid: Vec<T> = curve.states().iter().map(|s| s.s).collect();
    let m = 2000;
    grid.extend((0..=m).map(|i| lo + (hi - lo) * T::lit(i as f64 / m as f64)));
    let mut c0 = T::zero();
    let mut curve_c0 = T::zero();
    let mut derivatives = vec![T::zero(); deriv_order];
    for &s in &grid {
        let st = curve.state_at(s).unwrap();
        c0 = c0.max(PlanePoint::new(st.tau, st.nu - a).norm());
        let circle = PlanePoint::new(T::zero(), a).rotated(-s / a);
        curve_c0 = curve_c0.max(reconstruct_point(&st).distance(&circle));
        if deriv_order == 0 {
            continue;
        }
        let f0 = rhs(&st);
        derivatives[0] = derivatives[0].max(PlanePoint::new(f0[0], f0[1]).norm());
        if deriv_order >= 2 {
            let sp = (s + delta).min(hi);
            let sm = (s - delta).max(lo);
            let fp = rhs(&curve.state_at(sp).unwrap());
            let fm = rhs(&curve.state_at(sm).unwrap());
            let w = sp - sm;
            let d2 = PlanePoint::new((fp[0] - fm[0]) / w, (fp[1] - fm[1]) / w).norm();
            derivatives[1] = derivatives[1].max(d2);
            if deriv_order >= 3 && sp - s == delta && s - sm == delta {
                let dd = delta * delta;
                let two = T::lit(2.0);
                let d3 = PlanePoint::new((fp[0] - two * f0[0] + fm[0]) / dd, (fp[1] - two * f0[1] + fm[1]) / dd).norm();
                derivatives[2] = derivatives[2].max(d3);
            }
        }
    }
    Ok(ConvergenceRow {
        h,
        c0,
        derivatives,
        curve_c0,
    })
}
