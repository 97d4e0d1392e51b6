//! Dormand–Prince 5(4) with PI step-size control and the 4th-order
//! continuous extension of Hairer, Nørsett & Wanner.

use crate::error::{Error, Result};
use crate::scalar::Real;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Step-size control parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_step: T,
    pub min_step: T,
    pub max_steps: usize,
}

impl<T: Real> Default for StepControl<T> {
    fn default() -> Self {
        Self {
            abs_tol: T::lit(1e-10),
            rel_tol: T::lit(1e-10),
            max_step: T::lit(0.05),
            min_step: T::lit(1e-13),
            max_steps: 5_000_000,
        }
    }
}

/// Interpolating polynomial of one accepted step.
#[derive(Debug, Clone)]
pub struct DenseStep<T, const N: usize> {
    s0: T,
    h: T,
    coef: [[T; N]; 5],
}

impl<T: Real, const N: usize> DenseStep<T, N> {
    pub fn lo(&self) -> T {
        self.s0.min(self.s0 + self.h)
    }

    pub fn hi(&self) -> T {
        self.s0.max(self.s0 + self.h)
    }

    pub fn eval(&self, s: T) -> [T; N] {
        let th = (s - self.s0) / self.h;
        let th1 = T::one() - th;
        let c = &self.coef;
        std::array::from_fn(|i| c[0][i] + th * (c[1][i] + th1 * (c[2][i] + th * (c[3][i] + th1 * c[4][i]))))
    }

    /// Derivative of the interpolant with respect to `s`.
    pub fn derivative(&self, s: T) -> [T; N] {
        let th = (s - self.s0) / self.h;
        let th1 = T::one() - th;
        let c = &self.coef;
        std::array::from_fn(|i| {
            let a = c[3][i] + th1 * c[4][i];
            let da = -c[4][i];
            let b = c[2][i] + th * a;
            let db = a + th * da;
            let cc = c[1][i] + th1 * b;
            let dc = -b + th1 * db;
            (cc + th * dc) / self.h
        })
    }

    fn project<const M: usize>(&self) -> DenseStep<T, M> {
        DenseStep {
            s0: self.s0,
            h: self.h,
            coef: std::array::from_fn(|j| std::array::from_fn(|i| self.coef[j][i])),
        }
    }
}

/// Piecewise dense output over a whole integration.
#[derive(Debug, Clone)]
pub struct DenseSolution<T, const N: usize> {
    steps: Vec<DenseStep<T, N>>,
}

impl<T: Real, const N: usize> DenseSolution<T, N> {
    fn from_steps(mut steps: Vec<DenseStep<T, N>>) -> Self {
        steps.sort_by(|a, b| a.lo().partial_cmp(&b.lo()).unwrap_or(std::cmp::Ordering::Equal));
        Self { steps }
    }

    pub fn range(&self) -> Option<(T, T)> {
        Some((self.steps.first()?.lo(), self.steps.last()?.hi()))
    }

    pub fn steps(&self) -> &[DenseStep<T, N>] {
        &self.steps
    }

    /// State at `s`, or `None` outside the integrated interval.
    pub fn eval(&self, s: T) -> Option<[T; N]> {
        let (lo, hi) = self.range()?;
        if s < lo || s > hi {
            return None;
        }
        let idx = self.steps.partition_point(|st| st.hi() < s);
        let idx = idx.min(self.steps.len() - 1);
        Some(self.steps[idx].eval(s))
    }

    /// Derivative of the interpolant at `s`.
    pub fn derivative(&self, s: T) -> Option<[T; N]> {
        let (lo, hi) = self.range()?;
        if s < lo || s > hi {
            return None;
        }
        let idx = self.steps.partition_point(|st| st.hi() < s).min(self.steps.len() - 1);
        Some(self.steps[idx].derivative(s))
    }

    /// Keeps the leading `M` components.
    pub fn project<const M: usize>(&self) -> DenseSolution<T, M> {
        assert!(M <= N);
        DenseSolution {
            steps: self.steps.iter().map(|s| s.project()).collect(),
        }
    }
}

/// Sampled solution of an initial value problem, with dense output.
#[derive(Debug, Clone)]
pub struct Trajectory<T, const N: usize> {
    pub s: Vec<T>,
    pub y: Vec<[T; N]>,
    /// Index of the initial condition in `s`/`y`.
    pub origin: usize,
    dense: DenseSolution<T, N>,
}

impl<T: Real, const N: usize> Trajectory<T, N> {
    pub fn dense(&self) -> &DenseSolution<T, N> {
        &self.dense
    }

    pub fn eval(&self, s: T) -> Option<[T; N]> {
        if self.s.len() == 1 {
            return (s == self.s[0]).then_some(self.y[0]);
        }
        self.dense.eval(s)
    }

    pub fn initial(&self) -> [T; N] {
        self.y[self.origin]
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn s_range(&self) -> (T, T) {
        (self.s[0], *self.s.last().unwrap())
    }

    pub(crate) fn into_parts(self) -> (Vec<T>, Vec<[T; N]>, usize, DenseSolution<T, N>) {
        (self.s, self.y, self.origin, self.dense)
    }
}

struct Segment<T, const N: usize> {
    s: Vec<T>,
    y: Vec<[T; N]>,
    steps: Vec<DenseStep<T, N>>,
}

fn axpy<T: Real, const N: usize>(y: &[T; N], h: T, terms: &[(f64, &[T; N])]) -> [T; N] {
    std::array::from_fn(|i| {
        let mut acc = T::zero();
        for (c, k) in terms {
            acc = acc + T::lit(*c) * k[i];
        }
        y[i] + h * acc
    })
}

fn all_finite<T: Real, const N: usize>(y: &[T; N]) -> bool {
    y.iter().all(|v| v.is_finite())
}

fn initial_step<T, const N: usize, F>(rhs: &F, s0: T, y0: &[T; N], f0: &[T; N], dir: T, ctl: &StepControl<T>) -> T
where
    T: Real,
    F: Fn(T, &[T; N]) -> [T; N],
{
    let n = T::lit(N as f64);
    let mut dnf = T::zero();
    let mut dny = T::zero();
    for i in 0..N {
        let sk = ctl.abs_tol + ctl.rel_tol * y0[i].abs();
        dnf = dnf + (f0[i] / sk).powi(2);
        dny = dny + (y0[i] / sk).powi(2);
    }
    dnf = (dnf / n).sqrt();
    dny = (dny / n).sqrt();
    let mut h = if dnf <= T::lit(1e-5) || dny <= T::lit(1e-5) {
        T::lit(1e-6)
    } else {
        T::lit(0.01) * dny / dnf
    };
    h = h.min(ctl.max_step);
    let y1: [T; N] = std::array::from_fn(|i| y0[i] + h * dir * f0[i]);
    let f1 = rhs(s0 + h * dir, &y1);
    if !all_finite(&f1) {
        return h.max(ctl.min_step);
    }
    let mut der2 = T::zero();
    for i in 0..N {
        let sk = ctl.abs_tol + ctl.rel_tol * y0[i].abs();
        der2 = der2 + ((f1[i] - f0[i]) / sk).powi(2);
    }
    der2 = (der2 / n).sqrt() / h;
    let der12 = der2.abs().max(dnf);
    let h1 = if der12 <= T::lit(1e-15) {
        T::lit(1e-6).max(h * T::lit(1e-3))
    } else {
        (T::lit(0.01) / der12).powf(T::lit(0.2))
    };
    (T::lit(100.0) * h).min(h1).min(ctl.max_step).max(ctl.min_step)
}

fn integrate_segment<T, const N: usize, F, G>(
    rhs: &F,
    in_domain: &G,
    s0: T,
    y0: [T; N],
    s_end: T,
    ctl: &StepControl<T>,
) -> Result<Segment<T, N>>
where
    T: Real,
    F: Fn(T, &[T; N]) -> [T; N],
    G: Fn(&[T; N]) -> bool,
{
    let mut seg = Segment {
        s: vec![s0],
        y: vec![y0],
        steps: Vec::new(),
    };
    if s_end == s0 {
        return Ok(seg);
    }
    let dir = if s_end > s0 { T::one() } else { -T::one() };
    let span = (s_end - s0).abs();
    let tiny = T::epsilon() * T::lit(16.0) * (T::one() + s0.abs().max(s_end.abs()));

    let mut s = s0;
    let mut y = y0;
    let mut k1 = rhs(s, &y);
    if !all_finite(&k1) {
        return Err(Error::DomainExit {
            s: s.as_f64(),
            tau: y0[0].as_f64(),
            nu: y0.get(1).copied().unwrap_or(T::zero()).as_f64(),
        });
    }
    let mut h_abs = initial_step(rhs, s, &y, &k1, dir, ctl).min(span);
    let mut facold = T::lit(1e-4);
    let mut last_rejected = false;
    let mut guard_rejected = false;
    let mut steps = 0usize;

    let expo1 = T::lit(0.2 - 0.04 * 0.75);
    let beta = T::lit(0.04);
    let safe = T::lit(0.9);
    let facc1 = T::lit(5.0);
    let facc2 = T::lit(0.1);

    loop {
        let remaining = (s_end - s).abs();
        if remaining <= tiny {
            break;
        }
        if steps >= ctl.max_steps {
            return Err(Error::TooManySteps {
                s: s.as_f64(),
                max_steps: ctl.max_steps,
            });
        }
        let last = h_abs >= remaining;
        if last {
            h_abs = remaining;
        }
        if h_abs < ctl.min_step && !last {
            return Err(if guard_rejected {
                Error::DomainExit {
                    s: s.as_f64(),
                    tau: y[0].as_f64(),
                    nu: y.get(1).copied().unwrap_or(T::zero()).as_f64(),
                }
            } else {
                Error::StepUnderflow {
                    s: s.as_f64(),
                    min_step: ctl.min_step.as_f64(),
                }
            });
        }
        let h = h_abs * dir;
        steps += 1;

        let k2 = rhs(s + T::lit(C2) * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = rhs(s + T::lit(C3) * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(s + T::lit(C4) * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(
            s + T::lit(C5) * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let y6 = axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
        let k6 = rhs(s + h, &y6);
        let y_new = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let s_new = if last { s_end } else { s + h };
        let in_dom = all_finite(&y_new) && in_domain(&y_new);
        let k7 = if in_dom { rhs(s_new, &y_new) } else { [T::nan(); N] };

        let mut err = T::zero();
        for i in 0..N {
            let e = h * (T::lit(E1) * k1[i]
                + T::lit(E3) * k3[i]
                + T::lit(E4) * k4[i]
                + T::lit(E5) * k5[i]
                + T::lit(E6) * k6[i]
                + T::lit(E7) * k7[i]);
            let sk = ctl.abs_tol + ctl.rel_tol * y[i].abs().max(y_new[i].abs());
            err = err + (e / sk).powi(2);
        }
        err = (err / T::lit(N as f64)).sqrt();

        if !in_dom || !err.is_finite() {
            guard_rejected = !in_dom;
            h_abs = h_abs * T::lit(0.25);
            last_rejected = true;
            continue;
        }

        let fac11 = err.powf(expo1);
        if err <= T::one() {
            let fac = (fac11 / facold.powf(beta) / safe).min(facc1).max(facc2);
            facold = err.max(T::lit(1e-4));

            let ydiff: [T; N] = std::array::from_fn(|i| y_new[i] - y[i]);
            let bspl: [T; N] = std::array::from_fn(|i| h * k1[i] - ydiff[i]);
            let coef = [
                y,
                ydiff,
                bspl,
                std::array::from_fn(|i| ydiff[i] - h * k7[i] - bspl[i]),
                std::array::from_fn(|i| {
                    h * (T::lit(D1) * k1[i]
                        + T::lit(D3) * k3[i]
                        + T::lit(D4) * k4[i]
                        + T::lit(D5) * k5[i]
                        + T::lit(D6) * k6[i]
                        + T::lit(D7) * k7[i])
                }),
            ];
            seg.steps.push(DenseStep { s0: s, h: s_new - s, coef });
            s = s_new;
            y = y_new;
            k1 = k7;
            seg.s.push(s);
            seg.y.push(y);

            let mut hn = h_abs / fac;
            if last_rejected {
                hn = hn.min(h_abs);
            }
            h_abs = hn.min(ctl.max_step);
            last_rejected = false;
            guard_rejected = false;
        } else {
            h_abs = h_abs / facc1.min(fac11 / safe);
            last_rejected = true;
            guard_rejected = false;
        }
    }
    Ok(seg)
}

/// Integrates `y' = rhs(s, y)` from `(s0, y0)` over `[s_min, s_max]`
/// (both directions when `s_min < s0 < s_max`).
///
/// `in_domain` marks the region where the right-hand side is defined; a
/// trajectory that cannot advance without leaving it yields
/// [`Error::DomainExit`].
pub fn integrate<T, const N: usize, F, G>(
    rhs: F,
    in_domain: G,
    s0: T,
    y0: [T; N],
    s_min: T,
    s_max: T,
    ctl: &StepControl<T>,
) -> Result<Trajectory<T, N>>
where
    T: Real,
    F: Fn(T, &[T; N]) -> [T; N],
    G: Fn(&[T; N]) -> bool,
{
    if !(s_min <= s0 && s0 <= s_max) {
        return Err(Error::InvalidInput(format!(
            "start {} outside integration interval [{}, {}]",
            s0, s_min, s_max
        )));
    }
    if !(ctl.abs_tol > T::zero() && ctl.rel_tol > T::zero() && ctl.max_step > T::zero()) {
        return Err(Error::InvalidInput("tolerances and max_step must be positive".into()));
    }
    if !all_finite(&y0) || !in_domain(&y0) {
        return Err(Error::DomainExit {
            s: s0.as_f64(),
            tau: y0[0].as_f64(),
            nu: y0.get(1).copied().unwrap_or(T::zero()).as_f64(),
        });
    }
    let fwd = integrate_segment(&rhs, &in_domain, s0, y0, s_max, ctl)?;
    let bwd = integrate_segment(&rhs, &in_domain, s0, y0, s_min, ctl)?;

    let origin = bwd.s.len() - 1;
    let mut s: Vec<T> = bwd.s.into_iter().rev().collect();
    let mut y: Vec<[T; N]> = bwd.y.into_iter().rev().collect();
    s.extend_from_slice(&fwd.s[1..]);
    y.extend_from_slice(&fwd.y[1..]);
    let mut steps = bwd.steps;
    steps.extend(fwd.steps);
    Ok(Trajectory {
        s,
        y,
        origin,
        dense: DenseSolution::from_steps(steps),
    })
}
