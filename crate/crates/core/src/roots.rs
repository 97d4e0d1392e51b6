//! Bracketed scalar root finding.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Root of `f` in `[a, b]` by bisection safeguarded secant steps.
///
/// `f(a)` and `f(b)` must have opposite signs (or one of them vanish).
/// Stops when `|f(x)| <= f_tol` or the bracket is narrower than `x_tol`.
pub fn bisect_secant<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T, f_tol: T, x_tol: T) -> Result<T> {
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut fa = f(a);
    let mut fb = f(b);
    if !(fa.is_finite() && fb.is_finite()) {
        return Err(Error::BracketFailure("function not finite at bracket ends".into()));
    }
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if (fa < T::zero()) == (fb < T::zero()) {
        return Err(Error::BracketFailure(format!(
            "no sign change on [{}, {}]: f = {}, {}",
            a, b, fa, fb
        )));
    }
    let half = T::lit(0.5);
    // Illinois variant of the secant/false-position step: the function value
    // at an endpoint that survives twice in a row is halved. A bisection is
    // forced whenever the bracket fails to halve.
    let mut side = 0i8;
    let mut force_bisect = false;
    for _ in 0..400 {
        let width = b - a;
        let secant = b - fb * (b - a) / (fb - fa);
        let x = if !force_bisect && secant > a && secant < b {
            secant
        } else {
            a + width * half
        };
        let fx = f(x);
        if !fx.is_finite() {
            return Err(Error::BracketFailure(format!("function not finite at {}", x)));
        }
        if fx.abs() <= f_tol {
            return Ok(x);
        }
        if (fx < T::zero()) == (fa < T::zero()) {
            a = x;
            fa = fx;
            if side == -1 {
                fb = fb * half;
            }
            side = -1;
        } else {
            b = x;
            fb = fx;
            if side == 1 {
                fa = fa * half;
            }
            side = 1;
        }
        force_bisect = !force_bisect && b - a > width * T::lit(0.75);
        let mid = a + (b - a) * half;
        if b - a <= x_tol || mid <= a || mid >= b {
            return Ok(if fa.abs() < fb.abs() { a } else { b });
        }
    }
    Err(Error::BracketFailure("iteration limit reached".into()))
}
