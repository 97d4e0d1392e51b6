//! Complete elliptic integral of the second kind.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `E(k) = ∫_0^{π/2} sqrt(1 - k^2 sin^2 φ) dφ` for modulus `0 <= k <= 1`,
/// computed with the arithmetic-geometric mean.
pub fn elliptic_e<T: Real>(k: T) -> Result<T> {
    if !(k >= T::zero() && k <= T::one()) {
        return Err(Error::InvalidInput(format!("elliptic modulus must lie in [0, 1], got {}", k)));
    }
    if k == T::one() {
        return Ok(T::one());
    }
    let tol = T::lit(1e-15).max(T::epsilon());
    let mut a = T::one();
    let mut b = (T::one() - k * k).sqrt();
    let mut c = k;
    let mut pow = T::lit(0.5);
    let mut sum = pow * c * c;
    for _ in 0..64 {
        if c.abs() <= tol * a {
            break;
        }
        let an = (a + b) * T::lit(0.5);
        c = (a - b) * T::lit(0.5);
        b = (a * b).sqrt();
        a = an;
        pow = pow * T::lit(2.0);
        sum = sum + pow * c * c;
    }
    let kk = T::FRAC_PI_2() / a;
    Ok(kk * (T::one() - sum))
}
