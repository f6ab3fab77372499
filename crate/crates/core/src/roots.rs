//! Bracketed scalar root finding.

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

/// Bisection on a sign-changing bracket. Returns the final bracket `(lo, hi)`
/// with `f(lo)` and `f(hi)` of the same signs as on entry.
pub fn bisect<T, F>(mut f: F, mut lo: T, mut hi: T, rel_tol: T, max_iter: usize) -> Result<(T, T)>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == T::zero() {
        return Ok((lo, lo));
    }
    if f_hi == T::zero() {
        return Ok((hi, hi));
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::RootFinding(format!(
            "no sign change on [{}, {}]",
            to_f64(lo),
            to_f64(hi)
        )));
    }
    let half = lit::<T>(0.5);
    for _ in 0..max_iter {
        if (hi - lo).abs() <= rel_tol * lo.abs().max(hi.abs()) {
            break;
        }
        let mid = half * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let f_mid = f(mid)?;
        if f_mid == T::zero() {
            return Ok((mid, mid));
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Newton's method kept inside a sign-changing bracket: any step that leaves
/// the bracket, or fails to halve the previous step, is replaced by bisection.
///
/// `f` returns the value and derivative. A non-finite or zero derivative is
/// tolerated and simply forces a bisection step.
pub fn safeguarded_newton<T, F>(mut f: F, lo: T, hi: T, tol: T, max_iter: usize) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> Result<(T, T)>,
{
    let (f_lo, _) = f(lo)?;
    if f_lo == T::zero() {
        return Ok(lo);
    }
    let (f_hi, _) = f(hi)?;
    if f_hi == T::zero() {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::RootFinding(format!(
            "no sign change on [{}, {}] (f = {}, {})",
            to_f64(lo),
            to_f64(hi),
            to_f64(f_lo),
            to_f64(f_hi)
        )));
    }
    // Orient so that f(neg) < 0 < f(pos).
    let (mut neg, mut pos) = if f_lo < T::zero() { (lo, hi) } else { (hi, lo) };
    let half = lit::<T>(0.5);
    let mut x = half * (lo + hi);
    let mut step_old = (hi - lo).abs();
    let mut step = step_old;
    let (mut fx, mut dfx) = f(x)?;
    for _ in 0..max_iter {
        let newton_ok = dfx.is_finite() && dfx != T::zero() && {
            let candidate = x - fx / dfx;
            (candidate - neg) * (candidate - pos) < T::zero()
                && (fx + fx).abs() <= (step_old * dfx).abs()
        };
        step_old = step;
        if newton_ok {
            step = fx / dfx;
            x = x - step;
        } else {
            step = half * (pos - neg);
            x = neg + step;
        }
        if step.abs() <= tol * (T::one() + x.abs()) {
            return Ok(x);
        }
        let next = f(x)?;
        fx = next.0;
        dfx = next.1;
        if fx == T::zero() {
            return Ok(x);
        }
        if fx < T::zero() {
            neg = x;
        } else {
            pos = x;
        }
        if (pos - neg).abs() <= tol * (T::one() + x.abs()) {
            return Ok(half * (pos + neg));
        }
    }
    Err(Error::RootFinding(format!(
        "no convergence after {max_iter} iterations near {}",
        to_f64(x)
    )))
}
