//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the geometry is computed in: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Default relative tolerance for adaptive quadrature.
    fn default_quad_tol() -> Self;

    /// Magnitude below which a negative radicand is treated as rounding noise.
    fn radicand_slack() -> Self;
}

impl Real for f32 {
    fn default_quad_tol() -> Self {
        1e-5
    }

    fn radicand_slack() -> Self {
        1e-6
    }
}

impl Real for f64 {
    fn default_quad_tol() -> Self {
        1e-10
    }

    fn radicand_slack() -> Self {
        1e-14
    }
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// Lossy conversion to `f64` for diagnostics.
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `T::from_usize` for small counts.
#[inline]
pub fn from_usize<T: Real>(k: usize) -> T {
    T::from_usize(k).expect("count representable in scalar type")
}

/// Area of the unit `k`-sphere in ℝ^{k+1}: ω_0 = 2, ω_1 = 2π, ω_k = 2π/(k−1)·ω_{k−2}.
pub fn unit_sphere_area<T: Real>(k: usize) -> T {
    let two = lit::<T>(2.0);
    let two_pi = two * T::PI();
    let (mut w, start) = if k.is_multiple_of(2) {
        (two, 2)
    } else {
        (two_pi, 3)
    };
    let mut j = start;
    while j <= k {
        w = w * two_pi / from_usize::<T>(j - 1);
        j += 2;
    }
    w
}

/// `a^p − b^p` for integer `p ≥ 1`, computed as `(a − b)·Σ a^i b^{p−1−i}` so that
/// the difference keeps full relative precision when `a − b` is supplied exactly.
pub fn pow_difference<T: Real>(a: T, b: T, a_minus_b: T, p: usize) -> T {
    if p == 0 {
        return T::zero();
    }
    let mut sum = T::zero();
    let mut ai = T::one();
    for i in 0..p {
        sum = sum + ai * b.powi((p - 1 - i) as i32);
        ai = ai * a;
    }
    a_minus_b * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unit_sphere_areas() {
        assert_eq!(unit_sphere_area::<f64>(0), 2.0);
        assert!((unit_sphere_area::<f64>(1) - 2.0 * PI).abs() < 1e-15);
        assert!((unit_sphere_area::<f64>(2) - 4.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_area::<f64>(3) - 2.0 * PI * PI).abs() < 1e-13);
        // ω_4 = 8π²/3
        assert!((unit_sphere_area::<f64>(4) - 8.0 * PI * PI / 3.0).abs() < 1e-13);
        assert!((unit_sphere_area::<f32>(2) - 4.0 * std::f32::consts::PI).abs() < 1e-5);
    }

    #[test]
    fn pow_difference_keeps_precision() {
        let b = 2.0_f64;
        let h = 1e-13;
        let a = b + h;
        let d = pow_difference(a, b, h, 3);
        // d/dh a^3 at b is 3 b^2 = 12
        assert!((d / h - 12.0).abs() < 1e-9);
        assert_eq!(pow_difference(a, b, h, 0), 0.0);
        assert!((pow_difference(3.0, 2.0, 1.0, 2) - 5.0_f64).abs() < 1e-15);
    }
}
