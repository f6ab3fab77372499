//! Globally adaptive Gauss–Kronrod (10/21) quadrature, plus the square-root
//! change of variables used for integrands that blow up like `h^{-1/2}` at a
//! known endpoint.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

// Gauss–Kronrod tables quoted to the digits they are published with.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for the odd-indexed Kronrod nodes.
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Stopping rule for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_intervals: usize,
}

impl<T: Real> QuadOptions<T> {
    pub fn relative(rel_tol: T) -> Self {
        Self {
            rel_tol,
            abs_tol: T::zero(),
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: T,
    pub intervals: usize,
}

struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Real> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl<T: Real> Eq for Panel<T> {}

impl<T: Real> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

fn gauss_kronrod<T, F>(f: &mut F, a: T, b: T) -> Result<(T, T)>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    let half = lit::<T>(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let fc = f(center)?;
    let mut kronrod = fc * lit(WGK[10]);
    let mut gauss = T::zero();
    for j in 0..10 {
        let dx = half_len * lit(XGK[j]);
        let pair = f(center - dx)? + f(center + dx)?;
        kronrod = kronrod + lit::<T>(WGK[j]) * pair;
        if j % 2 == 1 {
            gauss = gauss + lit::<T>(WG[j / 2]) * pair;
        }
    }
    let value = kronrod * half_len;
    let error = ((kronrod - gauss) * half_len).abs();
    if !value.is_finite() {
        return Err(Error::QuadratureFailure {
            a: to_f64(a),
            b: to_f64(b),
            tol: f64::NAN,
            estimate: f64::INFINITY,
        });
    }
    Ok((value, error))
}

/// Integrates `f` over `[a, b]` by bisecting the panel with the largest
/// Kronrod–Gauss discrepancy until the summed estimate meets the tolerance.
pub fn integrate<T, F>(mut f: F, a: T, b: T, opts: QuadOptions<T>) -> Result<QuadResult<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    if a == b {
        return Ok(QuadResult {
            value: T::zero(),
            error: T::zero(),
            intervals: 0,
        });
    }
    let (value, error) = gauss_kronrod(&mut f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    let roundoff = lit::<T>(50.0) * T::epsilon();
    loop {
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if total_err <= target {
            break;
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::QuadratureFailure {
                a: to_f64(a),
                b: to_f64(b),
                tol: to_f64(opts.rel_tol),
                estimate: to_f64(total_err),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = lit::<T>(0.5) * (worst.a + worst.b);
        // Panel too narrow to split further: accept its estimate.
        if (worst.b - worst.a).abs() <= roundoff * (worst.a.abs() + worst.b.abs())
            || mid == worst.a
            || mid == worst.b
        {
            total_err = total_err - worst.error;
            heap.push(Panel {
                error: T::zero(),
                ..worst
            });
            continue;
        }
        let (v1, e1) = gauss_kronrod(&mut f, worst.a, mid)?;
        let (v2, e2) = gauss_kronrod(&mut f, mid, worst.b)?;
        total = total - worst.value + v1 + v2;
        total_err = total_err - worst.error + e1 + e2;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
    // Re-sum to shed the drift accumulated by the running updates.
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.error).sum();
    Ok(QuadResult {
        value,
        error,
        intervals: heap.len(),
    })
}

/// Integrates `f(h)` over `[h_a, h_b]` (with `0 ≤ h_a ≤ h_b`) where `f` may
/// behave like `h^{-1/2}` as `h → 0`.
///
/// Panels that start close to `h = 0` relative to their width are mapped
/// through `h = u²`, which turns the endpoint singularity into an analytic
/// integrand `2u·f(u²)`.
pub fn integrate_sqrt_endpoint<T, F>(mut f: F, h_a: T, h_b: T, rel_tol: T) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    if h_b <= h_a {
        return Ok(T::zero());
    }
    let opts = QuadOptions::relative(rel_tol);
    if h_a < h_b - h_a {
        let two = lit::<T>(2.0);
        let res = integrate(|u: T| Ok(two * u * f(u * u)?), h_a.sqrt(), h_b.sqrt(), opts)?;
        Ok(res.value)
    } else {
        Ok(integrate(f, h_a, h_b, opts)?.value)
    }
}
