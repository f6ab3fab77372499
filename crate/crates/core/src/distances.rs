//! Upper bounds on the Lipschitz and intrinsic flat distances between a tube
//! `T_D(Σ₁)` in `M` and the corresponding tube `T_D(Σ̄₁)` in `M_Sch(m₀, L)`.
//!
//! Labels follow the tube argument: quantities with index 1 belong to the
//! tube in the appended Schwarzschild space, index 2 to the tube in `M`,
//! except `D₁`, the diameter of the tube in `M`.

use serde::Serialize;

use crate::comparison::ComparisonSetup;
use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, to_f64, Real};

/// Relative inflation of the infimal filling gap, keeping the gap condition strict.
const GAP_INFLATION: f64 = 1e-6;

/// Intrinsic flat bound from a bi-Lipschitz map with Lipschitz distance `d_lip`:
/// `((n+1)/2)·λ^{n−1}(λ−1)·max{D₁,D₂}·(V₁+A₁)` with `λ = e^{d_lip}`.
pub fn ifd_bound_lipschitz<T: Real>(n: usize, d_lip: T, d1: T, d2: T, v1: T, a1: T) -> T {
    let lambda = d_lip.exp();
    let half = lit::<T>(0.5);
    half * from_usize::<T>(n + 1)
        * lambda.powi(n as i32 - 1)
        * (lambda - T::one())
        * d1.max(d2)
        * (v1 + a1)
}

/// Intrinsic flat bound from an explicit filling between `ε`-close metrics.
/// Returns the infimal admissible gap `t_gap = arccos(1/(1+ε))/π · max{D₁,D₂}` and the bound
/// `2·t_gap·(1+10⁻⁶)·(V₁+V₂+A₁+A₂)`.
pub fn ifd_bound_filling<T: Real>(eps: T, d1: T, d2: T, v1: T, v2: T, a1: T, a2: T) -> (T, T) {
    let t_gap = (T::one() / (T::one() + eps)).acos() / T::PI() * d1.max(d2);
    let inflated = t_gap * (T::one() + lit::<T>(GAP_INFLATION));
    (t_gap, lit::<T>(2.0) * inflated * (v1 + v2 + a1 + a2))
}

/// Warp factor `cos²((t − t_i)π/D_i)` of the explicit filling at time `t`.
pub fn filling_metric_lower<T: Real>(t: T, t_i: T, d_i: T) -> T {
    ((t - t_i) * T::PI() / d_i).cos().powi(2)
}

/// Geometric inputs of the two distance bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundInputs<T> {
    #[serde(rename = "D1")]
    pub d1: T,
    #[serde(rename = "D2")]
    pub d2: T,
    #[serde(rename = "V1")]
    pub v1: T,
    #[serde(rename = "V2")]
    pub v2: T,
    #[serde(rename = "A1")]
    pub a1: T,
    #[serde(rename = "A2")]
    pub a2: T,
    /// `e^{tube_lip}`.
    pub lambda: T,
    /// Metric closeness fed to the filling bound.
    pub eps: T,
    pub t_gap: T,
    /// Inner re-scaling of the distance to `Σ̄₁`.
    pub scale_in: T,
    /// Outer re-scaling of the distance to `Σ̄₁`.
    pub scale_out: T,
}

/// Explicit bounds from the tube argument, to compare the measured inputs against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TubeEstimates<T> {
    /// Areal radius of `Σ₁`.
    pub r1: T,
    /// `2D + π r₁`.
    pub diameter: T,
    /// `D·A₀ + Vol(r⁻¹[r₀, r₁+D])` in `M_Sch(m₀)`.
    pub volume: T,
    /// `2 ω_{n−1}(r₁+D)^{n−1}`.
    pub area: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceBounds<T> {
    /// `log h_δ`.
    pub lip_bound: T,
    /// `log h_δ + |log scale_in| + |log scale_out|`, the Lipschitz input of both bounds.
    pub tube_lip: T,
    /// Largest `|log|` of a metric ratio sampled inside the tube of `M`.
    pub sampled_log_distortion: T,
    pub ifd_lipschitz: T,
    pub ifd_filling: T,
    pub inputs: BoundInputs<T>,
    pub estimates: TubeEstimates<T>,
}

/// Samples of the metric ratio taken inside the tube when checking `tube_lip`.
const TUBE_SAMPLES: usize = 256;

/// Distance bounds for the tubes of radius `d` around the spheres of area `a1`.
pub fn tube_comparison<T: Real>(
    setup: &ComparisonSetup<T>,
    a0: T,
    a1: T,
    d: T,
) -> Result<DistanceBounds<T>> {
    let manifold = setup.manifold();
    let model = setup.model();
    let boundary = manifold.boundary_area();
    if (a0 - boundary).abs() > lit::<T>(1e-9) * boundary {
        return Err(Error::InvalidInput(format!(
            "A0 = {} does not match the boundary area {}",
            to_f64(a0),
            to_f64(boundary)
        )));
    }
    if !(a1 > setup.a_delta) {
        return Err(Error::TubeEscapesRegion {
            area: to_f64(a1),
            a_delta: to_f64(setup.a_delta),
        });
    }
    if !(d >= T::zero()) || !d.is_finite() {
        return Err(Error::InvalidInput(format!(
            "tube radius must be nonnegative, got {}",
            to_f64(d)
        )));
    }

    let tube = manifold.tube(a1, d)?;
    let app = model.tube_in_appended(a1, d)?;
    let d1 = manifold.tube_diameter_bound(&tube);
    let v2 = manifold.tube_volume(&tube)?;
    let a2 = manifold.tube_boundary_area(&tube)?;
    let (d2, v1, area1) = (app.diameter_bound, app.volume, app.boundary_area);

    // φ preserves Σ₁ (it lies outside r_δ); compare where φ sends the tube ends
    // with where the tube ends in the model. Each image extent σ(φ(Σ_c)) − σ(φ(Σ_end))
    // is written as the extent in M plus the shift σ∘φ − s at both spheres, so that
    // the inversion error in the tube ends cancels and φ = id gives exactly 1.
    let shift = |r: T| -> Result<T> { Ok(model.sigma(&setup.phi(r)?)? - manifold.arclength(r)?) };
    let (shift_lo, shift_c, shift_hi) = (
        shift(tube.r_interval.0)?,
        shift(tube.center_r)?,
        shift(tube.r_interval.1)?,
    );
    let image_in = (tube.center_s - tube.s_interval.0) + shift_c - shift_lo;
    let image_out = (tube.s_interval.1 - tube.center_s) + shift_hi - shift_c;
    let sigma_center = app.center_sigma;
    let scale = |target: T, image: T| {
        if image > T::zero() {
            target / image
        } else {
            T::one()
        }
    };
    let scale_in = scale(sigma_center - app.sigma_interval.0, image_in);
    let scale_out = scale(app.sigma_interval.1 - sigma_center, image_out);

    let lip_bound = setup.h_delta().ln();
    let log_in = scale_in.ln().abs();
    let log_out = scale_out.ln().abs();
    let tube_lip = lip_bound + log_in + log_out;
    let eps = (lit::<T>(0.5) * lip_bound + log_in.max(log_out)).exp() - T::one();

    let ifd_lipschitz = ifd_bound_lipschitz(manifold.n(), tube_lip, d1, d2, v1, area1);
    let (t_gap, ifd_filling) = ifd_bound_filling(eps, d1, d2, v1, v2, area1, a2);

    let r1 = tube.center_r;
    let outer = r1 + d;
    let estimates = TubeEstimates {
        r1,
        diameter: lit::<T>(2.0) * d + T::PI() * r1,
        volume: d * a0 + model.model().shell_volume(model.r0(), outer)?,
        area: lit::<T>(2.0) * manifold.unit_sphere_area() * outer.powi(manifold.n() as i32 - 1),
    };

    let mut sampled = T::zero();
    let (r_lo, r_hi) = tube.r_interval;
    for k in 0..=TUBE_SAMPLES {
        let r = r_lo + (r_hi - r_lo) * from_usize::<T>(k) / from_usize::<T>(TUBE_SAMPLES);
        for direction in [
            crate::comparison::Direction::Radial,
            crate::comparison::Direction::Tangential,
        ] {
            match setup.distortion_ratio(r, direction) {
                Ok(ratio) => sampled = sampled.max(ratio.ln().abs()),
                Err(Error::SingularAtHorizon { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }

    Ok(DistanceBounds {
        lip_bound,
        tube_lip,
        sampled_log_distortion: sampled,
        ifd_lipschitz,
        ifd_filling,
        inputs: BoundInputs {
            d1,
            d2,
            v1,
            v2,
            a1: area1,
            a2,
            lambda: tube_lip.exp(),
            eps,
            t_gap,
            scale_in,
            scale_out,
        },
        estimates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comparison::ComparisonOptions;
    use crate::geometry::{GeometryOptions, RotSymManifold};
    use crate::profiles::{deep_well_profile, schwarzschild_profile};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn lipschitz_closed_form() {
        assert_eq!(ifd_bound_lipschitz(3, 0.0, 1.0, 2.0, 3.0, 4.0), 0.0);
        let v = ifd_bound_lipschitz(3, 1.1f64.ln(), 10.0, 10.0, 100.0, 10.0);
        assert_relative_eq!(v, 266.2, max_relative = 1e-12);
        assert!(ifd_bound_lipschitz(3, 0.2, 10.0, 10.0, 100.0, 10.0) > v);
    }

    #[test]
    fn filling_closed_form() {
        assert_eq!(
            ifd_bound_filling(0.0, 3.0, 4.0, 1.0, 1.0, 1.0, 1.0),
            (0.0, 0.0)
        );
        let eps: f64 = 1e-8;
        let (t, b) = ifd_bound_filling(eps, 3.0, 4.0, 1.0, 2.0, 3.0, 4.0);
        assert_relative_eq!(t, (2.0 * eps).sqrt() / PI * 4.0, max_relative = 1e-6);
        let (_, b2) = ifd_bound_filling(eps, 3.0, 4.0, 2.0, 4.0, 6.0, 8.0);
        assert_relative_eq!(b2, 2.0 * b, max_relative = 1e-15);
    }

    #[test]
    fn filling_warp() {
        assert_eq!(filling_metric_lower(1.0, 1.0, 3.0), 1.0);
        assert!(filling_metric_lower(2.5f64, 1.0, 3.0).abs() < 1e-30);
        assert_eq!(
            filling_metric_lower(0.3, 1.0, 3.0),
            filling_metric_lower(1.7, 1.0, 3.0)
        );
    }

    #[test]
    fn schwarzschild_bounds_vanish() {
        let m = RotSymManifold::new(
            schwarzschild_profile(3, 1.0).unwrap(),
            GeometryOptions::default(),
        )
        .unwrap();
        let c = ComparisonSetup::new(m, ComparisonOptions::default()).unwrap();
        let b = tube_comparison(&c, 16.0 * PI, 64.0 * PI, 2.0).unwrap();
        assert_eq!(b.lip_bound, 0.0);
        assert_eq!(b.tube_lip, 0.0, "{b:?}");
        assert_eq!(b.ifd_lipschitz, 0.0);
        assert_eq!(b.ifd_filling, 0.0);
    }

    #[test]
    fn deep_well_tube_estimates() {
        let a0 = 16.0 * PI;
        let w = deep_well_profile(3, a0, 4.0 * a0, 10.0, 0.05).unwrap();
        let m = RotSymManifold::new(w.profile, GeometryOptions::default()).unwrap();
        let c = ComparisonSetup::new(m, ComparisonOptions::default()).unwrap();
        let b = tube_comparison(&c, a0, 4.0 * a0, 3.0).unwrap();
        assert!(b.inputs.d1 <= b.estimates.diameter + 1e-8);
        assert!(b.inputs.v1 <= b.estimates.volume + 1e-8);
        assert!(b.inputs.a1 <= b.estimates.area + 1e-8);
        assert!(b.sampled_log_distortion <= b.tube_lip + 1e-9);
        assert!(b.ifd_lipschitz > 0.0 && b.ifd_filling > 0.0);
        let err = tube_comparison(&c, a0, c.a_delta, 3.0).unwrap_err();
        assert!(matches!(err, Error::TubeEscapesRegion { .. }));
    }
}
