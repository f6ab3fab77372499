//! Metric data of the rotationally symmetric manifold generated by a profile.
//!
//! The metric is `g = ds² + r(s)² g₀` with `(dr/ds)² = 1 − 2m_H/r^{n−2}`. Its
//! embedding as a rotational graph `z(r)` in ℝ^{n+1} satisfies
//! `(ds/dr)² = 1 + (dz/dr)²`.
//!
//! Both `s(r)` and `z(r)` have an integrable `(r − r₀)^{−1/2}` singularity at
//! the horizon. Everything here is therefore parametrised by the offset
//! `h = r − r₀` and integrated through `h = u²` near `h = 0`.

use crate::error::{Error, Result};
use crate::profiles::{validate_profile, AdmissibleProfile, Side, ValidationOptions};
use crate::quadrature::integrate_sqrt_endpoint;
use crate::roots::safeguarded_newton;
use crate::scalar::{from_usize, lit, to_f64, unit_sphere_area, Real};

/// Construction options for [`RotSymManifold`].
#[derive(Debug, Clone, Copy)]
pub struct GeometryOptions<T> {
    /// Relative tolerance of every quadrature.
    pub quad_tol: T,
    /// Number of log-spaced radii in the cached coordinate table.
    pub grid_points: usize,
    /// Outer end of the table; `None` picks ten times the largest natural radius.
    pub r_max: Option<T>,
}

impl<T: Real> Default for GeometryOptions<T> {
    fn default() -> Self {
        Self {
            quad_tol: T::default_quad_tol(),
            grid_points: 2048,
            r_max: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Node<T> {
    h: T,
    s: T,
    z: T,
}

/// Which coordinate a cumulative integral produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Coordinate {
    Arclength,
    Height,
}

/// One row of the embedding table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddingRow<T> {
    pub r: T,
    pub s: T,
    pub z: T,
    pub drds: T,
    pub m_hawking: T,
    pub scalar_curvature: T,
}

/// Tubular neighbourhood `T_D(Σ)` of a symmetric sphere, described by its radial extent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tube<T> {
    pub center_area: T,
    pub radius: T,
    pub center_r: T,
    pub center_s: T,
    pub r_interval: (T, T),
    pub s_interval: (T, T),
    /// The tube reaches the boundary, so it is cut off at `s = 0`.
    pub clipped_at_boundary: bool,
}

/// A rotationally symmetric manifold with minimal boundary, reconstructed from
/// its Hawking mass profile.
#[derive(Debug, Clone)]
pub struct RotSymManifold<T> {
    profile: AdmissibleProfile<T>,
    r_max: T,
    quad_tol: T,
    nodes: Vec<Node<T>>,
    breaks: Vec<T>,
}

impl<T: Real> RotSymManifold<T> {
    /// Builds the manifold after checking that the profile is admissible.
    pub fn new(profile: AdmissibleProfile<T>, opts: GeometryOptions<T>) -> Result<Self> {
        let report = validate_profile(&profile, &ValidationOptions::default());
        if !report.valid {
            let why: Vec<_> = report.failures().map(|c| c.detail.clone()).collect();
            return Err(Error::Inadmissible(why.join("; ")));
        }
        Self::new_unvalidated(profile, opts)
    }

    /// Builds the manifold without the admissibility check. Only the
    /// subcriticality needed to take square roots is required; this exists so
    /// that non-monotone profiles can be examined.
    pub fn new_unvalidated(
        profile: AdmissibleProfile<T>,
        opts: GeometryOptions<T>,
    ) -> Result<Self> {
        if !(opts.quad_tol > T::zero()) || opts.grid_points < 2 {
            return Err(Error::InvalidInput(
                "quad_tol must be positive and the grid needs 2 points".into(),
            ));
        }
        let r0 = profile.r0();
        let r_max = match opts.r_max {
            Some(r) if r > r0 => r,
            Some(r) => {
                return Err(Error::InvalidInput(format!(
                    "r_max = {} must exceed r0 = {}",
                    to_f64(r),
                    to_f64(r0)
                )))
            }
            None => default_r_max(&profile),
        };
        let breaks: Vec<T> = profile.breakpoints().into_iter().map(|b| b - r0).collect();

        let count = opts.grid_points;
        let ratio = r_max / r0;
        let mut offsets: Vec<T> = (0..count)
            .map(|k| {
                let t = from_usize::<T>(k) / from_usize::<T>(count - 1);
                r0 * (ratio.powf(t) - T::one())
            })
            .collect();
        offsets[0] = T::zero();
        offsets[count - 1] = r_max - r0;
        offsets.extend(breaks.iter().copied().filter(|&b| b < r_max - r0));
        offsets.sort_by(|a, b| a.partial_cmp(b).expect("finite offsets"));
        offsets.dedup();

        let mut manifold = Self {
            profile,
            r_max,
            quad_tol: opts.quad_tol,
            nodes: Vec::with_capacity(offsets.len()),
            breaks,
        };
        let mut s = T::zero();
        let mut z = T::zero();
        let mut prev = T::zero();
        manifold.nodes.push(Node { h: T::zero(), s, z });
        for &h in &offsets[1..] {
            s = s + manifold.integrate_offset(Coordinate::Arclength, prev, h)?;
            z = z + manifold.integrate_offset(Coordinate::Height, prev, h)?;
            manifold.nodes.push(Node { h, s, z });
            prev = h;
        }
        Ok(manifold)
    }

    pub fn profile(&self) -> &AdmissibleProfile<T> {
        &self.profile
    }

    pub fn n(&self) -> usize {
        self.profile.n()
    }

    pub fn r0(&self) -> T {
        self.profile.r0()
    }

    pub fn r_max(&self) -> T {
        self.r_max
    }

    pub fn quad_tol(&self) -> T {
        self.quad_tol
    }

    /// Radii of the cached table.
    pub fn grid_radii(&self) -> Vec<T> {
        self.nodes.iter().map(|n| self.r0() + n.h).collect()
    }

    fn r_power(&self, r: T) -> T {
        r.powi((self.n() - 2) as i32)
    }

    fn offset_of(&self, r: T) -> Result<T> {
        if r >= self.r0() && r.is_finite() {
            Ok(r - self.r0())
        } else {
            Err(Error::OutOfDomain {
                value: to_f64(r),
                domain: format!("r >= r0 = {}", to_f64(self.r0())),
            })
        }
    }

    fn gap(&self, h: T) -> Result<T> {
        let gap = self.profile.criticality_gap(h);
        let r = self.r0() + h;
        if gap < T::zero() {
            let relative = gap / self.r_power(r);
            if relative >= -T::radicand_slack() {
                return Ok(T::zero());
            }
            return Err(Error::NumericalDomain {
                r: to_f64(r),
                radicand: to_f64(relative),
            });
        }
        Ok(gap)
    }

    /// `ds/dr` at offset `h`; infinite at the horizon.
    fn dsdr_offset(&self, h: T) -> Result<T> {
        let r = self.r0() + h;
        Ok((self.r_power(r) / self.gap(h)?).sqrt())
    }

    /// `dz/dr` at offset `h`; infinite at the horizon.
    fn dzdr_offset(&self, h: T) -> Result<T> {
        let r = self.r0() + h;
        let two_m = lit::<T>(2.0) * self.profile.eval_m_hawking(r)?;
        Ok((two_m / self.gap(h)?).sqrt())
    }

    fn integrand(&self, which: Coordinate, h: T) -> Result<T> {
        match which {
            Coordinate::Arclength => self.dsdr_offset(h),
            Coordinate::Height => self.dzdr_offset(h),
        }
    }

    /// `∫ dh` of `ds/dr` or `dz/dr` over `[h_a, h_b]`, split at profile kinks.
    fn integrate_offset(&self, which: Coordinate, h_a: T, h_b: T) -> Result<T> {
        self.integrate_split(h_a, h_b, |h| self.integrand(which, h))
    }

    /// `∫_{h_a}^{h_b} f(h) dh` at the manifold's tolerance, split at profile kinks;
    /// `f` may blow up like `h^{−1/2}` at `h = 0`.
    pub fn integrate_split<F>(&self, h_a: T, h_b: T, mut f: F) -> Result<T>
    where
        F: FnMut(T) -> Result<T>,
    {
        if h_b <= h_a {
            return Ok(T::zero());
        }
        let mut total = T::zero();
        let mut lo = h_a;
        for &b in self.breaks.iter().filter(|&&b| b > h_a && b < h_b) {
            total = total + integrate_sqrt_endpoint(&mut f, lo, b, self.quad_tol)?;
            lo = b;
        }
        Ok(total + integrate_sqrt_endpoint(&mut f, lo, h_b, self.quad_tol)?)
    }

    fn node_below(&self, h: T) -> usize {
        self.nodes.partition_point(|n| n.h <= h).saturating_sub(1)
    }

    fn coordinate_at_offset(&self, which: Coordinate, h: T) -> Result<T> {
        let node = self.nodes[self.node_below(h)];
        let base = match which {
            Coordinate::Arclength => node.s,
            Coordinate::Height => node.z,
        };
        Ok(base + self.integrate_offset(which, node.h, h)?)
    }

    /// `ds/dr` at `r = r₀ + h` (infinite at `h = 0`).
    pub fn dsdr_at_offset(&self, h: T) -> Result<T> {
        self.dsdr_offset(h)
    }

    /// `dz/dr` at `r = r₀ + h` (infinite at `h = 0`).
    pub fn dzdr_at_offset(&self, h: T) -> Result<T> {
        self.dzdr_offset(h)
    }

    /// Offsets `h` of the profile kinks, ascending.
    pub fn kink_offsets(&self) -> &[T] {
        &self.breaks
    }

    /// `dr/ds = √(1 − 2m_H/r^{n−2})`.
    pub fn drds(&self, r: T) -> Result<T> {
        let h = self.offset_of(r)?;
        Ok((self.gap(h)? / self.r_power(r)).sqrt())
    }

    /// `dz/dr = √((ds/dr)² − 1)`, singular at the horizon.
    pub fn dzdr(&self, r: T) -> Result<T> {
        let h = self.offset_of(r)?;
        if h == T::zero() {
            return Err(Error::SingularAtHorizon { r: to_f64(r) });
        }
        let v = self.dzdr_offset(h)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NumericalDomain {
                r: to_f64(r),
                radicand: 0.0,
            })
        }
    }

    /// Distance `s(r)` from the boundary to the sphere of radius `r`.
    pub fn arclength(&self, r: T) -> Result<T> {
        self.arclength_at_offset(self.offset_of(r)?)
    }

    /// `s(r₀ + h)`; prefer this near the horizon where `r − r₀` loses digits.
    pub fn arclength_at_offset(&self, h: T) -> Result<T> {
        self.coordinate_at_offset(Coordinate::Arclength, h)
    }

    /// Embedding height `z(r)` with `z(r₀) = 0`.
    pub fn height(&self, r: T) -> Result<T> {
        self.height_at_offset(self.offset_of(r)?)
    }

    /// `z(r₀ + h)`.
    pub fn height_at_offset(&self, h: T) -> Result<T> {
        self.coordinate_at_offset(Coordinate::Height, h)
    }

    /// Inverse of [`Self::arclength`].
    pub fn radius_at_arclength(&self, s: T) -> Result<T> {
        Ok(self.r0() + self.offset_at_arclength(s)?)
    }

    /// Offset `h` with `s(r₀ + h) = s`.
    pub fn offset_at_arclength(&self, s: T) -> Result<T> {
        self.invert(Coordinate::Arclength, s)
    }

    /// Inverse of [`Self::height`].
    pub fn radius_at_height(&self, z: T) -> Result<T> {
        Ok(self.r0() + self.offset_at_height(z)?)
    }

    /// Offset `h` with `z(r₀ + h) = z`.
    pub fn offset_at_height(&self, z: T) -> Result<T> {
        self.invert(Coordinate::Height, z)
    }

    fn invert(&self, which: Coordinate, target: T) -> Result<T> {
        let value = |n: &Node<T>| match which {
            Coordinate::Arclength => n.s,
            Coordinate::Height => n.z,
        };
        if !(target >= T::zero()) || !target.is_finite() {
            return Err(Error::OutOfDomain {
                value: to_f64(target),
                domain: "coordinate >= 0".into(),
            });
        }
        if target == T::zero() {
            return Ok(T::zero());
        }
        let k = self
            .nodes
            .partition_point(|n| value(n) <= target)
            .saturating_sub(1);
        let base = self.nodes[k];
        let hi = if k + 1 < self.nodes.len() {
            self.nodes[k + 1].h
        } else {
            self.extend_bracket(which, base, target)?
        };
        let lo = base.h;
        let residual = |u: T| -> Result<(T, T)> {
            let h = (u * u).max(lo);
            let v = value(&base) + self.integrate_offset(which, lo, h)? - target;
            let dv = lit::<T>(2.0) * u * self.integrand(which, h)?;
            Ok((v, dv))
        };
        let u = safeguarded_newton(residual, lo.sqrt(), hi.sqrt(), lit(1e-14), 300)?;
        Ok((u * u).max(lo).min(hi))
    }

    /// Upper bracket for an inversion past the cached table.
    fn extend_bracket(&self, which: Coordinate, base: Node<T>, target: T) -> Result<T> {
        let start = match which {
            Coordinate::Arclength => base.s,
            Coordinate::Height => base.z,
        };
        if which == Coordinate::Arclength {
            // ds/dr ≥ 1, so the sphere lies within (target − s) of the last node.
            return Ok(base.h + (target - start) + lit::<T>(1e-12) * (base.h + target));
        }
        let mut hi = base.h;
        for _ in 0..64 {
            hi = lit::<T>(2.0) * (hi + self.r0()) - self.r0();
            if start + self.integrate_offset(which, base.h, hi)? >= target {
                return Ok(hi);
            }
        }
        Err(Error::OutOfDomain {
            value: to_f64(target),
            domain: "heights reached by the embedding".into(),
        })
    }

    /// `R = 2(n−1) m_H′(r)/r^{n−1}`; fails exactly at a kink.
    pub fn scalar_curvature(&self, r: T) -> Result<T> {
        self.offset_of(r)?;
        let dm = self.profile.eval_dm_dr(r)?;
        Ok(self.curvature_from_slope(r, dm))
    }

    /// One-sided scalar curvature, defined at kinks too.
    pub fn scalar_curvature_side(&self, r: T, side: Side) -> Result<T> {
        self.offset_of(r)?;
        let dm = self.profile.eval_dm_dr_side(r, side)?;
        Ok(self.curvature_from_slope(r, dm))
    }

    fn curvature_from_slope(&self, r: T, dm: T) -> T {
        lit::<T>(2.0) * from_usize::<T>(self.n() - 1) * dm / r.powi((self.n() - 1) as i32)
    }

    /// Largest scalar curvature on `[r₀, r_max]`, as `(r, R)`: every piece is
    /// sampled and the best sample refined by golden-section search.
    pub fn max_scalar_curvature(&self, samples_per_piece: usize) -> Result<(T, T)> {
        let samples = samples_per_piece.max(3);
        let mut best = (
            self.r0(),
            self.scalar_curvature_side(self.r0(), Side::Right)?,
        );
        for piece in self.profile.pieces() {
            if piece.r_lo >= self.r_max {
                break;
            }
            let hi = piece.r_hi.min(self.r_max);
            let width = hi - piece.r_lo;
            let curvature = |r: T| -> Result<T> {
                let side = if r >= hi { Side::Left } else { Side::Right };
                self.scalar_curvature_side(r, side)
            };
            let mut local = (piece.r_lo, curvature(piece.r_lo)?);
            let mut at = 0usize;
            for k in 1..samples {
                let r = piece.r_lo + width * from_usize::<T>(k) / from_usize::<T>(samples - 1);
                let v = curvature(r)?;
                if v > local.1 {
                    local = (r, v);
                    at = k;
                }
            }
            let step = width / from_usize::<T>(samples - 1);
            let a = piece.r_lo + step * from_usize::<T>(at.saturating_sub(1));
            let b = (piece.r_lo + step * from_usize::<T>(at + 1)).min(hi);
            let refined = golden_max(&curvature, a, b, 80)?;
            if refined.1 > local.1 {
                local = refined;
            }
            if local.1 > best.1 {
                best = local;
            }
        }
        Ok(best)
    }

    /// ADM mass, read from the constant tail.
    pub fn adm_mass(&self) -> Result<T> {
        self.profile.tail_mass().ok_or(Error::UnboundedTail)
    }

    /// `ω_{n−1}`.
    pub fn unit_sphere_area(&self) -> T {
        unit_sphere_area(self.n() - 1)
    }

    /// `|Σ_r| = ω_{n−1} r^{n−1}`.
    pub fn area_of_sphere(&self, r: T) -> Result<T> {
        self.offset_of(r)?;
        Ok(self.unit_sphere_area() * r.powi((self.n() - 1) as i32))
    }

    /// `|∂M|`.
    pub fn boundary_area(&self) -> T {
        self.unit_sphere_area() * self.r0().powi((self.n() - 1) as i32)
    }

    /// Areal radius of the sphere with area `a ≥ |∂M|`.
    pub fn radius_of_area(&self, a: T) -> Result<T> {
        let boundary = self.boundary_area();
        let slack = lit::<T>(1e3) * T::epsilon() * boundary;
        if !(a >= boundary - slack) || !a.is_finite() {
            return Err(Error::OutOfDomain {
                value: to_f64(a),
                domain: format!("area >= |dM| = {}", to_f64(boundary)),
            });
        }
        let r = (a / self.unit_sphere_area()).powf(T::one() / from_usize::<T>(self.n() - 1));
        Ok(r.max(self.r0()))
    }

    /// Distance between the symmetric spheres of areas `a` and `b`.
    pub fn sphere_distance(&self, a: T, b: T) -> Result<T> {
        let s_a = self.arclength(self.radius_of_area(a)?)?;
        let s_b = self.arclength(self.radius_of_area(b)?)?;
        Ok((s_b - s_a).abs())
    }

    /// `T_D(Σ)` for the sphere of area `a`.
    pub fn tube(&self, a: T, d: T) -> Result<Tube<T>> {
        if !(d >= T::zero()) || !d.is_finite() {
            return Err(Error::InvalidInput(format!(
                "tube radius must be nonnegative, got {}",
                to_f64(d)
            )));
        }
        let center_r = self.radius_of_area(a)?;
        let center_s = self.arclength(center_r)?;
        let clipped = center_s - d < T::zero();
        let s_lo = if clipped { T::zero() } else { center_s - d };
        let s_hi = center_s + d;
        let r_lo = if d == T::zero() {
            center_r
        } else {
            self.radius_at_arclength(s_lo)?
        };
        let r_hi = if d == T::zero() {
            center_r
        } else {
            self.radius_at_arclength(s_hi)?
        };
        Ok(Tube {
            center_area: a,
            radius: d,
            center_r,
            center_s,
            r_interval: (r_lo, r_hi),
            s_interval: (s_lo, s_hi),
            clipped_at_boundary: clipped,
        })
    }

    /// `ω_{n−1}∫ r^{n−1} (ds/dr) dr` over the radial extent `[r_a, r_b]`.
    pub fn shell_volume(&self, r_a: T, r_b: T) -> Result<T> {
        let h_a = self.offset_of(r_a)?;
        let h_b = self.offset_of(r_b)?;
        let r0 = self.r0();
        let power = (self.n() - 1) as i32;
        let integral =
            self.integrate_split(
                h_a,
                h_b,
                |h| Ok((r0 + h).powi(power) * self.dsdr_offset(h)?),
            )?;
        Ok(self.unit_sphere_area() * integral)
    }

    pub fn tube_volume(&self, tube: &Tube<T>) -> Result<T> {
        self.shell_volume(tube.r_interval.0, tube.r_interval.1)
    }

    /// Total area of the two boundary spheres (the inner one is `∂M` when clipped).
    pub fn tube_boundary_area(&self, tube: &Tube<T>) -> Result<T> {
        Ok(self.area_of_sphere(tube.r_interval.0)? + self.area_of_sphere(tube.r_interval.1)?)
    }

    /// Upper bound on the intrinsic diameter of the tube: the shorter of the
    /// path through the centre sphere and the path through the outer sphere.
    pub fn tube_diameter_bound(&self, tube: &Tube<T>) -> T {
        let (s_lo, s_hi) = tube.s_interval;
        let reach = (s_hi - tube.center_s).max(tube.center_s - s_lo);
        let through_center = lit::<T>(2.0) * reach + T::PI() * tube.center_r;
        let through_outer = (s_hi - s_lo) + T::PI() * tube.r_interval.1;
        through_center.min(through_outer)
    }

    /// One row per cached radius: `r, s, z, dr/ds, m_H, R` (right-sided at kinks).
    pub fn embedding_rows(&self) -> Result<Vec<EmbeddingRow<T>>> {
        self.nodes
            .iter()
            .map(|node| {
                let r = self.r0() + node.h;
                Ok(EmbeddingRow {
                    r,
                    s: node.s,
                    z: node.z,
                    drds: (self.gap(node.h)? / self.r_power(r)).sqrt(),
                    m_hawking: self.profile.eval_m_hawking(r)?,
                    scalar_curvature: self.scalar_curvature_side(r, Side::Right)?,
                })
            })
            .collect()
    }
}

/// Ten times the largest radius the comparison machinery will look at.
fn default_r_max<T: Real>(profile: &AdmissibleProfile<T>) -> T {
    let r0 = profile.r0();
    let n = profile.n();
    let inv = T::one() / from_usize::<T>(n - 2);
    let mut r = r0;
    if let Some(m) = profile.tail_mass() {
        let r1 = (lit::<T>(2.0) * m).powf(inv);
        let delta = (m / profile.critical_mass(r0) - T::one())
            .max(T::zero())
            .min(T::one());
        let r_delta = (T::one() + delta.sqrt()).powf(inv) * r0;
        r = r.max(r1).max(r_delta);
    }
    if let Some(&last) = profile.breakpoints().last() {
        r = r.max(last);
    }
    lit::<T>(10.0) * r
}

fn golden_max<T, F>(f: &F, mut a: T, mut b: T, iterations: usize) -> Result<(T, T)>
where
    T: Real,
    F: Fn(T) -> Result<T>,
{
    let ratio = lit::<T>(0.5) * (lit::<T>(5.0).sqrt() - T::one());
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..iterations {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc > fd { (c, fc) } else { (d, fd) })
}
