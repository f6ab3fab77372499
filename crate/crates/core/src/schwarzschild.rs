//! Schwarzschild space `M_Sch(m)` and the appended space `M_Sch(m, L)`: a
//! cylinder `[−L, 0] × S^{n−1}(r₀)` glued to the horizon.
//!
//! Vertical coordinates put the horizon at `z = 0` and the cylinder at
//! `z ∈ [−L, 0]`. The appended arclength `σ` is the signed distance from the
//! horizon: `σ = z` on the cylinder and `σ = s(r)` on the Schwarzschild part.

use crate::error::{Error, Result};
use crate::geometry::{EmbeddingRow, GeometryOptions, RotSymManifold};
use crate::profiles::{AdmissibleProfile, ProfilePiece};
use crate::scalar::{from_usize, lit, to_f64, Real};

/// A point of `M_Sch(m, L)` up to its position on the symmetric sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AppendedPoint<T> {
    /// On the cylinder, `−L ≤ z < 0`.
    Cylinder { z: T },
    /// On the Schwarzschild part, `z = z_Sch(r) ≥ 0`.
    Schwarzschild { r: T, z: T },
}

impl<T: Real> AppendedPoint<T> {
    pub fn z(&self) -> T {
        match *self {
            AppendedPoint::Cylinder { z } | AppendedPoint::Schwarzschild { z, .. } => z,
        }
    }
}

/// Tube around a symmetric sphere of `M_Sch(m, L)`, measured in appended arclength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppendedTube<T> {
    pub center_area: T,
    pub radius: T,
    pub center_r: T,
    pub center_sigma: T,
    pub sigma_interval: (T, T),
    /// Areal radius of the outer boundary sphere.
    pub r_outer: T,
    /// Length of cylinder inside the tube.
    pub cylinder_length: T,
    /// The tube is cut off by the bottom of the cylinder.
    pub clipped_at_bottom: bool,
    pub volume: T,
    pub boundary_area: T,
    pub diameter_bound: T,
}

/// `M_Sch(m, L)`.
#[derive(Debug, Clone)]
pub struct AppendedSchwarzschild<T> {
    mass: T,
    length: T,
    model: RotSymManifold<T>,
}

impl<T: Real> AppendedSchwarzschild<T> {
    /// `M_Sch(m, L)` in dimension `n`.
    pub fn new(n: usize, m: T, length: T, opts: GeometryOptions<T>) -> Result<Self> {
        if !(m > T::zero() && m.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "mass must be positive, got {}",
                to_f64(m)
            )));
        }
        if n < 3 {
            return Err(Error::InvalidInput(format!(
                "dimension n = {n} must be at least 3"
            )));
        }
        let r0 = (lit::<T>(2.0) * m).powf(T::one() / from_usize::<T>(n - 2));
        Self::with_horizon_radius(n, r0, length, opts)
    }

    /// `M_Sch(m, L)` with `m = ½ r₀^{n−2}`, keeping `r₀` bit-for-bit.
    pub fn with_horizon_radius(
        n: usize,
        r0: T,
        length: T,
        opts: GeometryOptions<T>,
    ) -> Result<Self> {
        if !(length >= T::zero() && length.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "cylinder length must be nonnegative, got {}",
                to_f64(length)
            )));
        }
        let mass = lit::<T>(0.5) * r0.powi(n as i32 - 2);
        let profile =
            AdmissibleProfile::new(n, r0, vec![ProfilePiece::constant(mass, r0, T::infinity())])?;
        let opts = GeometryOptions {
            r_max: Some(opts.r_max.unwrap_or(lit::<T>(100.0) * r0)),
            ..opts
        };
        let model = RotSymManifold::new(profile, opts)?;
        Ok(Self {
            mass,
            length,
            model,
        })
    }

    pub fn n(&self) -> usize {
        self.model.n()
    }

    pub fn mass(&self) -> T {
        self.mass
    }

    /// Cylinder length `L`.
    pub fn cylinder_length(&self) -> T {
        self.length
    }

    pub fn r0(&self) -> T {
        self.model.r0()
    }

    pub fn quad_tol(&self) -> T {
        self.model.quad_tol()
    }

    /// The Schwarzschild part as a [`RotSymManifold`] with constant profile.
    pub fn model(&self) -> &RotSymManifold<T> {
        &self.model
    }

    pub fn boundary_area(&self) -> T {
        self.model.boundary_area()
    }

    /// `z_Sch(r) = ∫_{r₀}^r √(2m/(t^{n−2} − 2m)) dt`; closed form `√(8m(r − r₀))` for `n = 3`.
    pub fn z_sch(&self, r: T) -> Result<T> {
        self.check_radius(r)?;
        self.z_sch_at_offset(r - self.r0())
    }

    /// `z_Sch(r₀ + h)`.
    pub fn z_sch_at_offset(&self, h: T) -> Result<T> {
        if self.n() == 3 {
            if !(h >= T::zero()) {
                return Err(Error::OutOfDomain {
                    value: to_f64(h),
                    domain: "offset >= 0".into(),
                });
            }
            Ok((lit::<T>(8.0) * self.mass * h).sqrt())
        } else {
            self.model.height_at_offset(h)
        }
    }

    /// `z_Sch(r)` by quadrature in every dimension.
    pub fn z_sch_quadrature(&self, r: T) -> Result<T> {
        self.model.height(r)
    }

    /// Inverse of `z_Sch`, extended by `r₀` on the cylinder.
    pub fn r_sch(&self, z: T) -> Result<T> {
        Ok(self.r0() + self.offset_sch(z)?)
    }

    /// Offset `h = r_Sch(z) − r₀` (zero on the cylinder).
    pub fn offset_sch(&self, z: T) -> Result<T> {
        self.check_height(z)?;
        if z <= T::zero() {
            return Ok(T::zero());
        }
        if self.n() == 3 {
            return Ok(z * z / (lit::<T>(8.0) * self.mass));
        }
        self.model.offset_at_height(z)
    }

    fn check_radius(&self, r: T) -> Result<()> {
        if r >= self.r0() && r.is_finite() {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                value: to_f64(r),
                domain: format!("r >= r0 = {}", to_f64(self.r0())),
            })
        }
    }

    fn check_height(&self, z: T) -> Result<()> {
        if z >= -self.length && z.is_finite() {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                value: to_f64(z),
                domain: format!("z >= -L = {}", to_f64(-self.length)),
            })
        }
    }

    /// `g_rr = (1 − 2m/r^{n−2})^{−1}`.
    pub fn metric_coeff_radial(&self, r: T) -> Result<T> {
        self.check_radius(r)?;
        let h = r - self.r0();
        if h == T::zero() {
            return Err(Error::SingularAtHorizon { r: to_f64(r) });
        }
        Ok(self.model.dsdr_at_offset(h)?.powi(2))
    }

    /// `g_zz = r(z)^{n−2}/(2m)` on the Schwarzschild part, `1` on the cylinder.
    pub fn metric_coeff_vertical(&self, z: T) -> Result<T> {
        self.check_height(z)?;
        if z < T::zero() {
            return Ok(T::one());
        }
        let r = self.r_sch(z)?;
        Ok(r.powi(self.n() as i32 - 2) / (lit::<T>(2.0) * self.mass))
    }

    /// Warping factor `r(z)²` of the round metric.
    pub fn sphere_factor(&self, z: T) -> Result<T> {
        Ok(self.r_sch(z)?.powi(2))
    }

    /// The point at height `z`.
    pub fn point_at_height(&self, z: T) -> Result<AppendedPoint<T>> {
        self.check_height(z)?;
        if z < T::zero() {
            Ok(AppendedPoint::Cylinder { z })
        } else {
            Ok(AppendedPoint::Schwarzschild {
                r: self.r_sch(z)?,
                z,
            })
        }
    }

    /// Signed distance `σ` from the horizon.
    pub fn sigma(&self, p: &AppendedPoint<T>) -> Result<T> {
        match *p {
            AppendedPoint::Cylinder { z } => {
                self.check_height(z)?;
                Ok(z)
            }
            AppendedPoint::Schwarzschild { r, .. } => self.model.arclength(r),
        }
    }

    /// Point at signed distance `σ ≥ −L` from the horizon.
    pub fn point_at_sigma(&self, sigma: T) -> Result<AppendedPoint<T>> {
        self.check_height(sigma)?;
        if sigma < T::zero() {
            return Ok(AppendedPoint::Cylinder { z: sigma });
        }
        let h = self.model.offset_at_arclength(sigma)?;
        Ok(AppendedPoint::Schwarzschild {
            r: self.r0() + h,
            z: self.z_sch_at_offset(h)?,
        })
    }

    fn areal_radius(&self, p: &AppendedPoint<T>) -> T {
        match *p {
            AppendedPoint::Cylinder { .. } => self.r0(),
            AppendedPoint::Schwarzschild { r, .. } => r,
        }
    }

    /// Tube of radius `D` around the Schwarzschild sphere of area `a`.
    pub fn tube_in_appended(&self, a: T, d: T) -> Result<AppendedTube<T>> {
        if !(d >= T::zero()) || !d.is_finite() {
            return Err(Error::InvalidInput(format!(
                "tube radius must be nonnegative, got {}",
                to_f64(d)
            )));
        }
        let center_r = self.model.radius_of_area(a)?;
        let center_sigma = self.model.arclength(center_r)?;
        let clipped = center_sigma - d < -self.length;
        let sigma_lo = if clipped {
            -self.length
        } else {
            center_sigma - d
        };
        let sigma_hi = center_sigma + d;
        let lo = self.point_at_sigma(sigma_lo)?;
        let hi = self.point_at_sigma(sigma_hi)?;
        let r_lo = self.areal_radius(&lo);
        let r_outer = self.areal_radius(&hi);

        let cylinder_length = (-sigma_lo).max(T::zero());
        let volume =
            self.model.shell_volume(r_lo, r_outer)? + cylinder_length * self.boundary_area();
        let boundary_area =
            self.model.area_of_sphere(r_lo)? + self.model.area_of_sphere(r_outer)?;
        let reach = (sigma_hi - center_sigma).max(center_sigma - sigma_lo);
        let diameter_bound = (lit::<T>(2.0) * reach + T::PI() * center_r)
            .min(sigma_hi - sigma_lo + T::PI() * r_outer);
        Ok(AppendedTube {
            center_area: a,
            radius: d,
            center_r,
            center_sigma,
            sigma_interval: (sigma_lo, sigma_hi),
            r_outer,
            cylinder_length,
            clipped_at_bottom: clipped,
            volume,
            boundary_area,
            diameter_bound,
        })
    }

    /// Embedding table: `cylinder_rows` evenly spaced rows on `[−L, 0)` (with
    /// `s = z`), followed by the Schwarzschild table.
    pub fn embedding_rows(&self, cylinder_rows: usize) -> Result<Vec<EmbeddingRow<T>>> {
        let mut rows = Vec::new();
        if self.length > T::zero() {
            for k in 0..cylinder_rows {
                let z = -self.length
                    + self.length * from_usize::<T>(k) / from_usize::<T>(cylinder_rows);
                rows.push(EmbeddingRow {
                    r: self.r0(),
                    s: z,
                    z,
                    drds: T::zero(),
                    m_hawking: self.mass,
                    scalar_curvature: T::zero(),
                });
            }
        }
        for mut row in self.model.embedding_rows()? {
            if self.n() == 3 {
                row.z = self.z_sch(row.r)?;
            }
            rows.push(row);
        }
        Ok(rows)
    }
}
