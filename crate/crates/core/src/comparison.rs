//! Comparison of a manifold `M` with the appended Schwarzschild space
//! `M_Sch(m₀, L)` of the same boundary area.
//!
//! With `m₀ = ½ r₀^{n−2}` and `m_ADM = (1+δ) m₀`, the two spaces are embedded
//! as rotational graphs meeting on the sphere `r = r_δ`, `r_δ^{n−2} =
//! (1+δ^p) r₀^{n−2}`. The depth `L` is how far `∂M` then hangs below the
//! horizon of `M_Sch(m₀)`; a cylinder of that length is appended.
//!
//! The map `φ: M → M_Sch(m₀, L)` keeps `r` outside `r_δ` and keeps `z` inside,
//! and is the identity on the sphere directions. It is block diagonal in
//! (radial, tangential) directions, so its metric distortion is controlled by
//! two ratios per point.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{GeometryOptions, RotSymManifold};
use crate::scalar::{from_usize, lit, to_f64, Real};
use crate::schwarzschild::{AppendedPoint, AppendedSchwarzschild};

/// Options for [`ComparisonSetup::new`].
#[derive(Debug, Clone, Copy)]
pub struct ComparisonOptions<T> {
    /// Exponent `p` in `r_δ^{n−2} = (1+δ^p) r₀^{n−2}`; any `p ∈ (0, 1)` works.
    pub rdelta_exponent: T,
}

impl<T: Real> Default for ComparisonOptions<T> {
    fn default() -> Self {
        Self {
            rdelta_exponent: lit(0.5),
        }
    }
}

/// Which side of `r_δ` a point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// `r ≤ r_δ`, mapped horizontally (same `z`).
    Inner,
    /// `r ≥ r_δ`, mapped vertically (same `r`).
    Outer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Radial,
    Tangential,
    Mixed,
}

/// One sampled ratio `g(v,v) / g_Sch,L(φ_*v, φ_*v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistortionSample<T> {
    pub region: Region,
    pub r: T,
    /// Height of the point in the anchored embedding of `M`.
    pub z: T,
    pub direction: Direction,
    pub ratio: T,
}

/// `δ`, the radii built from it, the depth and the appended model space.
#[derive(Debug, Clone)]
pub struct ComparisonSetup<T> {
    manifold: RotSymManifold<T>,
    model: AppendedSchwarzschild<T>,
    pub delta: T,
    pub m0: T,
    pub r0: T,
    pub r1: T,
    pub r_delta: T,
    pub a_delta: T,
    /// Depth `L ≥ 0`.
    pub depth: T,
    /// Depth before clamping quadrature noise below zero.
    pub depth_unclamped: T,
    /// Additive constant turning the internal heights of `M` (zero at `∂M`)
    /// into heights in the common embedding; equals `−L`.
    pub z_anchor: T,
    pub rdelta_exponent: T,
}

/// Metric comparison at one point of `M`.
struct BlockRatios<T> {
    region: Region,
    /// Height in the common embedding.
    z: T,
    /// Radial ratio; `None` at the horizon where both radial metrics blow up.
    radial: Option<T>,
    tangential: T,
    /// Radial coefficient of `M`, of the image, then the sphere factors of both.
    metric: Option<(T, T, T, T)>,
}

/// Absolute slack on distortion certification and depth sign.
const CERTIFY_SLACK: f64 = 1e-9;

impl<T: Real> ComparisonSetup<T> {
    pub fn new(manifold: RotSymManifold<T>, opts: ComparisonOptions<T>) -> Result<Self> {
        let p = opts.rdelta_exponent;
        if !(p > T::zero() && p < T::one()) {
            return Err(Error::InvalidInput(format!(
                "r_delta exponent must lie in (0, 1), got {}",
                to_f64(p)
            )));
        }
        let n = manifold.n();
        let r0 = manifold.r0();
        let m0 = manifold.profile().critical_mass(r0);
        let m_adm = manifold.adm_mass()?;
        let delta = check_delta(m_adm / m0 - T::one())?;
        let inv = T::one() / from_usize::<T>(n - 2);
        let r1 = (T::one() + delta).powf(inv) * r0;
        let r_delta = (T::one() + delta.powf(p)).powf(inv) * r0;
        let a_delta = manifold.unit_sphere_area() * r_delta.powi(n as i32 - 1);

        let geometry = GeometryOptions {
            quad_tol: manifold.quad_tol(),
            grid_points: 2048,
            r_max: Some(manifold.r_max()),
        };
        let reference = AppendedSchwarzschild::with_horizon_radius(n, r0, T::zero(), geometry)?;
        let depth_unclamped = compute_depth(&manifold, &reference, r_delta - r0)?;
        if depth_unclamped < lit(-CERTIFY_SLACK) {
            return Err(Error::Inadmissible(format!(
                "negative depth {}",
                to_f64(depth_unclamped)
            )));
        }
        let depth = depth_unclamped.max(T::zero());
        let model = AppendedSchwarzschild::with_horizon_radius(n, r0, depth, geometry)?;
        Ok(Self {
            manifold,
            model,
            delta,
            m0,
            r0,
            r1,
            r_delta,
            a_delta,
            depth,
            depth_unclamped,
            z_anchor: -depth,
            rdelta_exponent: p,
        })
    }

    pub fn manifold(&self) -> &RotSymManifold<T> {
        &self.manifold
    }

    /// `M_Sch(m₀, L)`.
    pub fn model(&self) -> &AppendedSchwarzschild<T> {
        &self.model
    }

    pub fn n(&self) -> usize {
        self.manifold.n()
    }

    /// `h_δ` for this setup's `δ` and exponent.
    pub fn h_delta(&self) -> T {
        h_delta_with_exponent(self.delta, self.n(), self.rdelta_exponent)
            .expect("delta checked at setup")
    }

    /// Height of the sphere `r` of `M` in the common embedding.
    pub fn anchored_height(&self, r: T) -> Result<T> {
        Ok(self.manifold.height(r)? + self.z_anchor)
    }

    fn region_of(&self, r: T) -> Region {
        if r >= self.r_delta {
            Region::Outer
        } else {
            Region::Inner
        }
    }

    /// `φ` applied to the sphere of radius `r` in `M`.
    pub fn phi(&self, r: T) -> Result<AppendedPoint<T>> {
        if !(r >= self.r0) {
            return Err(Error::OutOfDomain {
                value: to_f64(r),
                domain: format!("r >= r0 = {}", to_f64(self.r0)),
            });
        }
        match self.region_of(r) {
            Region::Outer => Ok(AppendedPoint::Schwarzschild {
                r,
                z: self.model.z_sch(r)?,
            }),
            Region::Inner => self
                .model
                .point_at_height(self.anchored_height(r)?.max(-self.depth)),
        }
    }

    /// Radius in `M` of the preimage of `p`.
    pub fn phi_inverse(&self, p: &AppendedPoint<T>) -> Result<T> {
        let z = match *p {
            AppendedPoint::Schwarzschild { r, .. } if r >= self.r_delta => return Ok(r),
            AppendedPoint::Schwarzschild { r, .. } => self.model.z_sch(r)?,
            AppendedPoint::Cylinder { z } => z,
        };
        self.manifold
            .radius_at_height((z - self.z_anchor).max(T::zero()))
    }

    /// Radial and tangential ratios at `r₀ + h`.
    fn block_ratios(&self, h: T) -> Result<BlockRatios<T>> {
        let n = self.n() as i32;
        let r = self.r0 + h;
        let profile = self.manifold.profile();
        match self.region_of(r) {
            Region::Outer => {
                let gap_m = profile.criticality_gap(h);
                let gap_sch = self.model.model().profile().criticality_gap(h);
                let z = self.manifold.height_at_offset(h)? + self.z_anchor;
                if gap_m <= T::zero() {
                    return Ok(BlockRatios {
                        region: Region::Outer,
                        z,
                        radial: None,
                        tangential: T::one(),
                        metric: None,
                    });
                }
                // g_rr of M and of Schwarzschild share the factor r^{n−2}
                let rr = r.powi(n - 2);
                let radial_m = rr / gap_m;
                let radial_s = rr / gap_sch;
                let metric = Some((radial_m, radial_s, r * r, r * r));
                Ok(BlockRatios {
                    region: Region::Outer,
                    z,
                    radial: Some(gap_sch / gap_m),
                    tangential: T::one(),
                    metric,
                })
            }
            Region::Inner => {
                let z = (self.manifold.height_at_offset(h)? + self.z_anchor).max(-self.depth);
                let two = lit::<T>(2.0);
                let gzz_m = r.powi(n - 2) / (two * profile.eval_m_hawking(r)?);
                let (r_img, gzz_img) = if z < T::zero() {
                    (self.r0, T::one())
                } else {
                    let r_img = self.r0 + self.model.offset_sch(z)?;
                    (r_img, r_img.powi(n - 2) / (two * self.m0))
                };
                let tangential = (r / r_img).powi(2);
                let metric = Some((gzz_m, gzz_img, r * r, r_img * r_img));
                Ok(BlockRatios {
                    region: Region::Inner,
                    z,
                    radial: Some(gzz_m / gzz_img),
                    tangential,
                    metric,
                })
            }
        }
    }

    /// `g(v,v)/g_Sch,L(φ_*v, φ_*v)` for a unit radial or tangential `v` at radius `r`.
    pub fn distortion_ratio(&self, r: T, direction: Direction) -> Result<T> {
        if !(r >= self.r0) {
            return Err(Error::OutOfDomain {
                value: to_f64(r),
                domain: format!("r >= r0 = {}", to_f64(self.r0)),
            });
        }
        let BlockRatios {
            radial, tangential, ..
        } = self.block_ratios(r - self.r0)?;
        match direction {
            Direction::Radial => radial.ok_or(Error::SingularAtHorizon { r: to_f64(r) }),
            Direction::Tangential => Ok(tangential),
            Direction::Mixed => Err(Error::InvalidInput(
                "a mixed direction needs explicit components".into(),
            )),
        }
    }

    /// Samples the distortion of `φ` on both regions.
    pub fn certify(&self, opts: &CertifyOptions) -> Result<DistortionReport<T>> {
        let points = opts.points_per_region.max(2);
        let h_delta_offset = self.r_delta - self.r0;
        let mut jobs: Vec<(Region, usize, T)> = Vec::with_capacity(2 * points);
        if h_delta_offset > T::zero() {
            let u_max = h_delta_offset.sqrt();
            for k in 0..points {
                let u = u_max * from_usize::<T>(k) / from_usize::<T>(points);
                jobs.push((Region::Inner, k, u * u));
            }
        }
        let ratio = self.manifold.r_max() / self.r_delta;
        for k in 0..points {
            let t = from_usize::<T>(k) / from_usize::<T>(points - 1);
            let r = self.r_delta * ratio.powf(t);
            let h = if k == 0 { h_delta_offset } else { r - self.r0 };
            jobs.push((Region::Outer, k, h));
        }

        let slack = lit::<T>(1e-12);
        let per_point: Vec<Result<PointOutcome<T>>> = jobs
            .par_iter()
            .map(|&(expected, index, h)| {
                let BlockRatios {
                    region,
                    z,
                    radial,
                    tangential,
                    metric: comps,
                } = self.block_ratios(h)?;
                debug_assert!(region == expected || h == h_delta_offset);
                let r = self.r0 + h;
                let mut samples = Vec::with_capacity(2);
                if let Some(radial) = radial {
                    samples.push(DistortionSample {
                        region,
                        r,
                        z,
                        direction: Direction::Radial,
                        ratio: radial,
                    });
                }
                samples.push(DistortionSample {
                    region,
                    r,
                    z,
                    direction: Direction::Tangential,
                    ratio: tangential,
                });
                let mut mixed = MixedStats::default();
                if let (Some(radial), Some((a_m, a_img, b_m, b_img))) = (radial, comps) {
                    let stream = ((expected == Region::Outer) as u64) << 32 | index as u64;
                    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                    rng.set_stream(stream);
                    let lo = radial.min(tangential);
                    let hi = radial.max(tangential);
                    for _ in 0..opts.mixed_directions {
                        let alpha: f64 = rng.gen_range(-1.0..1.0);
                        let beta: f64 = rng.gen_range(-1.0..1.0);
                        let (alpha, beta) = (lit::<T>(alpha * alpha), lit::<T>(beta * beta));
                        let ratio = (a_m * alpha + b_m * beta) / (a_img * alpha + b_img * beta);
                        mixed.checked += 1;
                        if ratio < lo * (T::one() - slack) || ratio > hi * (T::one() + slack) {
                            mixed.violations += 1;
                        }
                        mixed.max = mixed.max.max(to_f64(ratio));
                        mixed.min = mixed.min.min(to_f64(ratio));
                    }
                }
                Ok(PointOutcome { samples, mixed })
            })
            .collect();

        let h_delta = self.h_delta();
        let mut samples = Vec::with_capacity(2 * jobs.len());
        let mut mixed_checked = 0;
        let mut mixed_violations = 0;
        let mut mixed_max = f64::NEG_INFINITY;
        let mut mixed_min = f64::INFINITY;
        for outcome in per_point {
            let outcome = outcome?;
            samples.extend(outcome.samples);
            mixed_checked += outcome.mixed.checked;
            mixed_violations += outcome.mixed.violations;
            mixed_max = mixed_max.max(outcome.mixed.max);
            mixed_min = mixed_min.min(outcome.mixed.min);
        }
        let mut max_ratio = samples
            .iter()
            .map(|s| s.ratio)
            .fold(T::neg_infinity(), T::max);
        let mut min_ratio = samples.iter().map(|s| s.ratio).fold(T::infinity(), T::min);
        if mixed_checked > 0 {
            max_ratio = max_ratio.max(lit(mixed_max));
            min_ratio = min_ratio.min(lit(mixed_min));
        }
        let worst_sample = *samples
            .iter()
            .max_by(|a, b| {
                let da = a.ratio.ln().abs();
                let db = b.ratio.ln().abs();
                da.partial_cmp(&db).expect("finite ratios")
            })
            .expect("at least one sample");
        let slack = lit::<T>(CERTIFY_SLACK);
        let certified = max_ratio <= h_delta + slack
            && min_ratio >= T::one() / h_delta - slack
            && mixed_violations == 0;
        Ok(DistortionReport {
            delta: self.delta,
            h_delta,
            lip_bound: h_delta.ln(),
            depth: self.depth,
            max_ratio,
            min_ratio,
            certified,
            worst_sample,
            mixed_checked,
            mixed_violations,
            samples,
        })
    }
}

#[derive(Debug, Clone, Copy)]
struct MixedStats {
    checked: usize,
    violations: usize,
    max: f64,
    min: f64,
}

impl Default for MixedStats {
    fn default() -> Self {
        Self {
            checked: 0,
            violations: 0,
            max: f64::NEG_INFINITY,
            min: f64::INFINITY,
        }
    }
}

struct PointOutcome<T> {
    samples: Vec<DistortionSample<T>>,
    mixed: MixedStats,
}

/// Sampling density for [`ComparisonSetup::certify`].
#[derive(Debug, Clone, Copy)]
pub struct CertifyOptions {
    pub points_per_region: usize,
    pub mixed_directions: usize,
    pub seed: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            points_per_region: 4096,
            mixed_directions: 64,
            seed: 0,
        }
    }
}

/// Sampled distortion of `φ` against the bound `h_δ`.
#[derive(Debug, Clone, Serialize)]
pub struct DistortionReport<T> {
    pub delta: T,
    pub h_delta: T,
    /// `log h_δ`, an upper bound on the Lipschitz distance.
    pub lip_bound: T,
    pub depth: T,
    pub max_ratio: T,
    pub min_ratio: T,
    pub certified: bool,
    pub worst_sample: DistortionSample<T>,
    pub mixed_checked: usize,
    /// Mixed-direction ratios falling outside their radial/tangential bracket.
    pub mixed_violations: usize,
    #[serde(skip)]
    pub samples: Vec<DistortionSample<T>>,
}

fn check_delta<T: Real>(delta: T) -> Result<T> {
    if delta.is_nan() || delta >= T::one() || delta < lit(-1e-12) {
        return Err(Error::DeltaOutOfRange {
            delta: to_f64(delta),
        });
    }
    Ok(delta.max(T::zero()))
}

/// `L = ∫_{r₀}^{r_δ} (dz_M/dr − dz_Sch/dr) dr`, integrated as one difference
/// so that an exact Schwarzschild collar contributes exactly zero.
fn compute_depth<T: Real>(
    manifold: &RotSymManifold<T>,
    reference: &AppendedSchwarzschild<T>,
    h_delta: T,
) -> Result<T> {
    let schwarzschild = reference.model();
    manifold.integrate_split(T::zero(), h_delta, |h| {
        Ok(manifold.dzdr_at_offset(h)? - schwarzschild.dzdr_at_offset(h)?)
    })
}

/// `h_δ = max{(1+√δ)^{2/(n−2)}, (1+√δ)(1+δ), (1−√δ)^{−1}}`.
pub fn h_delta<T: Real>(delta: T, n: usize) -> Result<T> {
    h_delta_with_exponent(delta, n, lit(0.5))
}

/// `h_δ` for `r_δ^{n−2} = (1+δ^p) r₀^{n−2}`:
/// `max{(1+δ^p)^{2/(n−2)}, (1+δ^p)(1+δ), (1−δ^{1−p})^{−1}}`.
pub fn h_delta_with_exponent<T: Real>(delta: T, n: usize, p: T) -> Result<T> {
    if delta.is_nan() || delta < T::zero() || delta >= T::one() {
        return Err(Error::DeltaOutOfRange {
            delta: to_f64(delta),
        });
    }
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "dimension n = {n} must be at least 3"
        )));
    }
    let dp = delta.powf(p);
    let tangential = (T::one() + dp).powf(lit::<T>(2.0) / from_usize::<T>(n - 2));
    let inner_radial = (T::one() + dp) * (T::one() + delta);
    let outer_radial = T::one() / (T::one() - delta.powf(T::one() - p));
    Ok(tangential.max(inner_radial).max(outer_radial))
}
