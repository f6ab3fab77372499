//! Hawking mass profiles `m_H(r)` on `[r₀, ∞)`.
//!
//! An admissible profile is nondecreasing, equals the critical value
//! `½ r₀^{n−2}` at the horizon and stays strictly below `½ r^{n−2}` beyond it.
//! Every such profile generates exactly one rotationally symmetric manifold
//! with minimal boundary, so profiles are the generating data for
//! [`crate::geometry::RotSymManifold`].
//!
//! Profiles are piecewise: constant pieces, "fraction of critical" pieces
//! `½ r^{n−2}(1−ε)`, and C¹ cubic blends between two such neighbours.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::roots::bisect;
use crate::scalar::{from_usize, lit, pow_difference, to_f64, unit_sphere_area, Real};

/// Functional form of one piece of a profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PieceKind<T> {
    /// `m_H ≡ mass`.
    Constant { mass: T },
    /// `m_H = ½ r^{n−2}(1−ε)`, i.e. `dr/ds ≡ √ε`.
    FractionOfMax { epsilon: T },
    /// Hermite cubic matching value and slope of both neighbours; `width = r_hi − r_lo`.
    MollifiedJoin { width: T },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePiece<T> {
    pub kind: PieceKind<T>,
    pub r_lo: T,
    /// `+∞` for the last piece.
    pub r_hi: T,
}

impl<T: Real> ProfilePiece<T> {
    pub fn constant(mass: T, r_lo: T, r_hi: T) -> Self {
        Self {
            kind: PieceKind::Constant { mass },
            r_lo,
            r_hi,
        }
    }

    pub fn fraction_of_max(epsilon: T, r_lo: T, r_hi: T) -> Self {
        Self {
            kind: PieceKind::FractionOfMax { epsilon },
            r_lo,
            r_hi,
        }
    }

    pub fn mollified_join(r_lo: T, r_hi: T) -> Self {
        Self {
            kind: PieceKind::MollifiedJoin { width: r_hi - r_lo },
            r_lo,
            r_hi,
        }
    }
}

/// Which side of a breakpoint a one-sided derivative is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Hermite<T> {
    a: T,
    width: T,
    y0: T,
    y1: T,
    d0: T,
    d1: T,
}

impl<T: Real> Hermite<T> {
    fn value(&self, r: T) -> T {
        let t = (r - self.a) / self.width;
        let t2 = t * t;
        let t3 = t2 * t;
        let two = lit::<T>(2.0);
        let three = lit::<T>(3.0);
        let h00 = two * t3 - three * t2 + T::one();
        let h10 = t3 - two * t2 + t;
        let h01 = three * t2 - two * t3;
        let h11 = t3 - t2;
        h00 * self.y0 + h10 * self.width * self.d0 + h01 * self.y1 + h11 * self.width * self.d1
    }

    fn slope(&self, r: T) -> T {
        let t = (r - self.a) / self.width;
        let t2 = t * t;
        let six = lit::<T>(6.0);
        let dh00 = six * (t2 - t);
        let dh10 = lit::<T>(3.0) * t2 - lit::<T>(4.0) * t + T::one();
        let dh11 = lit::<T>(3.0) * t2 - lit::<T>(2.0) * t;
        dh00 * (self.y0 - self.y1) / self.width + dh10 * self.d0 + dh11 * self.d1
    }
}

/// Piecewise Hawking mass function. Construction only checks structure;
/// admissibility is reported by [`validate_profile`].
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibleProfile<T> {
    n: usize,
    r0: T,
    pieces: Vec<ProfilePiece<T>>,
    blends: Vec<Option<Hermite<T>>>,
    // r₀^{n−2} − 2 m_H(r₀) on the first piece, snapped to zero when it is rounding noise.
    horizon_offset: T,
}

impl<T: Real> AdmissibleProfile<T> {
    /// Builds a profile from ordered pieces tiling `[r0, ∞)`.
    pub fn new(n: usize, r0: T, mut pieces: Vec<ProfilePiece<T>>) -> Result<Self> {
        if n < 3 {
            return Err(Error::MalformedPieces(format!(
                "dimension n = {n} must be at least 3"
            )));
        }
        if !(r0.is_finite() && r0 > T::zero()) {
            return Err(Error::MalformedPieces(format!(
                "r0 = {} must be positive",
                to_f64(r0)
            )));
        }
        if pieces.is_empty() {
            return Err(Error::MalformedPieces("no pieces".into()));
        }
        let snap = lit::<T>(1e3) * T::epsilon();
        let close = |a: T, b: T| (a - b).abs() <= snap * a.abs().max(b.abs());
        if !close(pieces[0].r_lo, r0) {
            return Err(Error::MalformedPieces(format!(
                "first piece starts at {} instead of r0 = {}",
                to_f64(pieces[0].r_lo),
                to_f64(r0)
            )));
        }
        pieces[0].r_lo = r0;
        let count = pieces.len();
        for i in 0..count {
            let p = pieces[i];
            let last = i + 1 == count;
            if last {
                if p.r_hi != T::infinity() {
                    return Err(Error::MalformedPieces(
                        "last piece must extend to infinity".into(),
                    ));
                }
            } else {
                if !p.r_hi.is_finite() {
                    return Err(Error::MalformedPieces(format!(
                        "piece {i} is unbounded but not last"
                    )));
                }
                let next_lo = pieces[i + 1].r_lo;
                if !close(p.r_hi, next_lo) {
                    return Err(Error::MalformedPieces(format!(
                        "gap or overlap between piece {i} (ends {}) and piece {} (starts {})",
                        to_f64(p.r_hi),
                        i + 1,
                        to_f64(next_lo)
                    )));
                }
                pieces[i + 1].r_lo = p.r_hi;
            }
            if !(p.r_lo.is_finite() && p.r_lo < p.r_hi) {
                return Err(Error::MalformedPieces(format!(
                    "piece {i} has empty range [{}, {}]",
                    to_f64(p.r_lo),
                    to_f64(p.r_hi)
                )));
            }
            match p.kind {
                PieceKind::Constant { mass } => {
                    if !(mass.is_finite() && mass >= T::zero()) {
                        return Err(Error::MalformedPieces(format!(
                            "piece {i}: mass must be finite and nonnegative"
                        )));
                    }
                }
                PieceKind::FractionOfMax { epsilon } => {
                    if !(epsilon > T::zero() && epsilon < T::one()) {
                        return Err(Error::MalformedPieces(format!(
                            "piece {i}: epsilon = {} must lie in (0, 1)",
                            to_f64(epsilon)
                        )));
                    }
                }
                PieceKind::MollifiedJoin { width } => {
                    if i == 0 || last {
                        return Err(Error::MalformedPieces(format!(
                            "piece {i}: a mollified join needs a neighbour on each side"
                        )));
                    }
                    let span = p.r_hi - p.r_lo;
                    if !(width > T::zero()) || (width - span).abs() > snap * span.max(p.r_hi) {
                        return Err(Error::MalformedPieces(format!(
                            "piece {i}: width {} does not match its range {}",
                            to_f64(width),
                            to_f64(span)
                        )));
                    }
                    pieces[i].kind = PieceKind::MollifiedJoin { width: span };
                }
            }
        }
        for i in 1..count.saturating_sub(1) {
            let is_join = |k: usize| matches!(pieces[k].kind, PieceKind::MollifiedJoin { .. });
            if is_join(i) && (is_join(i - 1) || is_join(i + 1)) {
                return Err(Error::MalformedPieces(format!(
                    "adjacent mollified joins at piece {i}"
                )));
            }
        }

        let mut profile = Self {
            n,
            r0,
            pieces,
            blends: vec![None; count],
            horizon_offset: T::zero(),
        };
        for i in 0..count {
            if let PieceKind::MollifiedJoin { .. } = profile.pieces[i].kind {
                let a = profile.pieces[i].r_lo;
                let b = profile.pieces[i].r_hi;
                profile.blends[i] = Some(Hermite {
                    a,
                    width: b - a,
                    y0: profile.formula_value(i - 1, a),
                    y1: profile.formula_value(i + 1, b),
                    d0: profile.formula_slope(i - 1, a),
                    d1: profile.formula_slope(i + 1, b),
                });
            }
        }
        let crit = r0.powi(profile.exponent());
        let offset = crit - lit::<T>(2.0) * profile.formula_value(0, r0);
        profile.horizon_offset = if offset.abs() <= snap * crit {
            T::zero()
        } else {
            offset
        };
        Ok(profile)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Areal radius of the horizon.
    pub fn r0(&self) -> T {
        self.r0
    }

    pub fn pieces(&self) -> &[ProfilePiece<T>] {
        &self.pieces
    }

    fn exponent(&self) -> i32 {
        (self.n - 2) as i32
    }

    /// `½ r^{n−2}`, the Hawking mass of a sphere with `dr/ds = 0`.
    pub fn critical_mass(&self, r: T) -> T {
        lit::<T>(0.5) * r.powi(self.exponent())
    }

    /// Finite limit of `m_H` when the last piece is constant (the ADM mass).
    pub fn tail_mass(&self) -> Option<T> {
        match self.pieces.last().map(|p| p.kind) {
            Some(PieceKind::Constant { mass }) => Some(mass),
            _ => None,
        }
    }

    /// Interior piece boundaries, ascending.
    pub fn breakpoints(&self) -> Vec<T> {
        self.pieces[..self.pieces.len() - 1]
            .iter()
            .map(|p| p.r_hi)
            .collect()
    }

    fn piece_index(&self, r: T) -> usize {
        self.pieces
            .partition_point(|p| p.r_lo <= r)
            .saturating_sub(1)
    }

    fn formula_value(&self, i: usize, r: T) -> T {
        match self.pieces[i].kind {
            PieceKind::Constant { mass } => mass,
            PieceKind::FractionOfMax { epsilon } => self.critical_mass(r) * (T::one() - epsilon),
            PieceKind::MollifiedJoin { .. } => self.blends[i]
                .expect("blend built at construction")
                .value(r),
        }
    }

    fn formula_slope(&self, i: usize, r: T) -> T {
        match self.pieces[i].kind {
            PieceKind::Constant { .. } => T::zero(),
            PieceKind::FractionOfMax { epsilon } => {
                lit::<T>(0.5)
                    * from_usize::<T>(self.n - 2)
                    * r.powi(self.exponent() - 1)
                    * (T::one() - epsilon)
            }
            PieceKind::MollifiedJoin { .. } => self.blends[i]
                .expect("blend built at construction")
                .slope(r),
        }
    }

    fn check_domain(&self, r: T) -> Result<()> {
        if r >= self.r0 && !r.is_nan() {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                value: to_f64(r),
                domain: format!("r >= r0 = {}", to_f64(self.r0)),
            })
        }
    }

    /// `m_H(r)`.
    pub fn eval_m_hawking(&self, r: T) -> Result<T> {
        self.check_domain(r)?;
        Ok(self.formula_value(self.piece_index(r), r))
    }

    /// `dm_H/dr`. Fails with [`Error::CornerDerivative`] exactly at a kink.
    pub fn eval_dm_dr(&self, r: T) -> Result<T> {
        self.check_domain(r)?;
        let i = self.piece_index(r);
        if i > 0 && r == self.pieces[i].r_lo {
            let left = self.formula_slope(i - 1, r);
            let right = self.formula_slope(i, r);
            let scale = left.abs().max(right.abs());
            if (left - right).abs() > lit::<T>(1e-9) * scale {
                return Err(Error::CornerDerivative { r: to_f64(r) });
            }
            return Ok(right);
        }
        Ok(self.formula_slope(i, r))
    }

    /// One-sided `dm_H/dr`; identical to [`Self::eval_dm_dr`] away from breakpoints.
    pub fn eval_dm_dr_side(&self, r: T, side: Side) -> Result<T> {
        self.check_domain(r)?;
        let i = self.piece_index(r);
        if side == Side::Left && i > 0 && r == self.pieces[i].r_lo {
            return Ok(self.formula_slope(i - 1, r));
        }
        Ok(self.formula_slope(i, r))
    }

    /// True when `dm_H/dr` jumps at `r`.
    pub fn is_kink(&self, r: T) -> bool {
        self.eval_dm_dr(r).is_err() && r >= self.r0
    }

    /// `r^{n−2} − 2 m_H(r)` at `r = r0 + h`, evaluated so that the difference keeps
    /// full relative precision on the horizon piece even for tiny `h`.
    pub fn criticality_gap(&self, h: T) -> T {
        let r = self.r0 + h;
        let i = self.piece_index(r);
        let p = self.exponent() as usize;
        match self.pieces[i].kind {
            PieceKind::FractionOfMax { epsilon } => epsilon * r.powi(self.exponent()),
            PieceKind::Constant { mass } if i == 0 => {
                let _ = mass;
                pow_difference(r, self.r0, h, p) + self.horizon_offset
            }
            _ => {
                let crit0 = self.r0.powi(self.exponent());
                pow_difference(r, self.r0, h, p)
                    + (crit0 - lit::<T>(2.0) * self.formula_value(i, r))
            }
        }
    }
}

/// Invariant named in a [`ValidationReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Invariant {
    /// `m_H(r₀) = ½ r₀^{n−2}`.
    BoundaryCondition,
    /// `m_H` nondecreasing.
    Monotone,
    /// `m_H(r) < ½ r^{n−2}` for `r > r₀`.
    Subcritical,
    /// No jumps between pieces.
    Continuous,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantCheck {
    pub invariant: Invariant,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub checks: Vec<InvariantCheck>,
}

impl ValidationReport {
    pub fn failures(&self) -> impl Iterator<Item = &InvariantCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, invariant: Invariant) -> Option<&InvariantCheck> {
        self.checks.iter().find(|c| c.invariant == invariant)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ValidationOptions<T> {
    /// Sample points per piece for the grid checks.
    pub samples_per_piece: usize,
    /// The unbounded last piece is sampled on `[r_lo, tail_extent·r_lo]`.
    pub tail_extent: T,
}

impl<T: Real> Default for ValidationOptions<T> {
    fn default() -> Self {
        Self {
            samples_per_piece: 10_000,
            tail_extent: lit(100.0),
        }
    }
}

/// Checks the four admissibility invariants, analytically per piece kind and on a sample grid.
pub fn validate_profile<T: Real>(
    profile: &AdmissibleProfile<T>,
    opts: &ValidationOptions<T>,
) -> ValidationReport {
    let tol = lit::<T>(1e4) * T::epsilon();
    let r0 = profile.r0;
    let mut checks = Vec::with_capacity(4);

    let m_r0 = profile.formula_value(0, r0);
    let crit0 = profile.critical_mass(r0);
    let boundary_ok = (m_r0 - crit0).abs() <= tol * crit0;
    checks.push(InvariantCheck {
        invariant: Invariant::BoundaryCondition,
        passed: boundary_ok,
        detail: format!("m_H(r0) = {}, required {}", to_f64(m_r0), to_f64(crit0)),
    });

    let mut continuity = Vec::new();
    for i in 1..profile.pieces.len() {
        let r = profile.pieces[i].r_lo;
        let left = profile.formula_value(i - 1, r);
        let right = profile.formula_value(i, r);
        if (left - right).abs() > tol * left.abs().max(right.abs()).max(crit0) {
            continuity.push(format!(
                "jump {} -> {} at r = {}",
                to_f64(left),
                to_f64(right),
                to_f64(r)
            ));
        }
    }
    checks.push(InvariantCheck {
        invariant: Invariant::Continuous,
        passed: continuity.is_empty(),
        detail: if continuity.is_empty() {
            "pieces join continuously".into()
        } else {
            continuity.join("; ")
        },
    });

    let samples = opts.samples_per_piece.max(2);
    let mut monotone = Vec::new();
    let mut subcritical = Vec::new();
    for (i, piece) in profile.pieces.iter().enumerate() {
        let lo = piece.r_lo;
        let hi = if piece.r_hi.is_finite() {
            piece.r_hi
        } else {
            lo * opts.tail_extent
        };
        match piece.kind {
            PieceKind::Constant { mass } => {
                // gap is smallest at the left end of a constant piece
                let two_m = lit::<T>(2.0) * mass;
                if i > 0 && two_m >= lo.powi(profile.exponent()) {
                    subcritical.push(format!(
                        "constant {} is critical at r = {}",
                        to_f64(mass),
                        to_f64(lo)
                    ));
                }
            }
            PieceKind::FractionOfMax { .. } => {}
            PieceKind::MollifiedJoin { .. } => {}
        }
        let mut prev: Option<(T, T)> = None;
        let scale = profile.critical_mass(hi);
        for k in 0..samples {
            let t = from_usize::<T>(k) / from_usize::<T>(samples - 1);
            let r = if piece.r_hi.is_finite() {
                lo + (hi - lo) * t
            } else {
                lo * (hi / lo).powf(t)
            };
            let r = if k + 1 == samples && piece.r_hi.is_finite() {
                hi
            } else {
                r
            };
            let m = profile.formula_value(i, r);
            let slope = profile.formula_slope(i, r);
            if slope < -tol * scale / (hi - lo).max(lo) {
                monotone.push(format!("slope {} < 0 at r = {}", to_f64(slope), to_f64(r)));
            }
            if let Some((_, m_prev)) = prev {
                if m < m_prev - tol * scale {
                    monotone.push(format!(
                        "m_H decreases to {} at r = {}",
                        to_f64(m),
                        to_f64(r)
                    ));
                }
            }
            let h = r - r0;
            if h > T::zero() && profile.criticality_gap(h) <= T::zero() {
                subcritical.push(format!(
                    "m_H = {} reaches the critical value at r = {}",
                    to_f64(m),
                    to_f64(r)
                ));
            }
            prev = Some((r, m));
            if monotone.len() > 8 && subcritical.len() > 8 {
                break;
            }
        }
    }
    if profile.horizon_offset < T::zero() {
        subcritical.push("m_H exceeds the critical value just outside the horizon".into());
    }
    monotone.truncate(8);
    subcritical.truncate(8);
    checks.push(InvariantCheck {
        invariant: Invariant::Monotone,
        passed: monotone.is_empty(),
        detail: if monotone.is_empty() {
            "nondecreasing".into()
        } else {
            monotone.join("; ")
        },
    });
    checks.push(InvariantCheck {
        invariant: Invariant::Subcritical,
        passed: subcritical.is_empty(),
        detail: if subcritical.is_empty() {
            "m_H < r^(n-2)/2 for r > r0".into()
        } else {
            subcritical.join("; ")
        },
    });

    ValidationReport {
        valid: checks.iter().all(|c| c.passed),
        checks,
    }
}

/// Constant profile `m_H ≡ m` on `[(2m)^{1/(n−2)}, ∞)`.
pub fn schwarzschild_profile<T: Real>(n: usize, m: T) -> Result<AdmissibleProfile<T>> {
    if !(m > T::zero() && m.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "Schwarzschild mass must be positive, got {}",
            to_f64(m)
        )));
    }
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "dimension n = {n} must be at least 3"
        )));
    }
    let r0 = (lit::<T>(2.0) * m).powf(T::one() / from_usize::<T>(n - 2));
    AdmissibleProfile::new(n, r0, vec![ProfilePiece::constant(m, r0, T::infinity())])
}

/// A deep-well profile together with the quantities used to build it.
#[derive(Debug, Clone)]
pub struct DeepWell<T> {
    pub profile: AdmissibleProfile<T>,
    pub epsilon: T,
    /// Start of the `½ r^{n−2}(1−ε)` piece.
    pub r_lower: T,
    /// End of the `½ r^{n−2}(1−ε)` piece.
    pub r_upper: T,
    /// Areal radius of the sphere of area `A1`.
    pub r1: T,
    /// `(r₀/√ε)·((1+δ)^{1/(n−2)} − 1)/(1−ε)^{1/(n−2)}`, a lower bound on `d(∂M, Σ₁)`.
    pub separation_bound: T,
}

/// Lower bound on the distance from the horizon to the outer edge of the well.
pub fn well_separation_bound<T: Real>(n: usize, r0: T, delta: T, epsilon: T) -> T {
    let inv = T::one() / from_usize::<T>(n - 2);
    r0 / epsilon.sqrt() * ((T::one() + delta).powf(inv) - T::one()) / (T::one() - epsilon).powf(inv)
}

/// Profile that is constant, then hugs the critical curve at `dr/ds = √ε`,
/// then is constant at `½ r₀^{n−2}(1+δ)`; `ε` is chosen so the well is at
/// least `l` deep while the well still ends inside the sphere of area `a1`.
pub fn deep_well_profile<T: Real>(n: usize, a0: T, a1: T, l: T, delta: T) -> Result<DeepWell<T>> {
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "dimension n = {n} must be at least 3"
        )));
    }
    if !(a0 > T::zero() && a1 > a0 && a1.is_finite()) {
        return Err(Error::InvalidInput("deep well needs 0 < A0 < A1".into()));
    }
    if !(l > T::zero() && l.is_finite()) {
        return Err(Error::InvalidInput("deep well needs L > 0".into()));
    }
    if !(delta > T::zero() && delta < T::one()) {
        return Err(Error::InvalidInput("deep well needs 0 < delta < 1".into()));
    }
    let omega = unit_sphere_area::<T>(n - 1);
    let area_exp = T::one() / from_usize::<T>(n - 1);
    let r0 = (a0 / omega).powf(area_exp);
    let r1 = (a1 / omega).powf(area_exp);
    let p = (n - 2) as i32;
    let inv = T::one() / from_usize::<T>(n - 2);

    // r̄_ε ≤ r₁  ⇔  ε ≤ 1 − (1+δ)(r₀/r₁)^{n−2}
    let eps_max = T::one() - (T::one() + delta) * (r0 / r1).powi(p);
    if eps_max <= T::zero() {
        return Err(Error::InfeasibleParameters(format!(
            "(1+delta) r0^(n-2) = {} does not fit below r1^(n-2) = {}",
            to_f64((T::one() + delta) * r0.powi(p)),
            to_f64(r1.powi(p))
        )));
    }
    // The bound decreases in ε up to ε = (n−2)/n.
    let eps_turn = from_usize::<T>(n - 2) / from_usize::<T>(n);
    let eps_cap = eps_max.min(eps_turn);
    let excess = |eps: T| -> Result<T> { Ok(well_separation_bound(n, r0, delta, eps) - l) };
    let epsilon = if excess(eps_cap)? >= T::zero() {
        eps_cap
    } else {
        let mut lo = eps_cap;
        while excess(lo)? < T::zero() {
            lo = lo * lit(1e-6);
            if lo < T::min_positive_value() * lit(1e6) {
                return Err(Error::InfeasibleParameters(
                    "no epsilon reaches the requested depth".into(),
                ));
            }
        }
        bisect(excess, lo, eps_cap, lit(1e-12), 500)?.0
    };

    let r_lower = r0 * (T::one() - epsilon).powf(-inv);
    let r_upper = r0 * ((T::one() + delta) / (T::one() - epsilon)).powf(inv);
    if !(r_lower > r0 && r_upper > r_lower) {
        return Err(Error::InfeasibleParameters(format!(
            "epsilon = {} is below the resolution of the scalar type",
            to_f64(epsilon)
        )));
    }
    let half = lit::<T>(0.5);
    let pieces = vec![
        ProfilePiece::constant(half * r0.powi(p), r0, r_lower),
        ProfilePiece::fraction_of_max(epsilon, r_lower, r_upper),
        ProfilePiece::constant(
            half * r0.powi(p) * (T::one() + delta),
            r_upper,
            T::infinity(),
        ),
    ];
    let profile = AdmissibleProfile::new(n, r0, pieces)?;
    Ok(DeepWell {
        profile,
        epsilon,
        r_lower,
        r_upper,
        r1,
        separation_bound: well_separation_bound(n, r0, delta, epsilon),
    })
}

/// Profile equal to `m0` on `[r₀, 2r₀]` that turns up to `m_j` through a cubic
/// blend starting at `2r₀` whose steepest slope is `1.5·slope`.
pub fn sharp_turn_profile<T: Real>(
    n: usize,
    m0: T,
    m_j: T,
    slope: T,
) -> Result<AdmissibleProfile<T>> {
    if !(m0 > T::zero() && m_j >= m0 && m_j.is_finite()) {
        return Err(Error::InvalidInput("sharp turn needs m_j >= m0 > 0".into()));
    }
    let base = schwarzschild_profile(n, m0)?;
    if m_j == m0 {
        return Ok(base);
    }
    if !(slope > T::zero()) {
        return Err(Error::InfeasibleParameters("slope must be positive".into()));
    }
    let r0 = base.r0();
    let width = (m_j - m0) / slope;
    if width > r0 {
        return Err(Error::InfeasibleParameters(format!(
            "turn width (m_j - m0)/slope = {} exceeds r0 = {}",
            to_f64(width),
            to_f64(r0)
        )));
    }
    let two_r0 = lit::<T>(2.0) * r0;
    let start_mass = base.critical_mass(r0);
    let pieces = vec![
        ProfilePiece::constant(start_mass, r0, two_r0),
        ProfilePiece::mollified_join(two_r0, two_r0 + width),
        ProfilePiece::constant(m_j, two_r0 + width, T::infinity()),
    ];
    let profile = AdmissibleProfile::new(n, r0, pieces)?;
    let report = validate_profile(&profile, &ValidationOptions::default());
    if !report.valid {
        let why: Vec<_> = report.failures().map(|c| c.detail.clone()).collect();
        return Err(Error::InfeasibleParameters(format!(
            "sharp turn is not admissible: {}",
            why.join("; ")
        )));
    }
    Ok(profile)
}
