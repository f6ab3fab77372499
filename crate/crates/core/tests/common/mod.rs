//! Shared oracles and profile generators for the integration tests.
//!
//! The oracles deliberately avoid the library's quadrature: they use a
//! double-exponential (tanh-sinh) rule on whole pieces, with their own
//! evaluation of the criticality gap.
#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rotsym::profiles::{AdmissibleProfile, PieceKind, ProfilePiece};
use rotsym::Profile;

/// Tanh-sinh quadrature of `f(x)` on `[a, b]`, where `f` receives the point
/// together with its distances to both ends so that endpoint singularities can
/// be evaluated without cancellation. Refines the step until two successive
/// levels agree to `tol` relative.
pub fn tanh_sinh<F>(f: F, a: f64, b: f64, tol: f64) -> f64
where
    F: Fn(f64, f64, f64) -> f64,
{
    if b <= a {
        return 0.0;
    }
    let half = 0.5 * (b - a);
    let term = |t: f64| -> f64 {
        let s = FRAC_PI_2 * t.sinh();
        let c = FRAC_PI_2 * t.cosh();
        let e = (2.0 * s).exp();
        // distances to the ends are (b − a)·e/(1+e) and (b − a)/(1+e); take the
        // small one directly and the large one as the complement
        let width = b - a;
        let (to_a, to_b) = if s < 0.0 {
            let to_a = width * e / (1.0 + e);
            (to_a, width - to_a)
        } else {
            let to_b = width / (1.0 + e);
            (width - to_b, to_b)
        };
        // the rule's tail beyond this contributes far below double precision
        if to_a.min(to_b) < 1e-280 * width {
            return 0.0;
        }
        // sech²(s) = 4e^{−2|s|}/(1 + e^{−2|s|})², which underflows to zero cleanly
        let decay = (-2.0 * s.abs()).exp();
        let weight = c * 4.0 * decay / (1.0 + decay).powi(2);
        if weight == 0.0 {
            return 0.0;
        }
        let x = if to_a < to_b { a + to_a } else { b - to_b };
        half * weight * f(x, to_a, to_b)
    };
    let t_max = 6.5;
    let mut h = 0.5;
    let mut sum = term(0.0);
    let mut k = 1;
    while (k as f64) * h <= t_max {
        let t = k as f64 * h;
        sum += term(t) + term(-t);
        k += 1;
    }
    let mut estimate = sum * h;
    for _ in 0..12 {
        h *= 0.5;
        let mut k = 1;
        while (k as f64) * h <= t_max {
            let t = k as f64 * h;
            sum += term(t) + term(-t);
            k += 2;
        }
        let next = sum * h;
        if (next - estimate).abs() <= tol * next.abs() {
            return next;
        }
        estimate = next;
    }
    estimate
}

/// `(r0 + h)^p − r0^p` by the binomial expansion.
fn binomial_difference(r0: f64, h: f64, p: i32) -> f64 {
    let mut total = 0.0;
    let mut binom = 1.0;
    for k in 1..=p {
        binom *= (p - k + 1) as f64 / k as f64;
        total += binom * r0.powi(p - k) * h.powi(k);
    }
    total
}

/// Index of the piece containing the point `r` (left-closed).
fn piece_at(p: &Profile, r: f64) -> usize {
    let pieces = p.pieces();
    pieces.iter().rposition(|q| q.r_lo <= r).unwrap_or(0)
}

/// `(m_H, r^{n−2} − 2m_H)` at offset `h` from the horizon, evaluated independently.
pub fn mass_and_gap(p: &Profile, h: f64) -> (f64, f64) {
    let n = p.n() as i32;
    let r0 = p.r0();
    let r = r0 + h;
    let index = piece_at(p, r);
    match p.pieces()[index].kind {
        PieceKind::Constant { mass } => {
            // the boundary condition makes the first piece exactly critical at r0
            let offset = if index == 0 {
                0.0
            } else {
                r0.powi(n - 2) - 2.0 * mass
            };
            (mass, binomial_difference(r0, h, n - 2) + offset)
        }
        PieceKind::FractionOfMax { epsilon } => {
            let m = 0.5 * r.powi(n - 2) * (1.0 - epsilon);
            (m, epsilon * r.powi(n - 2))
        }
        PieceKind::MollifiedJoin { .. } => {
            let m = p.eval_m_hawking(r).unwrap();
            (m, r.powi(n - 2) - 2.0 * m)
        }
    }
}

/// Offsets where the oracle splits its integrals: the profile kinks in `(h_a, h_b)`.
fn split_points(p: &Profile, h_a: f64, h_b: f64) -> Vec<f64> {
    let mut pts = vec![h_a];
    for piece in p.pieces() {
        let h = piece.r_lo - p.r0();
        if h > h_a && h < h_b {
            pts.push(h);
        }
    }
    pts.push(h_b);
    pts
}

fn oracle_integral<F>(p: &Profile, h_a: f64, h_b: f64, f: F) -> f64
where
    F: Fn(f64) -> f64,
{
    let pts = split_points(p, h_a, h_b);
    pts.windows(2)
        .map(|w| {
            let lo = w[0];
            // measure from the horizon when the panel starts there, to keep tiny offsets exact
            tanh_sinh(
                |x, to_a, _| f(if lo == 0.0 { to_a } else { x }),
                w[0],
                w[1],
                1e-12,
            )
        })
        .sum()
}

/// `s(r0 + h)`.
pub fn oracle_arclength(p: &Profile, h: f64) -> f64 {
    let n = p.n() as i32;
    oracle_integral(p, 0.0, h, |x| {
        let (_, gap) = mass_and_gap(p, x);
        ((p.r0() + x).powi(n - 2) / gap).sqrt()
    })
}

/// `z(r0 + h)`.
pub fn oracle_height(p: &Profile, h: f64) -> f64 {
    oracle_integral(p, 0.0, h, |x| {
        let (m, gap) = mass_and_gap(p, x);
        (2.0 * m / gap).sqrt()
    })
}

/// `ω_{n−1} ∫ r^{n−1} ds/dr dr` between two offsets.
pub fn oracle_shell_volume(p: &Profile, h_a: f64, h_b: f64) -> f64 {
    let n = p.n() as i32;
    let integral = oracle_integral(p, h_a, h_b, |x| {
        let (_, gap) = mass_and_gap(p, x);
        let r = p.r0() + x;
        r.powi(n - 1) * (r.powi(n - 2) / gap).sqrt()
    });
    unit_sphere_area(p.n() - 1) * integral
}

/// Area of the unit `k`-sphere from `2π^{(k+1)/2}/Γ((k+1)/2)`.
pub fn unit_sphere_area(k: usize) -> f64 {
    let half = (k + 1) as f64 / 2.0;
    2.0 * PI.powf(half) / gamma_half_integer(half)
}

fn gamma_half_integer(x: f64) -> f64 {
    // Γ(1) = 1, Γ(1/2) = √π, Γ(x+1) = xΓ(x)
    let (mut g, mut t) = if (x - x.floor()).abs() < 1e-12 {
        (1.0, 1.0)
    } else {
        (PI.sqrt(), 0.5)
    };
    while t < x - 1e-12 {
        g *= t;
        t += 1.0;
    }
    g
}

/// A random admissible profile with Penrose ratio `1 + δ`, δ drawn from `(0, delta_max]`.
/// Mass rises in up to three steps, each through a critical-slope piece or a cubic join.
pub fn random_admissible(rng: &mut ChaCha8Rng, delta_max: f64) -> (Profile, f64) {
    loop {
        let n = rng.gen_range(3..=5usize);
        let r0 = rng.gen_range(0.5..3.0);
        let delta = delta_max * (1.0 - rng.gen::<f64>());
        if let Some(p) = try_random_profile(rng, n, r0, delta) {
            return (p, delta);
        }
    }
}

fn try_random_profile(rng: &mut ChaCha8Rng, n: usize, r0: f64, delta: f64) -> Option<Profile> {
    let p = (n - 2) as i32;
    let m0 = 0.5 * r0.powi(p);
    let steps = rng.gen_range(1..=3usize);
    let mut levels: Vec<f64> = (0..steps - 1).map(|_| rng.gen_range(0.0..1.0)).collect();
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    levels.push(1.0);
    let mut pieces = Vec::new();
    let mut r = r0;
    let mut m = m0;
    for level in levels {
        let target = m0 * (1.0 + delta * level);
        if target <= m {
            continue;
        }
        let hold = r0 * rng.gen_range(0.02..0.6);
        pieces.push(ProfilePiece::constant(m, r, r + hold));
        r += hold;
        if rng.gen_bool(0.5) {
            let epsilon = 1.0 - 2.0 * m / r.powi(p);
            let r_end = (2.0 * target / (1.0 - epsilon)).powf(1.0 / p as f64);
            pieces.push(ProfilePiece::fraction_of_max(epsilon, r, r_end));
            m = 0.5 * r_end.powi(p) * (1.0 - epsilon);
            r = r_end;
        } else {
            if 2.0 * target >= r.powi(p) {
                return None;
            }
            let width = r0 * rng.gen_range(0.05..0.5);
            pieces.push(ProfilePiece::mollified_join(r, r + width));
            m = target;
            r += width;
        }
    }
    pieces.push(ProfilePiece::constant(m, r, f64::INFINITY));
    AdmissibleProfile::new(n, r0, pieces).ok()
}

/// A profile whose mass drops through a cubic join: subcritical but not monotone.
pub fn random_decreasing(rng: &mut ChaCha8Rng) -> Profile {
    let n = rng.gen_range(3..=5usize);
    let r0: f64 = rng.gen_range(0.5..3.0);
    let m0 = 0.5 * r0.powi(n as i32 - 2);
    let a = r0 * (1.0 + rng.gen_range(0.1..1.0));
    let b = a + r0 * rng.gen_range(0.05..0.5);
    let drop = rng.gen_range(0.05..0.5);
    AdmissibleProfile::new(
        n,
        r0,
        vec![
            ProfilePiece::constant(m0, r0, a),
            ProfilePiece::mollified_join(a, b),
            ProfilePiece::constant(m0 * (1.0 - drop), b, f64::INFINITY),
        ],
    )
    .unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
