mod common;

use approx::assert_relative_eq;
use proptest::prelude::*;
use rotsym::geometry::RotSymManifold;
use rotsym::{
    deep_well_profile, schwarzschild_profile, sharp_turn_profile, GeometryOptions, Manifold, Side,
};
use std::f64::consts::PI;

fn build(p: rotsym::Profile) -> Manifold {
    RotSymManifold::new(p, GeometryOptions::default()).unwrap()
}

#[test]
fn oracle_reproduces_closed_forms() {
    let p = schwarzschild_profile(3, 1.0).unwrap();
    // s(r) = √(r(r−2)) + 2 ln((√r + √(r−2))/√2), z(r) = √(8(r−2))
    assert_relative_eq!(
        common::oracle_arclength(&p, 2.0),
        4.591174298785276,
        max_relative = 1e-13
    );
    assert_relative_eq!(common::oracle_height(&p, 2.0), 4.0, max_relative = 1e-13);
    assert_relative_eq!(
        common::unit_sphere_area(3),
        2.0 * PI * PI,
        max_relative = 1e-15
    );
}

#[test]
fn arclength_and_height_match_oracle_on_deep_well() {
    let a0 = 16.0 * PI;
    let w = deep_well_profile(3, a0, 4.0 * a0, 8.0, 0.05).unwrap();
    let m = build(w.profile.clone());
    for r in [
        w.r_lower,
        0.5 * (w.r_lower + w.r_upper),
        w.r_upper,
        w.r1,
        3.0 * w.r1,
    ] {
        let h = r - 2.0;
        assert_relative_eq!(
            m.arclength(r).unwrap(),
            common::oracle_arclength(&w.profile, h),
            max_relative = 1e-9
        );
        assert_relative_eq!(
            m.height(r).unwrap(),
            common::oracle_height(&w.profile, h),
            max_relative = 1e-9
        );
    }
}

#[test]
fn embedding_identity_holds_on_the_grid() {
    let a0 = 16.0 * PI;
    let m = build(
        deep_well_profile(3, a0, 4.0 * a0, 8.0, 0.05)
            .unwrap()
            .profile,
    );
    let tol = 10.0 * m.quad_tol();
    for r in m.grid_radii().into_iter().skip(1) {
        let drds = m.drds(r).unwrap();
        let dzdr = m.dzdr(r).unwrap();
        assert!(drds > 0.0 && drds < 1.0);
        // (ds/dr)² − (dz/dr)² = 1
        let identity = drds.powi(-2) - dzdr * dzdr;
        assert!(
            (identity - 1.0).abs() <= tol * drds.powi(-2).max(1.0),
            "r = {r}: {identity}"
        );
    }
}

#[test]
fn coordinates_are_strictly_increasing() {
    let m = build(sharp_turn_profile(4, 0.5, 0.6, 2.0).unwrap());
    let rows = m.embedding_rows().unwrap();
    assert_eq!(rows[0].s, 0.0);
    assert_eq!(rows[0].z, 0.0);
    assert!(rows.windows(2).all(|w| w[1].s > w[0].s && w[1].z > w[0].z));
}

/// Reconstructs r(s) by inverting the arclength and applies
/// R = −2(n−1) r''/r + (n−1)(n−2)(1 − r'²)/r² with second differences.
fn curvature_from_warping(m: &Manifold, r: f64) -> f64 {
    let n = m.n() as f64;
    let s = m.arclength(r).unwrap();
    let step = 1e-3;
    let r_minus = m.radius_at_arclength(s - step).unwrap();
    let r_plus = m.radius_at_arclength(s + step).unwrap();
    let r_pp = (r_plus - 2.0 * r + r_minus) / (step * step);
    let r_p = (r_plus - r_minus) / (2.0 * step);
    -2.0 * (n - 1.0) * r_pp / r + (n - 1.0) * (n - 2.0) * (1.0 - r_p * r_p) / (r * r)
}

#[test]
fn scalar_curvature_matches_warped_product_formula() {
    let a0 = 16.0 * PI;
    let w = deep_well_profile(3, a0, 4.0 * a0, 4.0, 0.2).unwrap();
    let m = build(w.profile.clone());
    let r = 0.5 * (w.r_lower + w.r_upper);
    let exact = m.scalar_curvature(r).unwrap();
    assert_relative_eq!(curvature_from_warping(&m, r), exact, max_relative = 1e-4);

    let turn = build(sharp_turn_profile(5, 0.5, 0.55, 0.5).unwrap());
    let join = turn.profile().pieces()[1];
    for t in [0.3, 0.5, 0.7] {
        let r = join.r_lo + t * (join.r_hi - join.r_lo);
        let exact = turn.scalar_curvature(r).unwrap();
        assert_relative_eq!(curvature_from_warping(&turn, r), exact, max_relative = 1e-4);
    }
}

#[test]
fn kinks_report_one_sided_curvature() {
    let a0 = 16.0 * PI;
    let w = deep_well_profile(3, a0, 4.0 * a0, 4.0, 0.2).unwrap();
    let m = build(w.profile);
    assert!(m.scalar_curvature(w.r_lower).is_err());
    assert_eq!(m.scalar_curvature_side(w.r_lower, Side::Left).unwrap(), 0.0);
    assert!(m.scalar_curvature_side(w.r_lower, Side::Right).unwrap() > 0.0);
}

#[test]
fn deep_well_separation_exceeds_bound() {
    let a0 = 16.0 * PI;
    for (l, delta) in [(5.0, 0.1), (12.0, 0.01), (30.0, 0.3)] {
        let w = deep_well_profile(3, a0, 4.0 * a0, l, delta).unwrap();
        let m = build(w.profile.clone());
        let d = m.sphere_distance(a0, 4.0 * a0).unwrap();
        assert!(
            d > l && d >= w.separation_bound * (1.0 - 1e-9),
            "{d} vs {}",
            w.separation_bound
        );
        assert_eq!(m.sphere_distance(a0, a0).unwrap(), 0.0);
    }
}

#[test]
fn penrose_ratio_is_at_least_one() {
    let mut rng = common::rng(11);
    for _ in 0..20 {
        let (p, _) = common::random_admissible(&mut rng, 0.5);
        let m = build(p);
        let m0 = 0.5
            * (m.boundary_area() / m.unit_sphere_area())
                .powf((m.n() as f64 - 2.0) / (m.n() as f64 - 1.0));
        assert!(m.adm_mass().unwrap() / m0 >= 1.0 - 1e-12);
    }
}

#[test]
fn tube_volume_matches_oracle() {
    let m = build(schwarzschild_profile(3, 1.0).unwrap());
    let t = m.tube(64.0 * PI, 1.0).unwrap();
    let oracle =
        common::oracle_shell_volume(m.profile(), t.r_interval.0 - 2.0, t.r_interval.1 - 2.0);
    assert_relative_eq!(m.tube_volume(&t).unwrap(), oracle, max_relative = 1e-9);
    assert!(m.tube_diameter_bound(&t) <= 2.0 + PI * t.r_interval.1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn arclength_inverse_round_trips(seed in 0u64..10_000, t in 0.0f64..1.0) {
        let (p, _) = common::random_admissible(&mut common::rng(seed), 0.3);
        let m = build(p);
        let r = m.r0() + (m.r_max() - m.r0()) * t * t;
        let s = m.arclength(r).unwrap();
        prop_assert!((m.radius_at_arclength(s).unwrap() - r).abs() <= 1e-9 * r);
        let z = m.height(r).unwrap();
        prop_assert!((m.radius_at_height(z).unwrap() - r).abs() <= 1e-8 * r);
    }

    #[test]
    fn drds_is_a_proper_fraction(seed in 0u64..10_000, t in 1e-6f64..1.0) {
        let (p, _) = common::random_admissible(&mut common::rng(seed), 0.9);
        let m = build(p);
        let r = m.r0() + (m.r_max() - m.r0()) * t;
        let v = m.drds(r).unwrap();
        prop_assert!(v > 0.0 && v < 1.0);
    }
}
