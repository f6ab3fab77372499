mod common;

use approx::assert_relative_eq;
use proptest::prelude::*;
use rotsym::schwarzschild::AppendedPoint;
use rotsym::{schwarzschild_profile, AppendedSchwarzschild, Error, GeometryOptions};
use std::f64::consts::PI;

fn appended(n: usize, m: f64, l: f64) -> AppendedSchwarzschild {
    AppendedSchwarzschild::new(n, m, l, GeometryOptions::default()).unwrap()
}

#[test]
fn three_dimensional_height_is_a_parabola() {
    let s = appended(3, 1.5, 2.0);
    for r in [3.0, 3.5, 6.0, 40.0] {
        let closed = (8.0 * 1.5 * (r - 3.0_f64)).sqrt();
        assert_relative_eq!(s.z_sch(r).unwrap(), closed, max_relative = 1e-14);
        assert_relative_eq!(s.z_sch_quadrature(r).unwrap(), closed, max_relative = 1e-10);
        assert_relative_eq!(s.r_sch(closed).unwrap(), r, max_relative = 1e-14);
    }
}

#[test]
fn higher_dimensional_height_matches_oracle() {
    for (n, m) in [(4, 0.5), (5, 2.0), (6, 1.0)] {
        let s = appended(n, m, 1.0);
        let p = schwarzschild_profile(n, m).unwrap();
        for f in [1.0 + 1e-8, 1.1, 2.0, 7.0] {
            let r = s.r0() * f;
            let z = s.z_sch(r).unwrap();
            assert_relative_eq!(
                z,
                common::oracle_height(&p, r - s.r0()),
                max_relative = 1e-9
            );
            assert_relative_eq!(s.r_sch(z).unwrap(), r, max_relative = 1e-10);
        }
    }
}

#[test]
fn cylinder_points_and_domain() {
    let s = appended(3, 1.0, 4.0);
    assert_eq!(
        s.point_at_height(-1.0).unwrap(),
        AppendedPoint::Cylinder { z: -1.0 }
    );
    assert_eq!(s.r_sch(-4.0).unwrap(), 2.0);
    assert_eq!(s.metric_coeff_vertical(-2.0).unwrap(), 1.0);
    assert!(matches!(
        s.point_at_height(-4.5),
        Err(Error::OutOfDomain { .. })
    ));
    assert!(matches!(
        s.metric_coeff_radial(2.0),
        Err(Error::SingularAtHorizon { .. })
    ));
    assert_relative_eq!(s.boundary_area(), 16.0 * PI, max_relative = 1e-15);
}

#[test]
fn metric_coefficients_closed_form() {
    let s = appended(3, 1.0, 0.0);
    // g_rr = r/(r − 2), g_zz = r/2 at height z(r)
    assert_relative_eq!(
        s.metric_coeff_radial(4.0).unwrap(),
        2.0,
        max_relative = 1e-14
    );
    assert_relative_eq!(
        s.metric_coeff_vertical(4.0).unwrap(),
        2.0,
        max_relative = 1e-14
    );
    assert_relative_eq!(s.sphere_factor(4.0).unwrap(), 16.0, max_relative = 1e-14);
}

#[test]
fn tube_reaching_into_the_cylinder() {
    let s = appended(3, 1.0, 3.0);
    let a = 4.0 * PI * 9.0;
    let t = s.tube_in_appended(a, 10.0).unwrap();
    assert!(t.clipped_at_bottom);
    assert_eq!(t.cylinder_length, 3.0);
    assert_eq!(t.sigma_interval.0, -3.0);
    let p = schwarzschild_profile(3, 1.0).unwrap();
    let shell = common::oracle_shell_volume(&p, 0.0, t.r_outer - 2.0);
    assert_relative_eq!(t.volume, shell + 3.0 * 16.0 * PI, max_relative = 1e-9);
    assert_relative_eq!(
        t.boundary_area,
        16.0 * PI + 4.0 * PI * t.r_outer * t.r_outer,
        max_relative = 1e-12
    );
    assert!(t.diameter_bound >= t.sigma_interval.1 - t.sigma_interval.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sigma_round_trip(n in 3usize..=5, m in 0.2f64..3.0, l in 0.0f64..5.0, t in 0.0f64..1.0) {
        let s = appended(n, m, l);
        let sigma = -l + t * (l + 20.0 * s.r0());
        let p = s.point_at_sigma(sigma).unwrap();
        prop_assert!((s.sigma(&p).unwrap() - sigma).abs() <= 1e-9 * (1.0 + sigma.abs()));
        prop_assert_eq!(sigma < 0.0, matches!(p, AppendedPoint::Cylinder { .. }));
    }
}
