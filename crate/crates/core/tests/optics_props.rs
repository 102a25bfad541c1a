mod common;

use orbtrace::geom::{Point2, Vec2, Vec3};
use orbtrace::optics::{
    fresnel_reflectance, fresnel_transmittance, refract, trace_shell_2d, ShellPrimitive2D, GLASS_IOR,
};
use proptest::prelude::*;

fn unit_from_angles(theta: f64, phi: f64) -> Vec3 {
    Vec3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
}

fn background_displacement(b: f64, thickness: f64) -> f64 {
    let eye = Point2::new(-90.0, 0.0);
    let a = (b / 90.0).asin();
    let target = eye + Vec2::new(a.cos(), a.sin()) * 90.0;
    let orb = ShellPrimitive2D::new(Point2::ZERO, 6.8, thickness, GLASS_IOR).unwrap();
    let path = trace_shell_2d(eye, &orb, target).unwrap();
    let hit = path
        .exit_hit_on_line(Point2::new(25.0, 0.0), Vec2::new(1.0, 0.0))
        .unwrap();
    hit.y - a.tan() * 115.0
}

#[test]
fn frozen_background_displacement_at_impact_3_4() {
    // Dense marching oracle, computed before the tracer existed.
    const FROZEN: f64 = 0.225_597_798_143_464_7;
    assert!((background_displacement(3.4, 0.13) - FROZEN).abs() < 1e-9);

    let a = (3.4f64 / 90.0).asin();
    let ((px, py), (dx, dy)) = common::march_shell_2d((-90.0, 0.0), (a.cos(), a.sin()), 6.8, 0.13, GLASS_IOR, 1e-3);
    let y = py + dy * (25.0 - px) / dx;
    assert!((y - a.tan() * 115.0 - FROZEN).abs() < 1e-9);
}

#[test]
fn displacement_is_monotone_in_thickness() {
    for b in [0.5, 2.0, 3.4, 5.0, 6.0, 6.25] {
        let mut prev = 0.0;
        for i in 0..50 {
            let t = 0.05 + 0.45 * i as f64 / 49.0;
            let d = background_displacement(b, t).abs();
            assert!(d >= prev - 1e-12, "b={b} t={t}: {d} < {prev}");
            prev = d;
        }
    }
}

#[test]
fn vanishing_shell_does_not_deviate() {
    for b in [0.0, 1.0, 3.4, 6.0, 6.79] {
        assert!(background_displacement(b, 1e-9).abs() < 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn fresnel_energy_is_conserved(cos_i in 1e-6f64..=1.0, n1 in 1.0f64..3.0, n2 in 1.0f64..3.0) {
        let r = fresnel_reflectance(cos_i, n1, n2);
        let t = fresnel_transmittance(cos_i, n1, n2);
        prop_assert!((0.0..=1.0).contains(&r));
        prop_assert!((r + t - 1.0).abs() < 1e-12, "R={r} T={t}");
    }

    #[test]
    fn refraction_is_reversible_and_planar(
        theta in 0.0f64..1.55, phi in 0.0f64..std::f64::consts::TAU, eta in 0.3f64..3.0
    ) {
        let n = Vec3::Z;
        let d = -unit_from_angles(theta, phi);
        if let Some(t) = refract(d, n, eta) {
            prop_assert!(t.is_unit(1e-12));
            let back = refract(-t, -n, 1.0 / eta).unwrap();
            prop_assert!((back - (-d)).length() < 1e-9);
            prop_assert!(t.dot(d.cross(n)).abs() < 1e-12);
        }
    }

    #[test]
    fn center_ray_is_never_deviated(thickness in 1e-4f64..=6.8, ior in 1.0001f64..3.0, angle in 0.0f64..std::f64::consts::TAU) {
        let orb = ShellPrimitive2D::new(Point2::ZERO, 6.8, thickness.min(6.8), ior).unwrap();
        let eye = Vec2::from_angle(angle) * 90.0;
        let path = trace_shell_2d(eye, &orb, Point2::ZERO).unwrap();
        prop_assert!(path.angular_deviation(-eye) < 1e-10);
    }
}
