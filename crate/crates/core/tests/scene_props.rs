mod common;

use common::strategies::config;
use orbtrace::geom::{Point2, Vec3};
use orbtrace::scene::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn parse_serialize_parse_is_identity(cfg in config()) {
        let text = serialize_scene(&cfg);
        let back = parse_scene(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(serialize_scene(&back), text);
    }

    #[test]
    fn light_power_is_independent_of_direction_count(n in 1..32u32) {
        let rig = LightRigSpec {
            directions: n,
            ..LightRigSpec::default()
        };
        let total = rig.per_direction_radiance() * rig.main_directions().len() as f64;
        prop_assert!((total.r - rig.main_radiance.r).abs() < 1e-12);
        prop_assert!((total.b - rig.main_radiance.b).abs() < 1e-12);
    }

    #[test]
    fn align_view_is_idempotent(shift in -3.0..3.0f64, cx in -2.0..2.0f64, cy in -2.0..2.0f64) {
        let mut cfg = make_salvator_scene(&SalvatorOverrides { lateral_shift: Some(shift), ..Default::default() });
        cfg.relief.convergence_point = Some(Point2::new(cx, cy));
        let once = align_view(&cfg).unwrap();
        prop_assert_eq!(align_view(&once).unwrap(), once);
    }
}

#[test]
fn generated_scene_folds_pass_through_projected_centre() {
    for shift in [0.0, 1.0] {
        let cfg = make_salvator_scene(&SalvatorOverrides {
            lateral_shift: Some(shift),
            ..Default::default()
        });
        let c = cfg.convergence_point();
        let cam = Camera::new(&cfg.camera);
        let projected = cam.project(cfg.orb.center).unwrap();
        let conv_px = cam.project(Vec3::new(c.x, c.y, cfg.relief_z())).unwrap();
        assert!((projected - conv_px).length() < 1e-9);
        for f in cfg.relief.folds.iter().filter(|f| !f.exempt) {
            let g = FoldGeometry::new(f, c);
            assert!(g.line_distance(c) < 1e-6);
        }
    }
}

#[test]
fn salvator_overrides() {
    let solid = make_salvator_scene(&SalvatorOverrides {
        thickness: Some(Thickness::Solid),
        ..Default::default()
    });
    assert!(solid.orb.is_solid());
    let d = make_salvator_scene(&SalvatorOverrides::default());
    assert_eq!(d, SceneConfig::default());
    assert_eq!(d.orb.radius, 6.8);
    assert_eq!(d.relief_z(), -25.0);
    assert_eq!((d.camera.position - Vec3::new(0.0, 0.0, d.relief_z())).length(), 90.0);
    assert_eq!(d.relief.folds.iter().filter(|f| f.exempt).count(), 1);
}
