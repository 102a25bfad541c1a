//! Whole-renderer properties with closed-form answers.

use std::f64::consts::PI;
use std::path::Path;

use orbtrace::color::Rgb;
use orbtrace::optics::{CalciteSpec, DielectricSpec, GLASS_IOR};
use orbtrace::render::{birefringent_render_pair, render, render_image, CropWindow, RenderSettings};
use orbtrace::scene::{
    align_view, make_salvator_scene, LightRigSpec, OrbMaterial, SalvatorOverrides, Scene, SceneConfig, Thickness,
};

fn settings(spp: u32) -> RenderSettings {
    RenderSettings {
        samples_per_pixel: spp,
        seed: 11,
        ..RenderSettings::default()
    }
}

fn small(cfg: &mut SceneConfig, size: u32, fov: f64) {
    cfg.camera.width = size;
    cfg.camera.height = size;
    cfg.camera.vertical_fov_deg = fov;
}

fn plain_relief(cfg: &mut SceneConfig, albedo: f64) {
    cfg.relief.folds.clear();
    cfg.relief.albedo.dark = Rgb::gray(albedo);
    cfg.relief.albedo.bright = Rgb::gray(albedo);
}

fn build(cfg: &SceneConfig) -> Scene {
    Scene::build(cfg, Path::new(".")).unwrap()
}

/// A clear hollow orb over a white plane under a uniform unit sky.
fn furnace() -> SceneConfig {
    let mut cfg = SceneConfig::default();
    small(&mut cfg, 48, 14.0);
    cfg.orb.thickness = Thickness::Shell(0.13);
    cfg.orb.material = OrbMaterial::Dielectric(DielectricSpec::clear(GLASS_IOR));
    plain_relief(&mut cfg, 1.0);
    cfg.lights = LightRigSpec {
        main_radiance: Rgb::BLACK,
        ambient_radiance: Rgb::WHITE,
        ..LightRigSpec::default()
    };
    cfg
}

#[test]
fn white_furnace_is_uniform_unit_radiance() {
    let image = render_image(&build(&furnace()), &settings(256), 4).unwrap();
    let mean = image.mean();
    for c in mean.channels() {
        assert!((c - 1.0).abs() < 0.005, "mean radiance {c}");
    }
}

#[test]
fn lambertian_plane_under_one_direction() {
    let mut cfg = SceneConfig::default();
    small(&mut cfg, 16, 10.0);
    cfg.orb.enabled = false;
    plain_relief(&mut cfg, 0.7);
    cfg.lights = LightRigSpec {
        directions: 1,
        cone_half_angle_deg: 0.0,
        main_radiance: Rgb::gray(3.0),
        ambient_radiance: Rgb::BLACK,
        ..LightRigSpec::default()
    };
    let cos = cfg.lights.main_axis().z;
    assert!((cos - 0.5).abs() < 1e-12);
    let expected = 0.7 * 3.0 * cos / PI;
    let image = render_image(&build(&cfg), &settings(4), 1).unwrap();
    for p in &image.pixels {
        for c in p.channels() {
            assert!((c - expected).abs() < 1e-9, "{c} vs {expected}");
        }
    }
}

#[test]
fn no_light_renders_black() {
    let mut cfg = align_view(&make_salvator_scene(&SalvatorOverrides::default())).unwrap();
    small(&mut cfg, 24, 40.0);
    cfg.lights.main_radiance = Rgb::BLACK;
    cfg.lights.ambient_radiance = Rgb::BLACK;
    let image = render_image(&build(&cfg), &settings(8), 2).unwrap();
    assert!(image.pixels.iter().all(|p| p.is_black()));
}

#[test]
fn output_is_independent_of_thread_count() {
    let mut cfg = align_view(&make_salvator_scene(&SalvatorOverrides::default())).unwrap();
    small(&mut cfg, 96, 40.0);
    let scene = build(&cfg);
    let s = RenderSettings {
        crop: Some(CropWindow::around(48.0, 48.0, 30.0, 96, 96)),
        ..settings(16)
    };
    let reference = render_image(&scene, &s, 1).unwrap().to_ppm(2.2);
    for threads in [4, 8] {
        let (film, stats) = render(&scene, &s, threads).unwrap();
        assert_eq!(film.finalize().to_ppm(2.2), reference, "{threads} threads");
        assert_eq!(stats.paths, 61 * 61 * 16);
    }
}

#[test]
fn birefringent_pair_needs_a_solid_orb() {
    let mut cfg = furnace();
    cfg.orb.material = OrbMaterial::Calcite(CalciteSpec::default());
    let scene = build(&cfg);
    assert!(birefringent_render_pair(&scene, &CalciteSpec::default(), &settings(1), 1).is_err());
    cfg.orb.enabled = false;
    assert!(birefringent_render_pair(&build(&cfg), &CalciteSpec::default(), &settings(1), 1).is_err());
}

#[test]
fn birefringent_pair_with_equal_indices_is_a_single_render() {
    let mut cfg = furnace();
    small(&mut cfg, 24, 14.0);
    cfg.lights = LightRigSpec::default();
    plain_relief(&mut cfg, 0.5);
    cfg.orb.thickness = Thickness::Solid;
    let n = 1.6;
    cfg.orb.material = OrbMaterial::Dielectric(DielectricSpec::clear(n));
    let scene = build(&cfg);
    let single = render_image(&scene, &settings(8), 2).unwrap();
    let equal = CalciteSpec {
        ior_ordinary: n,
        ior_extraordinary: n,
    };
    let pair = birefringent_render_pair(&scene, &equal, &settings(8), 2).unwrap();
    for (a, b) in single.pixels.iter().zip(&pair.pixels) {
        for (x, y) in a.channels().iter().zip(b.channels()) {
            assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }
}
