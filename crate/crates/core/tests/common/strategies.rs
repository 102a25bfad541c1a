//! Random scene configurations for property tests.

use orbtrace::color::Rgb;
use orbtrace::geom::{Point2, Vec3};
use orbtrace::optics::{CalciteSpec, DielectricSpec, TintMode};
use orbtrace::render::{CropWindow, RenderSettings};
use orbtrace::scene::*;
use proptest::prelude::*;

pub fn rgb01() -> impl Strategy<Value = Rgb> {
    (0.0..=1.0f64, 0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(r, g, b)| Rgb::new(r, g, b))
}

pub fn vec3(range: f64) -> impl Strategy<Value = Vec3> {
    (-range..range, -range..range, -range..range).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

pub fn orb() -> impl Strategy<Value = OrbSpec> {
    (
        any::<bool>(),
        vec3(5.0),
        1.0..20.0f64,
        prop_oneof![Just(None), (0.001..1.0f64).prop_map(Some)],
        -3.0..3.0f64,
        prop_oneof![
            (1.01..2.5f64, rgb01(), any::<bool>(), rgb01()).prop_map(|(ior, tint, per_len, abs)| {
                OrbMaterial::Dielectric(DielectricSpec {
                    ior,
                    tint,
                    tint_mode: if per_len {
                        TintMode::PerLength
                    } else {
                        TintMode::PerCrossing
                    },
                    absorption_per_cm: abs,
                })
            }),
            (1.01..1.5f64, 0.0..1.0f64).prop_map(|(e, d)| OrbMaterial::Calcite(CalciteSpec {
                ior_ordinary: e + d,
                ior_extraordinary: e,
            })),
        ],
    )
        .prop_map(|(enabled, center, radius, frac, lateral_shift, material)| OrbSpec {
            enabled,
            center,
            radius,
            thickness: frac.map_or(Thickness::Solid, |f| Thickness::Shell(f * radius)),
            material,
            lateral_shift,
        })
}

pub fn camera() -> impl Strategy<Value = CameraSpec> {
    (60.0..200.0f64, vec3(3.0), 5.0..100.0f64, 1..2048u32, 1..2048u32).prop_map(|(z, look, fov, w, h)| CameraSpec {
        position: Vec3::new(0.0, 0.0, z),
        look_at: look,
        up: Vec3::Y,
        vertical_fov_deg: fov,
        width: w,
        height: h,
    })
}

pub fn lights() -> impl Strategy<Value = LightRigSpec> {
    (
        0.0..90.0f64,
        -180.0..180.0f64,
        0.0..20.0f64,
        1..9u32,
        0.5..5.0f64,
        0.0..0.4f64,
    )
        .prop_map(|(el, az, cone, n, main, amb)| LightRigSpec {
            elevation_deg: el,
            azimuth_deg: az,
            cone_half_angle_deg: cone,
            directions: n,
            main_radiance: Rgb::new(main, main * 0.9, main * 0.8),
            ambient_radiance: Rgb::gray(main * amb),
        })
}

pub fn fold() -> impl Strategy<Value = FoldSpec> {
    (
        0.0..360.0f64,
        prop_oneof![Just(None), (-2.0..2.0f64).prop_map(Some)],
        (0.0..5.0f64, 1.0..20.0f64, -40.0..40.0f64, 0.0..8.0f64),
        (0.0..2.0f64, 0.0..1.0f64, 0.05..1.0f64, 0.0..=1.0f64),
    )
        .prop_map(
            |(angle, exempt, (start, length, bend, bend_len), (rw, rh, cw, ca))| FoldSpec {
                angle_deg: angle,
                offset: exempt.unwrap_or(0.0),
                start,
                length,
                bend_deg: bend,
                bend_length: bend_len,
                ridge_width: rw,
                ridge_height: rh,
                crease_width: cw,
                crease_albedo: ca,
                exempt: exempt.is_some(),
            },
        )
}

pub fn stroke() -> impl Strategy<Value = StrokeSpec> {
    (
        prop::collection::vec((-50.0..50.0f64, -50.0..50.0f64), 2..5),
        0.01..2.0f64,
        rgb01(),
    )
        .prop_map(|(pts, width, albedo)| StrokeSpec {
            points: pts.into_iter().map(|(x, y)| Point2::new(x, y)).collect(),
            width,
            albedo,
        })
}

pub fn relief() -> impl Strategy<Value = ReliefSpec> {
    (
        (any::<bool>(), 1.0..60.0f64, 1.0..30.0f64, any::<bool>()),
        prop_oneof![
            Just(None),
            (-5.0..5.0f64, -5.0..5.0f64).prop_map(|(x, y)| Some(Point2::new(x, y)))
        ],
        (rgb01(), rgb01(), -180.0..180.0f64, 1.0..40.0f64),
        prop_oneof![
            Just(None),
            "[a-z]{1,8}\\.png".prop_map(|p| Some(TextureSpec {
                path: p,
                extent: [-10.0, -12.5, 10.25, 40.0],
            }))
        ],
        prop::collection::vec(fold(), 0..6),
        prop::collection::vec(stroke(), 0..3),
    )
        .prop_map(
            |((enabled, standoff, cells, convergence), cp, (dark, bright, ga, gw), texture, folds, strokes)| {
                ReliefSpec {
                    enabled,
                    standoff,
                    cells_per_cm: cells,
                    convergence,
                    convergence_point: cp,
                    albedo: AlbedoSpec {
                        dark,
                        bright,
                        gradient_angle_deg: ga,
                        gradient_width: gw,
                    },
                    texture,
                    folds,
                    strokes,
                }
            },
        )
}

pub fn render() -> impl Strategy<Value = RenderSettings> {
    (
        1..4096u32,
        5..64u32,
        any::<u64>(),
        0.5..4.0f64,
        any::<bool>(),
        any::<bool>(),
    )
        .prop_map(|(spp, depth, seed, gamma, strict, crop)| RenderSettings {
            samples_per_pixel: spp,
            max_depth: depth,
            seed,
            gamma,
            strict,
            crop: crop.then_some(CropWindow {
                x0: 0,
                y0: 0,
                x1: 1,
                y1: 1,
            }),
        })
}

pub fn config() -> impl Strategy<Value = SceneConfig> {
    (
        orb(),
        camera(),
        lights(),
        relief(),
        prop::collection::vec((vec3(10.0), 0.1..4.0f64, rgb01()), 0..3),
        render(),
    )
        .prop_map(|(orb, camera, lights, relief, meshes, render)| SceneConfig {
            orb,
            camera,
            lights,
            relief,
            meshes: meshes
                .into_iter()
                .enumerate()
                .map(|(i, (t, s, a))| MeshSpec {
                    path: format!("meshes/hand \"{i}\".obj"),
                    translate: t,
                    scale: s,
                    albedo: a,
                })
                .collect(),
            render,
        })
        .prop_filter("valid", |c| c.validate().is_ok())
}
