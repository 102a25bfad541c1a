//! Runtime scene: immutable geometry shared by the render workers.

use std::path::Path;

use crate::color::Rgb;
use crate::geom::{
    height_field, intersect_shell, load_obj, MaterialId, MeshPrimitive, Plane, Point2, PrimitiveId, Ray,
    ShellInterface, ShellPrimitive, SurfaceHit, Vec3,
};
use crate::optics::DielectricSpec;

use super::camera::Camera;
use super::config::{OrbMaterial, SceneConfig};
use super::relief::{AlbedoField, FoldGeometry};
use super::texture::load_texture;
use super::SceneError;

const ORB_OUTER: PrimitiveId = PrimitiveId(0);
const ORB_INNER: PrimitiveId = PrimitiveId(1);
const RELIEF_PLANE: PrimitiveId = PrimitiveId(2);
const RELIEF_PATCH: PrimitiveId = PrimitiveId(3);
const FIRST_MESH: u32 = 4;

/// Drop of the flat plane under the fold patch, so the two never coincide.
const PLANE_DROP: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct Orb {
    pub shell: ShellPrimitive,
    pub glass: DielectricSpec,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Surface {
    Orb(ShellInterface),
    Diffuse(Rgb),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneHit {
    pub hit: SurfaceHit,
    pub surface: Surface,
}

#[derive(Debug, Clone)]
pub struct Scene {
    pub config: SceneConfig,
    pub camera: Camera,
    pub orb: Option<Orb>,
    relief_plane: Option<Plane>,
    relief_patch: Option<MeshPrimitive>,
    albedo: Option<AlbedoField>,
    meshes: Vec<(MeshPrimitive, Rgb)>,
    pub light_dirs: Vec<Vec3>,
    /// Radiance carried by each entry of `light_dirs`.
    pub light_radiance: Rgb,
    pub ambient: Rgb,
}

impl Scene {
    /// Builds the runtime scene. Relative texture and mesh paths resolve
    /// against `base_dir`.
    pub fn build(cfg: &SceneConfig, base_dir: &Path) -> Result<Scene, SceneError> {
        cfg.validate()?;
        let camera = Camera::new(&cfg.camera);

        let orb = if cfg.orb.enabled {
            let shell = ShellPrimitive::new(cfg.effective_orb_center(), cfg.orb.radius, cfg.orb.thickness_cm())
                .map_err(|e| SceneError::unit(e.to_string()))?;
            let glass = match cfg.orb.material {
                OrbMaterial::Dielectric(d) => d,
                OrbMaterial::Calcite(c) => DielectricSpec::clear(c.ior_ordinary),
            };
            Some(Orb { shell, glass })
        } else {
            None
        };

        let (mut relief_plane, mut relief_patch, mut albedo) = (None, None, None);
        if cfg.relief.enabled {
            let z = cfg.relief_z();
            let c = cfg.convergence_point();
            let folds: Vec<FoldGeometry> = cfg.relief.folds.iter().map(|f| FoldGeometry::new(f, c)).collect();
            let texture = match &cfg.relief.texture {
                Some(t) => Some((load_texture(&base_dir.join(&t.path))?, t.extent)),
                None => None,
            };
            let field = AlbedoField::new(&cfg.relief.albedo, c, texture, folds, &cfg.relief.strokes);
            let raised: Vec<_> = field.folds().iter().filter(|f| f.spec.ridge_height > 0.0).collect();
            let mut plane_z = z;
            if !raised.is_empty() {
                let (mut lo, mut hi) = raised[0].bounds();
                for f in &raised[1..] {
                    let (a, b) = f.bounds();
                    lo = Point2::new(lo.x.min(a.x), lo.y.min(a.y));
                    hi = Point2::new(hi.x.max(b.x), hi.y.max(b.y));
                }
                let k = cfg.relief.cells_per_cm;
                let cells = (
                    ((hi.x - lo.x) * k).ceil().max(1.0) as usize,
                    ((hi.y - lo.y) * k).ceil().max(1.0) as usize,
                );
                let patch = height_field((lo.x, hi.x), (lo.y, hi.y), cells, z, |x, y| {
                    field.height(Point2::new(x, y))
                })
                .map_err(|e| SceneError::invalid(format!("relief mesh: {e}")))?;
                relief_patch = Some(patch);
                plane_z -= PLANE_DROP;
            }
            relief_plane = Some(Plane::new(Vec3::new(0.0, 0.0, plane_z), Vec3::X, Vec3::Y, None));
            albedo = Some(field);
        }

        let mut meshes = Vec::new();
        for m in &cfg.meshes {
            let path = base_dir.join(&m.path);
            let raw = load_obj(&path).map_err(|source| SceneError::Mesh {
                path: path.display().to_string(),
                source,
            })?;
            let vertices = raw.vertices().iter().map(|&v| v * m.scale + m.translate).collect();
            let mesh = MeshPrimitive::new(vertices, raw.triangles().to_vec(), Vec::new()).map_err(|source| {
                SceneError::Mesh {
                    path: path.display().to_string(),
                    source,
                }
            })?;
            meshes.push((mesh, m.albedo));
        }

        Ok(Scene {
            config: cfg.clone(),
            camera,
            orb,
            relief_plane,
            relief_patch,
            albedo,
            meshes,
            light_dirs: cfg.lights.main_directions(),
            light_radiance: cfg.lights.per_direction_radiance(),
            ambient: cfg.lights.ambient_radiance,
        })
    }

    /// Replaces the orb's index of refraction.
    pub fn set_orb_ior(&mut self, ior: f64) {
        if let Some(orb) = &mut self.orb {
            orb.glass.ior = ior;
        }
    }

    pub fn albedo_field(&self) -> Option<&AlbedoField> {
        self.albedo.as_ref()
    }

    /// Image-space outline of the orb: centre and radius in pixels.
    pub fn orb_silhouette(&self) -> Option<(Point2, f64)> {
        let orb = self.orb.as_ref()?;
        self.camera
            .sphere_silhouette(orb.shell.center(), orb.shell.outer_radius())
    }

    fn diffuse_hits(&self, ray: &mut Ray, best: &mut Option<SceneHit>) {
        if let Some(patch) = &self.relief_patch {
            if let Some(h) = patch.intersect(ray) {
                let hit = patch
                    .surface_hit(ray, &h)
                    .with_ids(RELIEF_PATCH, MaterialId(RELIEF_PATCH.0));
                ray.t_max = hit.t;
                *best = Some(self.relief_hit(hit));
            }
        }
        if let Some(plane) = &self.relief_plane {
            if let Some(h) = plane.intersect(ray) {
                let hit = h.with_ids(RELIEF_PLANE, MaterialId(RELIEF_PLANE.0));
                ray.t_max = hit.t;
                *best = Some(self.relief_hit(hit));
            }
        }
        for (i, (mesh, albedo)) in self.meshes.iter().enumerate() {
            if let Some(h) = mesh.intersect(ray) {
                let id = FIRST_MESH + i as u32;
                let hit = mesh.surface_hit(ray, &h).with_ids(PrimitiveId(id), MaterialId(id));
                ray.t_max = hit.t;
                *best = Some(SceneHit {
                    hit,
                    surface: Surface::Diffuse(*albedo),
                });
            }
        }
    }

    fn relief_hit(&self, hit: SurfaceHit) -> SceneHit {
        let albedo = self
            .albedo
            .as_ref()
            .map_or(Rgb::BLACK, |a| a.albedo(Point2::new(hit.point.x, hit.point.y)));
        SceneHit {
            hit,
            surface: Surface::Diffuse(albedo),
        }
    }

    /// Nearest hit along `ray`.
    pub fn intersect(&self, ray: &Ray) -> Option<SceneHit> {
        let mut ray = *ray;
        let mut best = None;
        if let Some(orb) = &self.orb {
            if let Some(first) = intersect_shell(&ray, &orb.shell).into_iter().next() {
                let id = match first.interface {
                    ShellInterface::Outer => ORB_OUTER,
                    ShellInterface::Inner => ORB_INNER,
                };
                ray.t_max = first.hit.t;
                best = Some(SceneHit {
                    hit: first.hit.with_ids(id, MaterialId(ORB_OUTER.0)),
                    surface: Surface::Orb(first.interface),
                });
            }
        }
        self.diffuse_hits(&mut ray, &mut best);
        best
    }

    /// Whether anything opaque blocks `ray`. The orb is ignored: shadow rays
    /// do not see specular dielectrics.
    pub fn occluded(&self, ray: &Ray) -> bool {
        let mut ray = *ray;
        let mut best = None;
        self.diffuse_hits(&mut ray, &mut best);
        best.is_some()
    }
}
