//! Spheres and concentric spherical shells.
//!
//! A shell is a glass body bounded by an outer sphere and a concentric inner
//! sphere. Normals are oriented outward from the glass, so the inner
//! interface's normal points towards the centre, and a ray coming out of the
//! cavity is *entering* the glass.

use super::ray::{Ray, SurfaceHit};
use super::vector::{Point3, Vec3};
use super::GeomError;

/// Both roots of `|o + t d - c| = r` in ascending order.
///
/// Uses the discriminant form `r^2 - |oc - (oc.d) d|^2` and the
/// `q = -b - sign(b) sqrt(disc)` root pairing, which stays accurate when the
/// ray origin is far from the sphere relative to its radius.
#[inline]
pub fn sphere_roots(ray: &Ray, center: Point3, radius: f64) -> Option<(f64, f64)> {
    let oc = ray.origin - center;
    let b = oc.dot(ray.dir);
    let closest = oc - ray.dir * b;
    let disc = radius * radius - closest.length_squared();
    if disc < 0.0 {
        return None;
    }
    let c = oc.length_squared() - radius * radius;
    let q = -b - disc.sqrt().copysign(b);
    if q == 0.0 {
        return Some((0.0, 0.0));
    }
    let (t0, t1) = (c / q, q);
    Some(if t0 <= t1 { (t0, t1) } else { (t1, t0) })
}

/// Nearest intersection with a sphere inside the ray's parameter range.
pub fn intersect_sphere(ray: &Ray, center: Point3, radius: f64) -> Option<SurfaceHit> {
    debug_assert!(radius > 0.0);
    let (t0, t1) = sphere_roots(ray, center, radius)?;
    let t = if ray.contains(t0) {
        t0
    } else if ray.contains(t1) {
        t1
    } else {
        return None;
    };
    let normal = (ray.at(t) - center) / radius;
    Some(SurfaceHit::new(ray, t, normal))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellPrimitive {
    center: Point3,
    outer_radius: f64,
    thickness: f64,
}

impl ShellPrimitive {
    /// `thickness == outer_radius` describes a solid ball.
    pub fn new(center: Point3, outer_radius: f64, thickness: f64) -> Result<Self, GeomError> {
        if !(outer_radius > 0.0 && outer_radius.is_finite()) {
            return Err(GeomError::InvalidPrimitive(format!(
                "shell radius must be positive, got {outer_radius}"
            )));
        }
        if !(thickness > 0.0) || thickness > outer_radius {
            return Err(GeomError::InvalidPrimitive(format!(
                "shell thickness must lie in (0, {outer_radius}], got {thickness}"
            )));
        }
        Ok(ShellPrimitive {
            center,
            outer_radius,
            thickness,
        })
    }

    pub fn solid(center: Point3, radius: f64) -> Result<Self, GeomError> {
        ShellPrimitive::new(center, radius, radius)
    }

    pub fn center(&self) -> Point3 {
        self.center
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    pub fn inner_radius(&self) -> f64 {
        self.outer_radius - self.thickness
    }

    pub fn is_solid(&self) -> bool {
        self.inner_radius() <= 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShellInterface {
    Outer,
    Inner,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellHit {
    pub hit: SurfaceHit,
    pub interface: ShellInterface,
}

/// Every crossing of the shell's two interfaces within the ray range,
/// sorted by `t`.
pub fn intersect_shell(ray: &Ray, shell: &ShellPrimitive) -> Vec<ShellHit> {
    let mut hits = Vec::with_capacity(4);
    if let Some((t0, t1)) = sphere_roots(ray, shell.center, shell.outer_radius) {
        for t in [t0, t1] {
            if ray.contains(t) {
                let normal = (ray.at(t) - shell.center) / shell.outer_radius;
                hits.push(ShellHit {
                    hit: SurfaceHit::new(ray, t, normal),
                    interface: ShellInterface::Outer,
                });
            }
        }
    }
    if !shell.is_solid() {
        let r = shell.inner_radius();
        if let Some((t0, t1)) = sphere_roots(ray, shell.center, r) {
            for t in [t0, t1] {
                if ray.contains(t) {
                    let normal = (shell.center - ray.at(t)) / r;
                    hits.push(ShellHit {
                        hit: SurfaceHit::new(ray, t, normal),
                        interface: ShellInterface::Inner,
                    });
                }
            }
        }
    }
    hits.sort_by(|a, b| a.hit.t.total_cmp(&b.hit.t));
    hits
}

/// Evaluates the implicit function of the sphere: `|p - c| - r`.
pub fn sphere_residual(point: Point3, center: Point3, radius: f64) -> f64 {
    (point - center).length() - radius
}

/// Direction helper used by tests and scene code: unit vector from `a` to `b`.
pub fn direction_to(a: Point3, b: Point3) -> Vec3 {
    (b - a).normalized()
}
