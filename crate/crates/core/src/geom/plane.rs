use super::ray::{Ray, SurfaceHit};
use super::vector::{Point3, Vec2, Vec3};

/// Planar rectangle (or unbounded plane) with an in-plane frame.
///
/// `uv` on hits is the in-plane coordinate `(dot(p - origin, u_axis),
/// dot(p - origin, v_axis))` in centimetres, not normalised.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub origin: Point3,
    pub u_axis: Vec3,
    pub v_axis: Vec3,
    pub normal: Vec3,
    /// Half extents along `u_axis` / `v_axis`; `None` for an unbounded plane.
    pub half_extent: Option<Vec2>,
}

impl Plane {
    pub fn new(origin: Point3, u_axis: Vec3, v_axis: Vec3, half_extent: Option<Vec2>) -> Self {
        let u_axis = u_axis.normalized();
        let v_axis = v_axis.normalized();
        Plane {
            origin,
            u_axis,
            v_axis,
            normal: u_axis.cross(v_axis).normalized(),
            half_extent,
        }
    }

    pub fn local(&self, p: Point3) -> Vec2 {
        let d = p - self.origin;
        Vec2::new(d.dot(self.u_axis), d.dot(self.v_axis))
    }

    pub fn world(&self, uv: Vec2) -> Point3 {
        self.origin + self.u_axis * uv.x + self.v_axis * uv.y
    }

    pub fn intersect(&self, ray: &Ray) -> Option<SurfaceHit> {
        let denom = ray.dir.dot(self.normal);
        if denom == 0.0 {
            return None;
        }
        let t = (self.origin - ray.origin).dot(self.normal) / denom;
        if !ray.contains(t) {
            return None;
        }
        let p = ray.at(t);
        let uv = self.local(p);
        if let Some(h) = self.half_extent {
            if uv.x.abs() > h.x || uv.y.abs() > h.y {
                return None;
            }
        }
        let mut hit = SurfaceHit::new(ray, t, self.normal);
        hit.uv = uv;
        Some(hit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hits_facing_plane() {
        let plane = Plane::new(Vec3::new(0.0, 0.0, -25.0), Vec3::X, Vec3::Y, None);
        let ray = Ray::new(Vec3::new(1.0, 2.0, 65.0), -Vec3::Z);
        let hit = plane.intersect(&ray).unwrap();
        assert!((hit.t - 90.0).abs() < 1e-12);
        assert_eq!(hit.uv, Vec2::new(1.0, 2.0));
        assert!(hit.entering);
    }

    #[test]
    fn bounded_plane_rejects_outside() {
        let plane = Plane::new(Vec3::ZERO, Vec3::X, Vec3::Y, Some(Vec2::new(1.0, 1.0)));
        assert!(plane.intersect(&Ray::new(Vec3::new(2.0, 0.0, 5.0), -Vec3::Z)).is_none());
        assert!(plane.intersect(&Ray::new(Vec3::new(0.5, 0.0, 5.0), -Vec3::Z)).is_some());
    }

    #[test]
    fn parallel_ray_misses() {
        let plane = Plane::new(Vec3::ZERO, Vec3::X, Vec3::Y, None);
        assert!(plane.intersect(&Ray::new(Vec3::new(0.0, 0.0, 1.0), Vec3::X)).is_none());
    }
}
