use crate::geom::{Point2, Point3, Ray, Vec3};

use super::config::CameraSpec;

/// Pinhole camera. Pixel coordinates are continuous: `x` grows to the
/// right, `y` grows downwards, and pixel `(i, j)` covers `[i, i+1) x [j, j+1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Camera {
    pub position: Point3,
    forward: Vec3,
    right: Vec3,
    up: Vec3,
    /// Half-height of the image plane at unit distance.
    tan_half: f64,
    width: u32,
    height: u32,
}

impl Camera {
    pub fn new(spec: &CameraSpec) -> Self {
        let forward = (spec.look_at - spec.position).normalized();
        let right = forward.cross(spec.up).normalized();
        let up = right.cross(forward);
        Camera {
            position: spec.position,
            forward,
            right,
            up,
            tan_half: (spec.vertical_fov_deg.to_radians() * 0.5).tan(),
            width: spec.width,
            height: spec.height,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn forward(&self) -> Vec3 {
        self.forward
    }

    pub fn right(&self) -> Vec3 {
        self.right
    }

    pub fn up(&self) -> Vec3 {
        self.up
    }

    /// Pixels per unit of image-plane distance at unit depth.
    pub fn focal_px(&self) -> f64 {
        0.5 * self.height as f64 / self.tan_half
    }

    /// Primary ray through the continuous pixel position `(x, y)`.
    pub fn generate_ray(&self, x: f64, y: f64) -> Ray {
        let f = self.focal_px();
        let sx = (x - 0.5 * self.width as f64) / f;
        let sy = (0.5 * self.height as f64 - y) / f;
        Ray::new(self.position, self.forward + self.right * sx + self.up * sy)
    }

    /// Continuous pixel position of `p`, or `None` when it lies behind the
    /// camera.
    pub fn project(&self, p: Point3) -> Option<Point2> {
        let d = p - self.position;
        let z = d.dot(self.forward);
        if !(z > 0.0) {
            return None;
        }
        let f = self.focal_px();
        Some(Point2::new(
            0.5 * self.width as f64 + f * d.dot(self.right) / z,
            0.5 * self.height as f64 - f * d.dot(self.up) / z,
        ))
    }

    /// Image-space circle outlining a sphere: centre and radius in pixels.
    /// Exact for a sphere centred on the optical axis, and a close
    /// approximation off axis.
    pub fn sphere_silhouette(&self, center: Point3, radius: f64) -> Option<(Point2, f64)> {
        let d = center - self.position;
        let dist = d.length();
        if dist <= radius {
            return None;
        }
        let c = self.project(center)?;
        let half = (radius / dist).asin();
        let axis_angle = d.normalized().dot(self.forward).clamp(-1.0, 1.0).acos();
        let f = self.focal_px();
        // Radius along the direction towards the image centre, averaged
        // with the tangential one.
        let radial = f * ((axis_angle + half).tan() - (axis_angle - half).tan()) * 0.5;
        let tangential = f * half.tan() / axis_angle.cos();
        Some((c, 0.5 * (radial + tangential)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centre_pixel_looks_forward_and_projects_back() {
        let cam = Camera::new(&CameraSpec::default());
        let r = cam.generate_ray(512.0, 512.0);
        assert!((r.dir - Vec3::new(0.0, 0.0, -1.0)).length() < 1e-12);
        let p = Point3::new(3.0, -2.0, -25.0);
        let px = cam.project(p).unwrap();
        let back = cam.generate_ray(px.x, px.y);
        let t = (p - back.origin).length();
        assert!((back.at(t) - p).length() < 1e-9);
        // +x lands right of centre, +y above it.
        assert!(px.x > 512.0 && px.y > 512.0);
    }

    #[test]
    fn silhouette_of_centred_orb() {
        let cam = Camera::new(&CameraSpec::default());
        let (c, r) = cam.sphere_silhouette(Point3::ZERO, 6.8).unwrap();
        assert!((c.x - 512.0).abs() < 1e-9 && (c.y - 512.0).abs() < 1e-9);
        let expected = cam.focal_px() * (6.8f64 / 65.0).asin().tan();
        assert!((r - expected).abs() < 1e-9);
    }
}
