//! Deterministic chief-ray tracer through a concentric shell in a plane.
//!
//! The ray follows transmission at every interface and reflects only under
//! total internal reflection, so the result is the geometric path a viewer
//! sees through the orb, not a radiometric estimate.

use crate::geom::{Point2, Vec2, Vec3};

use super::interface::{reflect, refract};
use super::OpticsError;

const MAX_EVENTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellPrimitive2D {
    pub center: Point2,
    pub outer_radius: f64,
    /// Equal to `outer_radius` for a solid disc.
    pub thickness: f64,
    pub ior: f64,
}

impl ShellPrimitive2D {
    pub fn new(center: Point2, outer_radius: f64, thickness: f64, ior: f64) -> Result<Self, OpticsError> {
        if !(outer_radius > 0.0) || !(thickness > 0.0) || thickness > outer_radius {
            return Err(OpticsError::InvalidShell {
                radius: outer_radius,
                thickness,
            });
        }
        if !(ior > 0.0) {
            return Err(OpticsError::InvalidIor(ior));
        }
        Ok(ShellPrimitive2D {
            center,
            outer_radius,
            thickness,
            ior,
        })
    }

    pub fn inner_radius(&self) -> f64 {
        self.outer_radius - self.thickness
    }

    fn is_solid(&self) -> bool {
        self.inner_radius() <= 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Region {
    Outside,
    Glass,
    Cavity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Refraction,
    TotalInternalReflection,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceEvent {
    pub point: Point2,
    pub inner: bool,
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolylinePath {
    /// Eye, every interface point, then one point along the exit ray.
    pub points: Vec<Point2>,
    pub events: Vec<InterfaceEvent>,
    pub exit_origin: Point2,
    pub exit_dir: Vec2,
    /// `true` when the ray never touched the orb.
    pub undeviated: bool,
}

impl PolylinePath {
    /// Where the exit ray meets the line through `point` with normal `normal`.
    pub fn exit_hit_on_line(&self, point: Point2, normal: Vec2) -> Option<Point2> {
        let denom = self.exit_dir.dot(normal);
        if denom.abs() < 1e-300 {
            return None;
        }
        let t = (point - self.exit_origin).dot(normal) / denom;
        (t >= 0.0).then(|| self.exit_origin + self.exit_dir * t)
    }

    /// Angle between the exit direction and `reference`, in radians.
    pub fn angular_deviation(&self, reference: Vec2) -> f64 {
        let r = reference.normalized();
        self.exit_dir.cross(r).atan2(self.exit_dir.dot(r)).abs()
    }
}

/// Forward crossing with a circle. When `p` lies on that circle the zero
/// root is dropped analytically, leaving the chord length `-2 oc.d`.
fn circle_hit(p: Point2, d: Vec2, c: Point2, r: f64, on_circle: bool) -> Option<f64> {
    let oc = p - c;
    let b = oc.dot(d);
    if on_circle {
        return (b < 0.0).then(|| -2.0 * b);
    }
    let closest = oc - d * b;
    let disc = r * r - closest.dot(closest);
    if disc < 0.0 {
        return None;
    }
    let cc = oc.dot(oc) - r * r;
    let q = -b - disc.sqrt().copysign(b);
    if q == 0.0 {
        return None;
    }
    let (t0, t1) = if cc / q <= q { (cc / q, q) } else { (q, cc / q) };
    if t0 > 0.0 {
        Some(t0)
    } else if t1 > 0.0 {
        Some(t1)
    } else {
        None
    }
}

fn to3(v: Vec2) -> Vec3 {
    Vec3::new(v.x, v.y, 0.0)
}

fn to2(v: Vec3) -> Vec2 {
    Vec2::new(v.x, v.y)
}

/// Traces the chief ray from `eye` towards `target` through `orb`.
pub fn trace_shell_2d(eye: Point2, orb: &ShellPrimitive2D, target: Point2) -> Result<PolylinePath, OpticsError> {
    if (eye - orb.center).length() <= orb.outer_radius {
        return Err(OpticsError::EyeInsideOrb);
    }
    let mut dir = (target - eye).normalized();
    let mut pos = eye;
    let mut region = Region::Outside;
    let mut points = vec![eye];
    let mut events: Vec<InterfaceEvent> = Vec::new();

    for _ in 0..MAX_EVENTS {
        let last = events.last().map(|e| e.inner);
        let outer = circle_hit(pos, dir, orb.center, orb.outer_radius, last == Some(false));
        let inner = if orb.is_solid() || region == Region::Outside {
            None
        } else {
            circle_hit(pos, dir, orb.center, orb.inner_radius(), last == Some(true))
        };
        let (t, is_inner) = match (outer, inner) {
            (Some(a), Some(b)) if b < a => (b, true),
            (Some(a), _) => (a, false),
            (None, Some(b)) => (b, true),
            (None, None) => break,
        };
        if region == Region::Outside && is_inner {
            unreachable!("inner interface reached from outside");
        }
        let hit = pos + dir * t;
        let radial = (hit - orb.center).normalized();
        let (n_from, n_to, next) = match (region, is_inner) {
            (Region::Outside, false) => (1.0, orb.ior, Region::Glass),
            (Region::Glass, false) => (orb.ior, 1.0, Region::Outside),
            (Region::Glass, true) => (orb.ior, 1.0, Region::Cavity),
            (Region::Cavity, true) => (1.0, orb.ior, Region::Glass),
            (r, i) => unreachable!("impossible crossing {r:?} inner={i}"),
        };
        // Normal facing against the travel direction.
        let facing = if dir.dot(radial) < 0.0 { radial } else { -radial };
        let (new_dir, kind) = match refract(to3(dir), to3(facing), n_from / n_to) {
            Some(t) => {
                region = next;
                (to2(t).normalized(), EventKind::Refraction)
            }
            None => (
                to2(reflect(to3(dir), to3(facing))).normalized(),
                EventKind::TotalInternalReflection,
            ),
        };
        points.push(hit);
        events.push(InterfaceEvent {
            point: hit,
            inner: is_inner,
            kind,
        });
        pos = hit;
        dir = new_dir;
        if region == Region::Outside {
            break;
        }
    }
    if region != Region::Outside {
        return Err(OpticsError::TrappedRay);
    }
    points.push(pos + dir * orb.outer_radius);
    Ok(PolylinePath {
        undeviated: events.is_empty(),
        points,
        events,
        exit_origin: pos,
        exit_dir: dir,
    })
}
