use super::vector::{Point3, Vec2, Vec3};

/// Offset applied along the surface normal when spawning secondary rays (cm).
pub const RAY_EPSILON: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub origin: Point3,
    pub dir: Vec3,
    pub t_min: f64,
    pub t_max: f64,
}

impl Ray {
    /// Ray over `[0, inf)`. `dir` is normalised here.
    pub fn new(origin: Point3, dir: Vec3) -> Self {
        Ray::with_range(origin, dir, 0.0, f64::INFINITY)
    }

    pub fn with_range(origin: Point3, dir: Vec3, t_min: f64, t_max: f64) -> Self {
        debug_assert!(t_min >= 0.0 && t_min < t_max, "bad ray range [{t_min}, {t_max}]");
        Ray {
            origin,
            dir: dir.normalized(),
            t_min,
            t_max,
        }
    }

    #[inline]
    pub fn at(&self, t: f64) -> Point3 {
        self.origin + self.dir * t
    }

    #[inline]
    pub fn contains(&self, t: f64) -> bool {
        t >= self.t_min && t <= self.t_max
    }

    /// Spawns a ray leaving `point` in `dir`, nudged off the surface with
    /// geometric normal `normal` towards the side `dir` points into.
    pub fn spawn(point: Point3, normal: Vec3, dir: Vec3) -> Self {
        let side = if dir.dot(normal) >= 0.0 { normal } else { -normal };
        Ray::new(point + side * RAY_EPSILON, dir)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PrimitiveId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MaterialId(pub u32);

/// Ray/surface intersection record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceHit {
    pub t: f64,
    pub point: Point3,
    /// Geometric normal, oriented outward from the primitive.
    pub normal: Vec3,
    pub primitive: PrimitiveId,
    pub material: MaterialId,
    /// The ray arrived from the side the outward normal points into.
    pub entering: bool,
    pub uv: Vec2,
}

impl SurfaceHit {
    pub fn new(ray: &Ray, t: f64, normal: Vec3) -> Self {
        SurfaceHit {
            t,
            point: ray.at(t),
            normal,
            primitive: PrimitiveId::default(),
            material: MaterialId::default(),
            entering: ray.dir.dot(normal) < 0.0,
            uv: Vec2::ZERO,
        }
    }

    pub fn with_ids(mut self, primitive: PrimitiveId, material: MaterialId) -> Self {
        self.primitive = primitive;
        self.material = material;
        self
    }
}
