//! Vectors, rays and ray/primitive intersection.
//!
//! Scene units are centimetres throughout.

mod mesh;
mod obj;
mod plane;
mod ray;
mod sphere;
mod vector;

pub use mesh::{height_field, intersect_mesh, Aabb, MeshHit, MeshPrimitive, MIN_TRIANGLE_AREA};
pub use obj::{load_obj, parse_obj};
pub use plane::Plane;
pub use ray::{MaterialId, PrimitiveId, Ray, SurfaceHit, RAY_EPSILON};
pub use sphere::{
    direction_to, intersect_shell, intersect_sphere, sphere_residual, sphere_roots, ShellHit, ShellInterface,
    ShellPrimitive,
};
pub use vector::{Point2, Point3, Vec2, Vec3};

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum GeomError {
    #[error("invalid primitive: {0}")]
    InvalidPrimitive(String),
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("OBJ import: {0}")]
    Obj(String),
}
