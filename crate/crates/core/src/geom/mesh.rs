//! Triangle meshes with a bounding-volume hierarchy.

use super::ray::{PrimitiveId, Ray, SurfaceHit};
use super::vector::{Point3, Vec2, Vec3};
use super::GeomError;

/// Minimum triangle area accepted by [`MeshPrimitive::new`] (cm^2).
pub const MIN_TRIANGLE_AREA: f64 = 1e-12;

const LEAF_SIZE: usize = 4;
const SAH_BINS: usize = 12;
/// SAH splits below this depth; median splits beyond it keep the tree shallow
/// enough for the fixed traversal stack.
const SAH_DEPTH_LIMIT: usize = 48;
const MAX_STACK: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    pub const EMPTY: Aabb = Aabb {
        min: Vec3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY),
        max: Vec3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
    };

    pub fn grow(&mut self, p: Vec3) {
        self.min = self.min.min(p);
        self.max = self.max.max(p);
    }

    pub fn union(&self, o: &Aabb) -> Aabb {
        Aabb {
            min: self.min.min(o.min),
            max: self.max.max(o.max),
        }
    }

    pub fn surface_area(&self) -> f64 {
        let d = self.max - self.min;
        if d.x < 0.0 {
            return 0.0;
        }
        2.0 * (d.x * d.y + d.y * d.z + d.z * d.x)
    }

    /// Slab test. The far distance is padded by a few ulps so that rounding
    /// never culls a box whose triangles the exhaustive test would hit.
    #[inline]
    fn hit_range(&self, origin: Vec3, inv_dir: Vec3, t_min: f64, t_max: f64) -> Option<f64> {
        let mut t0 = t_min;
        let mut t1 = t_max;
        for axis in 0..3 {
            let mut near = (self.min[axis] - origin[axis]) * inv_dir[axis];
            let mut far = (self.max[axis] - origin[axis]) * inv_dir[axis];
            if near > far {
                std::mem::swap(&mut near, &mut far);
            }
            far *= 1.0 + 4.0 * f64::EPSILON;
            // NaN (0 * inf on a slab boundary) leaves the bound unchanged.
            if near > t0 {
                t0 = near;
            }
            if far < t1 {
                t1 = far;
            }
            if t0 > t1 {
                return None;
            }
        }
        Some(t0)
    }
}

#[derive(Debug, Clone)]
struct BvhNode {
    bounds: Aabb,
    /// Leaf: first index into `order`. Interior: index of the second child
    /// (the first child directly follows its parent).
    offset: u32,
    /// Triangle count for leaves, 0 for interior nodes.
    count: u32,
    axis: u8,
}

/// Nearest-hit result from a mesh query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshHit {
    pub t: f64,
    pub triangle: u32,
    /// Barycentric weights of the three vertices.
    pub bary: [f64; 3],
}

#[derive(Debug, Clone)]
pub struct MeshPrimitive {
    vertices: Vec<Point3>,
    triangles: Vec<[u32; 3]>,
    uvs: Vec<Vec2>,
    nodes: Vec<BvhNode>,
    order: Vec<u32>,
}

/// Precomputed ray shear for the watertight triangle test
/// (Woop, Benthin and Wald, JCGT 2013).
#[derive(Debug, Clone, Copy)]
struct RayShear {
    kx: usize,
    ky: usize,
    kz: usize,
    sx: f64,
    sy: f64,
    sz: f64,
}

impl RayShear {
    fn new(dir: Vec3) -> Self {
        let a = [dir.x.abs(), dir.y.abs(), dir.z.abs()];
        let kz = if a[0] > a[1] {
            if a[0] > a[2] {
                0
            } else {
                2
            }
        } else if a[1] > a[2] {
            1
        } else {
            2
        };
        let mut kx = (kz + 1) % 3;
        let mut ky = (kx + 1) % 3;
        if dir[kz] < 0.0 {
            std::mem::swap(&mut kx, &mut ky);
        }
        RayShear {
            kx,
            ky,
            kz,
            sx: dir[kx] / dir[kz],
            sy: dir[ky] / dir[kz],
            sz: 1.0 / dir[kz],
        }
    }
}

#[inline]
fn intersect_triangle(ray: &Ray, shear: &RayShear, p0: Vec3, p1: Vec3, p2: Vec3) -> Option<(f64, [f64; 3])> {
    let a = p0 - ray.origin;
    let b = p1 - ray.origin;
    let c = p2 - ray.origin;
    let (kx, ky, kz) = (shear.kx, shear.ky, shear.kz);
    let ax = a[kx] - shear.sx * a[kz];
    let ay = a[ky] - shear.sy * a[kz];
    let bx = b[kx] - shear.sx * b[kz];
    let by = b[ky] - shear.sy * b[kz];
    let cx = c[kx] - shear.sx * c[kz];
    let cy = c[ky] - shear.sy * c[kz];
    let u = cx * by - cy * bx;
    let v = ax * cy - ay * cx;
    let w = bx * ay - by * ax;
    if (u < 0.0 || v < 0.0 || w < 0.0) && (u > 0.0 || v > 0.0 || w > 0.0) {
        return None;
    }
    let det = u + v + w;
    if det == 0.0 {
        return None;
    }
    let az = shear.sz * a[kz];
    let bz = shear.sz * b[kz];
    let cz = shear.sz * c[kz];
    let t = (u * az + v * bz + w * cz) / det;
    if !ray.contains(t) {
        return None;
    }
    Some((t, [u / det, v / det, w / det]))
}

#[inline]
fn better(candidate: &MeshHit, best: &Option<MeshHit>) -> bool {
    match best {
        None => true,
        Some(b) => candidate.t < b.t || (candidate.t == b.t && candidate.triangle < b.triangle),
    }
}

impl MeshPrimitive {
    /// Validates the mesh and builds its BVH. `uvs` may be empty, in which
    /// case every vertex gets `(0, 0)`.
    pub fn new(vertices: Vec<Point3>, triangles: Vec<[u32; 3]>, uvs: Vec<Vec2>) -> Result<Self, GeomError> {
        if triangles.is_empty() {
            return Err(GeomError::InvalidMesh("mesh has no triangles".into()));
        }
        let uvs = if uvs.is_empty() {
            vec![Vec2::ZERO; vertices.len()]
        } else if uvs.len() != vertices.len() {
            return Err(GeomError::InvalidMesh(format!(
                "{} uvs for {} vertices",
                uvs.len(),
                vertices.len()
            )));
        } else {
            uvs
        };
        for (i, tri) in triangles.iter().enumerate() {
            if let Some(&bad) = tri.iter().find(|&&k| k as usize >= vertices.len()) {
                return Err(GeomError::InvalidMesh(format!(
                    "triangle {i} references vertex {bad}, mesh has {}",
                    vertices.len()
                )));
            }
            let [p0, p1, p2] = tri.map(|k| vertices[k as usize]);
            let area = 0.5 * (p1 - p0).cross(p2 - p0).length();
            if !(area > MIN_TRIANGLE_AREA) {
                return Err(GeomError::InvalidMesh(format!(
                    "triangle {i} is degenerate (area {area:e} cm^2)"
                )));
            }
        }
        let mut mesh = MeshPrimitive {
            vertices,
            triangles,
            uvs,
            nodes: Vec::new(),
            order: Vec::new(),
        };
        mesh.build_bvh();
        Ok(mesh)
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[u32; 3]] {
        &self.triangles
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn bounds(&self) -> Aabb {
        self.nodes[0].bounds
    }

    fn corners(&self, tri: u32) -> [Vec3; 3] {
        self.triangles[tri as usize].map(|k| self.vertices[k as usize])
    }

    fn build_bvh(&mut self) {
        let n = self.triangles.len();
        let mut boxes = Vec::with_capacity(n);
        let mut centroids = Vec::with_capacity(n);
        for i in 0..n as u32 {
            let [a, b, c] = self.corners(i);
            let mut bb = Aabb::EMPTY;
            bb.grow(a);
            bb.grow(b);
            bb.grow(c);
            boxes.push(bb);
            centroids.push((a + b + c) / 3.0);
        }
        let mut order: Vec<u32> = (0..n as u32).collect();
        let mut nodes = Vec::with_capacity(2 * n / LEAF_SIZE + 1);
        build_node(&mut nodes, &mut order, 0, n, 0, &boxes, &centroids);
        self.nodes = nodes;
        self.order = order;
    }

    /// Nearest hit via BVH traversal. Ties in `t` go to the lowest triangle
    /// index, matching [`MeshPrimitive::intersect_exhaustive`].
    pub fn intersect(&self, ray: &Ray) -> Option<MeshHit> {
        let shear = RayShear::new(ray.dir);
        let inv = Vec3::new(1.0 / ray.dir.x, 1.0 / ray.dir.y, 1.0 / ray.dir.z);
        let mut best: Option<MeshHit> = None;
        let mut stack = [0u32; MAX_STACK];
        let mut sp = 0usize;
        let mut node_idx = 0usize;
        loop {
            let node = &self.nodes[node_idx];
            let limit = best.map_or(ray.t_max, |b| b.t);
            if node.bounds.hit_range(ray.origin, inv, ray.t_min, limit).is_some() {
                if node.count > 0 {
                    let start = node.offset as usize;
                    for &tri in &self.order[start..start + node.count as usize] {
                        let [a, b, c] = self.corners(tri);
                        if let Some((t, bary)) = intersect_triangle(ray, &shear, a, b, c) {
                            let cand = MeshHit { t, triangle: tri, bary };
                            if better(&cand, &best) {
                                best = Some(cand);
                            }
                        }
                    }
                } else {
                    // Near child first.
                    let (first, second) = if ray.dir[node.axis as usize] < 0.0 {
                        (node.offset as usize, node_idx + 1)
                    } else {
                        (node_idx + 1, node.offset as usize)
                    };
                    stack[sp] = second as u32;
                    sp += 1;
                    node_idx = first;
                    continue;
                }
            }
            if sp == 0 {
                break;
            }
            sp -= 1;
            node_idx = stack[sp] as usize;
        }
        best
    }

    /// Reference nearest-hit query over every triangle.
    pub fn intersect_exhaustive(&self, ray: &Ray) -> Option<MeshHit> {
        let shear = RayShear::new(ray.dir);
        let mut best = None;
        for tri in 0..self.triangles.len() as u32 {
            let [a, b, c] = self.corners(tri);
            if let Some((t, bary)) = intersect_triangle(ray, &shear, a, b, c) {
                let cand = MeshHit { t, triangle: tri, bary };
                if better(&cand, &best) {
                    best = Some(cand);
                }
            }
        }
        best
    }

    pub fn geometric_normal(&self, tri: u32) -> Vec3 {
        let [a, b, c] = self.corners(tri);
        (b - a).cross(c - a).normalized()
    }

    pub fn interpolate_uv(&self, hit: &MeshHit) -> Vec2 {
        let [i0, i1, i2] = self.triangles[hit.triangle as usize];
        let [w0, w1, w2] = hit.bary;
        self.uvs[i0 as usize] * w0 + self.uvs[i1 as usize] * w1 + self.uvs[i2 as usize] * w2
    }

    pub fn surface_hit(&self, ray: &Ray, hit: &MeshHit) -> SurfaceHit {
        let mut sh = SurfaceHit::new(ray, hit.t, self.geometric_normal(hit.triangle));
        sh.primitive = PrimitiveId(hit.triangle);
        sh.uv = self.interpolate_uv(hit);
        sh
    }
}

fn build_node(
    nodes: &mut Vec<BvhNode>,
    order: &mut [u32],
    start: usize,
    end: usize,
    depth: usize,
    boxes: &[Aabb],
    centroids: &[Vec3],
) -> usize {
    let idx = nodes.len();
    let mut bounds = Aabb::EMPTY;
    let mut cbounds = Aabb::EMPTY;
    for &t in &order[start..end] {
        bounds = bounds.union(&boxes[t as usize]);
        cbounds.grow(centroids[t as usize]);
    }
    nodes.push(BvhNode {
        bounds,
        offset: start as u32,
        count: (end - start) as u32,
        axis: 0,
    });
    let count = end - start;
    if count <= LEAF_SIZE {
        return idx;
    }
    let extent = cbounds.max - cbounds.min;
    let axis = if extent.x >= extent.y && extent.x >= extent.z {
        0
    } else if extent.y >= extent.z {
        1
    } else {
        2
    };
    if extent[axis] <= 0.0 {
        return idx;
    }

    // Binned surface-area heuristic along the widest centroid axis.
    let lo = cbounds.min[axis];
    let scale = SAH_BINS as f64 / extent[axis];
    let bin_of = |t: u32| (((centroids[t as usize][axis] - lo) * scale) as usize).min(SAH_BINS - 1);
    let mut bin_boxes = [Aabb::EMPTY; SAH_BINS];
    let mut bin_counts = [0usize; SAH_BINS];
    for &t in &order[start..end] {
        let b = bin_of(t);
        bin_counts[b] += 1;
        bin_boxes[b] = bin_boxes[b].union(&boxes[t as usize]);
    }
    let mut best_cost = f64::INFINITY;
    let mut best_split = 0;
    for split in 1..SAH_BINS {
        if depth >= SAH_DEPTH_LIMIT {
            break;
        }
        let (mut lb, mut rb) = (Aabb::EMPTY, Aabb::EMPTY);
        let (mut lc, mut rc) = (0, 0);
        for b in 0..split {
            lb = lb.union(&bin_boxes[b]);
            lc += bin_counts[b];
        }
        for b in split..SAH_BINS {
            rb = rb.union(&bin_boxes[b]);
            rc += bin_counts[b];
        }
        if lc == 0 || rc == 0 {
            continue;
        }
        let cost = lb.surface_area() * lc as f64 + rb.surface_area() * rc as f64;
        if cost < best_cost {
            best_cost = cost;
            best_split = split;
        }
    }
    let mid = if best_split == 0 {
        // All centroids in one bin: fall back to a median split.
        order[start..end].sort_by(|&a, &b| centroids[a as usize][axis].total_cmp(&centroids[b as usize][axis]));
        start + count / 2
    } else {
        let slice = &mut order[start..end];
        let mut i = 0;
        for j in 0..slice.len() {
            if bin_of(slice[j]) < best_split {
                slice.swap(i, j);
                i += 1;
            }
        }
        start + i
    };

    build_node(nodes, order, start, mid, depth + 1, boxes, centroids);
    let second = build_node(nodes, order, mid, end, depth + 1, boxes, centroids);
    let node = &mut nodes[idx];
    node.offset = second as u32;
    node.count = 0;
    node.axis = axis as u8;
    idx
}

/// Nearest hit on a mesh as a [`SurfaceHit`] whose `primitive` is the
/// triangle index.
pub fn intersect_mesh(ray: &Ray, mesh: &MeshPrimitive) -> Option<SurfaceHit> {
    mesh.intersect(ray).map(|h| mesh.surface_hit(ray, &h))
}

/// Regular-grid height field over the rectangle `[x0, x1] x [y0, y1]` in the
/// plane `z = base_z`, displaced along +z by `height(x, y)`. UVs are the
/// in-plane coordinates. Triangles wind counter-clockwise seen from +z.
pub fn height_field<F: Fn(f64, f64) -> f64>(
    x_range: (f64, f64),
    y_range: (f64, f64),
    cells: (usize, usize),
    base_z: f64,
    height: F,
) -> Result<MeshPrimitive, GeomError> {
    let (nx, ny) = cells;
    if nx == 0 || ny == 0 {
        return Err(GeomError::InvalidMesh("height field needs at least one cell".into()));
    }
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    let mut uvs = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        let y = y_range.0 + (y_range.1 - y_range.0) * j as f64 / ny as f64;
        for i in 0..=nx {
            let x = x_range.0 + (x_range.1 - x_range.0) * i as f64 / nx as f64;
            vertices.push(Vec3::new(x, y, base_z + height(x, y)));
            uvs.push(Vec2::new(x, y));
        }
    }
    let stride = (nx + 1) as u32;
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny as u32 {
        for i in 0..nx as u32 {
            let a = j * stride + i;
            let b = a + 1;
            let c = a + stride;
            let d = c + 1;
            triangles.push([a, b, d]);
            triangles.push([a, d, c]);
        }
    }
    MeshPrimitive::new(vertices, triangles, uvs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn right_triangle() -> MeshPrimitive {
        MeshPrimitive::new(
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
            ],
            vec![[0, 1, 2]],
            vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn centroid_hit_has_equal_barycentrics() {
        let mesh = right_triangle();
        let c = Vec3::new(1.0 / 3.0, 1.0 / 3.0, 0.0);
        let ray = Ray::new(c + Vec3::Z * 5.0, -Vec3::Z);
        let hit = mesh.intersect(&ray).unwrap();
        for w in hit.bary {
            assert!((w - 1.0 / 3.0).abs() < 1e-12);
        }
        let sh = intersect_mesh(&ray, &mesh).unwrap();
        assert!((sh.uv.x - 1.0 / 3.0).abs() < 1e-12 && (sh.uv.y - 1.0 / 3.0).abs() < 1e-12);
        assert!((sh.t - 5.0).abs() < 1e-12);
        assert!(sh.entering);
    }

    #[test]
    fn coplanar_ray_misses() {
        let mesh = right_triangle();
        let ray = Ray::new(Vec3::new(-1.0, 0.25, 0.0), Vec3::X);
        assert!(mesh.intersect(&ray).is_none());
        assert!(mesh.intersect_exhaustive(&ray).is_none());
    }

    #[test]
    fn rejects_bad_indices_and_degenerate_triangles() {
        let v = vec![Vec3::ZERO, Vec3::X, Vec3::Y];
        assert!(matches!(
            MeshPrimitive::new(v.clone(), vec![[0, 1, 3]], vec![]),
            Err(GeomError::InvalidMesh(_))
        ));
        let collinear = vec![Vec3::ZERO, Vec3::X, Vec3::X * 2.0];
        assert!(MeshPrimitive::new(collinear, vec![[0, 1, 2]], vec![]).is_err());
        assert!(MeshPrimitive::new(v, vec![], vec![]).is_err());
    }

    #[test]
    fn shared_edge_tie_goes_to_lowest_index() {
        // Two triangles sharing the diagonal of a unit square.
        let mesh = MeshPrimitive::new(
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(1.0, 1.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
            ],
            vec![[0, 1, 2], [0, 2, 3]],
            vec![],
        )
        .unwrap();
        let ray = Ray::new(Vec3::new(0.5, 0.5, 1.0), -Vec3::Z);
        assert_eq!(mesh.intersect(&ray).unwrap().triangle, 0);
        assert_eq!(mesh.intersect_exhaustive(&ray).unwrap().triangle, 0);
    }

    #[test]
    fn height_field_normals_face_up() {
        let hf = height_field((-1.0, 1.0), (-1.0, 1.0), (4, 4), 0.0, |_, _| 0.0).unwrap();
        assert_eq!(hf.len(), 32);
        for t in 0..hf.len() as u32 {
            assert!((hf.geometric_normal(t).z - 1.0).abs() < 1e-12);
        }
    }
}
