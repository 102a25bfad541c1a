//! Procedural stand-in relief: albedo field and fold height profile.

use crate::color::Rgb;
use crate::geom::{Point2, Vec2};

use super::config::{AlbedoSpec, FoldSpec, StrokeSpec};
use super::texture::Texture;

const ARC_SEGMENTS: usize = 16;
/// Distance over which a ridge rises at either end of its fold.
const END_TAPER: f64 = 0.5;

/// Nearest-point query on a polyline.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Projection {
    /// Arc length of the foot point from the first vertex.
    along: f64,
    /// Signed distance, positive on the counter-clockwise side.
    side: f64,
}

#[derive(Debug, Clone, PartialEq)]
struct Polyline {
    points: Vec<Point2>,
    lengths: Vec<f64>,
    min: Point2,
    max: Point2,
}

impl Polyline {
    fn new(points: Vec<Point2>) -> Self {
        let mut lengths = vec![0.0];
        for w in points.windows(2) {
            let last = *lengths.last().unwrap();
            lengths.push(last + (w[1] - w[0]).length());
        }
        let mut min = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &points {
            min = Point2::new(min.x.min(p.x), min.y.min(p.y));
            max = Point2::new(max.x.max(p.x), max.y.max(p.y));
        }
        Polyline {
            points,
            lengths,
            min,
            max,
        }
    }

    fn total(&self) -> f64 {
        *self.lengths.last().unwrap()
    }

    fn near_box(&self, p: Point2, margin: f64) -> bool {
        p.x >= self.min.x - margin
            && p.x <= self.max.x + margin
            && p.y >= self.min.y - margin
            && p.y <= self.max.y + margin
    }

    /// Foot point on the nearest segment. Points beyond an end project onto
    /// the extended end segment, so `along` may leave `[0, total]`.
    fn project(&self, p: Point2) -> Projection {
        let n = self.points.len() - 1;
        let mut best = Projection {
            along: f64::NAN,
            side: f64::INFINITY,
        };
        let mut best_d = f64::INFINITY;
        for i in 0..n {
            let a = self.points[i];
            let seg = self.points[i + 1] - a;
            let len = self.lengths[i + 1] - self.lengths[i];
            let dir = seg / len;
            let mut u = (p - a).dot(dir);
            if i > 0 {
                u = u.max(0.0);
            }
            if i + 1 < n {
                u = u.min(len);
            }
            let foot = a + dir * u;
            let d = (p - foot).length();
            if d < best_d {
                best_d = d;
                best = Projection {
                    along: self.lengths[i] + u,
                    side: dir.cross(p - a),
                };
            }
        }
        best
    }
}

/// A fold laid out on the relief plane.
///
/// The crease is a dark band centred on the edge line; the raised ridge runs
/// alongside it on the clockwise side of the edge direction.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldGeometry {
    pub spec: FoldSpec,
    /// Start and end of the straight part of the edge line.
    pub edge: (Point2, Point2),
    centerline: Polyline,
}

impl FoldGeometry {
    pub fn new(spec: &FoldSpec, convergence: Point2) -> Self {
        let dir = Vec2::from_angle(spec.angle_deg.to_radians());
        let base = convergence + dir.perp() * spec.offset;
        let p0 = base + dir * spec.start;
        let p1 = base + dir * (spec.start + spec.length);
        let mut points = vec![p0, p1];
        if spec.bend_length > 0.0 {
            let turn = spec.bend_deg.to_radians();
            let step = spec.bend_length / ARC_SEGMENTS as f64;
            let mut p = p1;
            for k in 0..ARC_SEGMENTS {
                let heading = dir.rotated(turn * (k as f64 + 0.5) / ARC_SEGMENTS as f64);
                p = p + heading * step;
                points.push(p);
            }
        }
        FoldGeometry {
            spec: spec.clone(),
            edge: (p0, p1),
            centerline: Polyline::new(points),
        }
    }

    /// Unit direction of the straight edge.
    pub fn direction(&self) -> Vec2 {
        (self.edge.1 - self.edge.0).normalized()
    }

    /// Distance from `p` to the infinite line through the straight edge.
    pub fn line_distance(&self, p: Point2) -> f64 {
        self.direction().cross(p - self.edge.0).abs()
    }

    fn margin(&self) -> f64 {
        self.spec.crease_width + self.spec.ridge_width
    }

    fn projection(&self, p: Point2) -> Option<Projection> {
        if !self.centerline.near_box(p, self.margin()) {
            return None;
        }
        let pr = self.centerline.project(p);
        (pr.along >= 0.0 && pr.along <= self.centerline.total()).then_some(pr)
    }

    pub fn in_crease(&self, p: Point2) -> bool {
        self.projection(p)
            .is_some_and(|pr| pr.side.abs() <= 0.5 * self.spec.crease_width)
    }

    pub fn height(&self, p: Point2) -> f64 {
        let Some(pr) = self.projection(p) else { return 0.0 };
        let inner = -0.5 * self.spec.crease_width;
        let u = (inner - pr.side) / self.spec.ridge_width;
        if !(0.0..=1.0).contains(&u) || self.spec.ridge_height == 0.0 {
            return 0.0;
        }
        let profile = (std::f64::consts::PI * u).sin().powi(2);
        let total = self.centerline.total();
        let taper = smoothstep(pr.along / END_TAPER) * smoothstep((total - pr.along) / END_TAPER);
        self.spec.ridge_height * profile * taper
    }

    /// Bounding box of everything the fold touches.
    pub fn bounds(&self) -> (Point2, Point2) {
        let m = self.margin();
        (
            self.centerline.min - Vec2::new(m, m),
            self.centerline.max + Vec2::new(m, m),
        )
    }
}

fn smoothstep(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x * x * (3.0 - 2.0 * x)
}

#[derive(Debug, Clone, PartialEq)]
struct StrokeGeometry {
    line: Polyline,
    half_width: f64,
    albedo: Rgb,
}

impl StrokeGeometry {
    fn covers(&self, p: Point2) -> bool {
        if !self.line.near_box(p, self.half_width) {
            return false;
        }
        let pr = self.line.project(p);
        // Round caps are unnecessary; strokes end flush.
        pr.along >= 0.0 && pr.along <= self.line.total() && pr.side.abs() <= self.half_width
    }
}

/// Diffuse albedo over the relief plane.
#[derive(Debug, Clone)]
pub struct AlbedoField {
    spec: AlbedoSpec,
    center: Point2,
    texture: Option<(Texture, [f64; 4])>,
    folds: Vec<FoldGeometry>,
    strokes: Vec<StrokeGeometry>,
}

impl AlbedoField {
    pub fn new(
        spec: &AlbedoSpec,
        center: Point2,
        texture: Option<(Texture, [f64; 4])>,
        folds: Vec<FoldGeometry>,
        strokes: &[StrokeSpec],
    ) -> Self {
        AlbedoField {
            spec: spec.clone(),
            center,
            texture,
            folds,
            strokes: strokes
                .iter()
                .map(|s| StrokeGeometry {
                    line: Polyline::new(s.points.clone()),
                    half_width: 0.5 * s.width,
                    albedo: s.albedo,
                })
                .collect(),
        }
    }

    pub fn folds(&self) -> &[FoldGeometry] {
        &self.folds
    }

    fn base(&self, p: Point2) -> Rgb {
        if let Some((tex, [x0, y0, x1, y1])) = &self.texture {
            if p.x >= *x0 && p.x <= *x1 && p.y >= *y0 && p.y <= *y1 {
                // Image rows run top to bottom, the plane's y upwards.
                return tex.sample((p.x - x0) / (x1 - x0), (y1 - p.y) / (y1 - y0));
            }
        }
        let g = Vec2::from_angle(self.spec.gradient_angle_deg.to_radians());
        let t = (0.5 + (p - self.center).dot(g) / self.spec.gradient_width).clamp(0.0, 1.0);
        self.spec.dark * (1.0 - t) + self.spec.bright * t
    }

    pub fn albedo(&self, p: Point2) -> Rgb {
        for s in &self.strokes {
            if s.covers(p) {
                return s.albedo;
            }
        }
        let mut a = self.base(p);
        for f in &self.folds {
            if f.in_crease(p) {
                a *= f.spec.crease_albedo;
            }
        }
        a
    }

    /// Height of the relief above its base plane.
    pub fn height(&self, p: Point2) -> f64 {
        self.folds.iter().map(|f| f.height(p)).fold(0.0, f64::max)
    }
}
