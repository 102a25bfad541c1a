//! Declarative scene description. Lengths are centimetres, angles degrees.

use serde::{Deserialize, Serialize};

use crate::color::Rgb;
use crate::geom::{Point2, Point3, Vec3};
use crate::optics::{CalciteSpec, DielectricSpec};
use crate::render::RenderSettings;

use super::SceneError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Thickness {
    Solid,
    /// Wall thickness in cm.
    Shell(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbMaterial {
    Dielectric(DielectricSpec),
    Calcite(CalciteSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbSpec {
    pub enabled: bool,
    pub center: Point3,
    pub radius: f64,
    pub thickness: Thickness,
    pub material: OrbMaterial,
    /// Displacement along -x (the viewer's left in the default framing), in
    /// cm, applied on top of `center`. Fixed to the relief frame so that
    /// moving the camera does not move the orb.
    pub lateral_shift: f64,
}

impl Default for OrbSpec {
    fn default() -> Self {
        OrbSpec {
            enabled: true,
            center: Point3::ZERO,
            radius: 6.8,
            thickness: Thickness::Shell(0.13),
            material: OrbMaterial::Dielectric(DielectricSpec {
                tint: Rgb::new(0.97, 0.97, 0.96),
                ..DielectricSpec::default()
            }),
            lateral_shift: 0.0,
        }
    }
}

impl OrbSpec {
    pub fn thickness_cm(&self) -> f64 {
        match self.thickness {
            Thickness::Solid => self.radius,
            Thickness::Shell(t) => t,
        }
    }

    pub fn is_solid(&self) -> bool {
        self.thickness_cm() >= self.radius
    }

    pub fn validate(&self) -> Result<(), SceneError> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(SceneError::unit(format!(
                "orb radius must be positive, got {} cm",
                self.radius
            )));
        }
        if let Thickness::Shell(t) = self.thickness {
            if !(t > 0.0) || t > self.radius {
                return Err(SceneError::unit(format!(
                    "orb thickness {t} cm must lie in (0, radius = {} cm]",
                    self.radius
                )));
            }
        }
        if !self.lateral_shift.is_finite() || !self.center.is_finite() {
            return Err(SceneError::invalid("orb position must be finite"));
        }
        match &self.material {
            OrbMaterial::Dielectric(d) => d.validate()?,
            OrbMaterial::Calcite(c) => c.validate()?,
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CameraSpec {
    pub position: Point3,
    pub look_at: Point3,
    pub up: Vec3,
    pub vertical_fov_deg: f64,
    pub width: u32,
    pub height: u32,
}

impl Default for CameraSpec {
    fn default() -> Self {
        CameraSpec {
            position: Point3::new(0.0, 0.0, 65.0),
            look_at: Point3::ZERO,
            up: Vec3::Y,
            vertical_fov_deg: 40.0,
            width: 1024,
            height: 1024,
        }
    }
}

impl CameraSpec {
    pub fn validate(&self) -> Result<(), SceneError> {
        if !(self.vertical_fov_deg > 1.0 && self.vertical_fov_deg < 120.0) {
            return Err(SceneError::invalid(format!(
                "vertical_fov_deg must lie in (1, 120), got {}",
                self.vertical_fov_deg
            )));
        }
        if self.width == 0 || self.height == 0 {
            return Err(SceneError::invalid("image size must be positive"));
        }
        let forward = self.look_at - self.position;
        if !(forward.length() > 0.0) || forward.cross(self.up).length() < 1e-9 * forward.length() {
            return Err(SceneError::invalid(
                "camera look_at must differ from position and not be parallel to up",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LightRigSpec {
    /// Angle of the main direction above the horizontal (xz) plane.
    pub elevation_deg: f64,
    /// Rotation of the main direction about +y; 0 points towards +z.
    pub azimuth_deg: f64,
    pub cone_half_angle_deg: f64,
    pub directions: u32,
    /// Irradiance delivered by the whole rig on a surface facing it.
    pub main_radiance: Rgb,
    pub ambient_radiance: Rgb,
}

impl Default for LightRigSpec {
    fn default() -> Self {
        let main = Rgb::new(3.0, 2.9, 2.7);
        LightRigSpec {
            elevation_deg: 60.0,
            azimuth_deg: 0.0,
            cone_half_angle_deg: 5.0,
            directions: 5,
            main_radiance: main,
            ambient_radiance: main * 0.04,
        }
    }
}

impl LightRigSpec {
    pub fn validate(&self) -> Result<(), SceneError> {
        if self.directions == 0 {
            return Err(SceneError::invalid("light rig needs at least one main direction"));
        }
        if !(0.0..90.0).contains(&self.cone_half_angle_deg) {
            return Err(SceneError::invalid("cone_half_angle_deg must lie in [0, 90)"));
        }
        for c in self
            .main_radiance
            .channels()
            .into_iter()
            .chain(self.ambient_radiance.channels())
        {
            if !(c >= 0.0 && c.is_finite()) {
                return Err(SceneError::invalid("light radiance must be finite and non-negative"));
            }
        }
        let main = self.main_radiance.luminance();
        if main > 0.0 && self.ambient_radiance.luminance() >= main {
            return Err(SceneError::invalid(
                "ambient radiance must be dimmer than the main light",
            ));
        }
        Ok(())
    }

    /// The main direction (pointing towards the light).
    pub fn main_axis(&self) -> Vec3 {
        let (el, az) = (self.elevation_deg.to_radians(), self.azimuth_deg.to_radians());
        Vec3::new(el.cos() * az.sin(), el.sin(), el.cos() * az.cos())
    }

    /// The axis plus `directions - 1` directions evenly spaced on the cone.
    pub fn main_directions(&self) -> Vec<Vec3> {
        let axis = self.main_axis();
        let n = self.directions as usize;
        if n == 1 {
            return vec![axis];
        }
        let (u, v) = axis.orthonormal_basis();
        let half = self.cone_half_angle_deg.to_radians();
        let mut dirs = vec![axis];
        for k in 0..n - 1 {
            let phi = std::f64::consts::TAU * k as f64 / (n - 1) as f64;
            let d = axis * half.cos() + (u * phi.cos() + v * phi.sin()) * half.sin();
            dirs.push(d.normalized());
        }
        dirs
    }

    /// Per-direction contribution, so total power is independent of count.
    pub fn per_direction_radiance(&self) -> Rgb {
        self.main_radiance / self.directions as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlbedoSpec {
    /// Albedo on the dark side of the gradient.
    pub dark: Rgb,
    /// Albedo on the bright side of the gradient.
    pub bright: Rgb,
    /// Direction (in the relief plane) towards the bright side.
    pub gradient_angle_deg: f64,
    /// Distance over which the gradient goes from dark to bright.
    pub gradient_width: f64,
}

impl Default for AlbedoSpec {
    fn default() -> Self {
        AlbedoSpec {
            dark: Rgb::new(0.05, 0.045, 0.05),
            bright: Rgb::new(0.78, 0.66, 0.52),
            gradient_angle_deg: 45.0,
            gradient_width: 16.0,
        }
    }
}

/// A straight robe fold whose edge line is the measurable track.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldSpec {
    /// Direction of the edge line from the convergence point.
    pub angle_deg: f64,
    /// Perpendicular offset of the edge line from the convergence point.
    pub offset: f64,
    /// Distance along the edge where the fold begins.
    pub start: f64,
    /// Length of the straight part.
    pub length: f64,
    /// Turning angle of the curved continuation (positive = counter-clockwise).
    pub bend_deg: f64,
    pub bend_length: f64,
    pub ridge_width: f64,
    pub ridge_height: f64,
    pub crease_width: f64,
    /// Albedo multiplier inside the crease.
    pub crease_albedo: f64,
    /// Exempt from the convergence requirement.
    pub exempt: bool,
}

impl FoldSpec {
    pub fn converging(angle_deg: f64) -> Self {
        FoldSpec {
            angle_deg,
            offset: 0.0,
            start: 4.0,
            length: 14.0,
            bend_deg: 25.0,
            bend_length: 6.0,
            ridge_width: 1.0,
            ridge_height: 0.3,
            crease_width: 0.3,
            crease_albedo: 0.12,
            exempt: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrokeSpec {
    /// Polyline vertices in relief-plane coordinates.
    pub points: Vec<Point2>,
    pub width: f64,
    pub albedo: Rgb,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextureSpec {
    pub path: String,
    /// `[x0, y0, x1, y1]` rectangle of the relief plane covered by the image.
    pub extent: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReliefSpec {
    pub enabled: bool,
    /// Distance of the base plane behind the orb centre.
    pub standoff: f64,
    /// Height-field resolution for folds, in cells per cm.
    pub cells_per_cm: f64,
    pub convergence: bool,
    /// `None` = projection of the orb centre (before any lateral shift).
    pub convergence_point: Option<Point2>,
    pub albedo: AlbedoSpec,
    pub texture: Option<TextureSpec>,
    pub folds: Vec<FoldSpec>,
    pub strokes: Vec<StrokeSpec>,
}

impl Default for ReliefSpec {
    fn default() -> Self {
        let mut folds: Vec<FoldSpec> = [20.0, 35.0, 50.0, 65.0].into_iter().map(FoldSpec::converging).collect();
        folds.push(FoldSpec {
            offset: 1.2,
            ridge_height: 0.6,
            crease_width: 0.5,
            exempt: true,
            ..FoldSpec::converging(80.0)
        });
        ReliefSpec {
            enabled: true,
            standoff: 25.0,
            cells_per_cm: 10.0,
            convergence: true,
            convergence_point: None,
            albedo: AlbedoSpec::default(),
            texture: None,
            folds,
            strokes: Vec::new(),
        }
    }
}

impl ReliefSpec {
    pub fn validate(&self) -> Result<(), SceneError> {
        if !(self.standoff > 0.0 && self.standoff.is_finite()) {
            return Err(SceneError::unit(format!(
                "relief standoff must be positive, got {} cm",
                self.standoff
            )));
        }
        if !(self.cells_per_cm > 0.0 && self.cells_per_cm <= 100.0) {
            return Err(SceneError::invalid("cells_per_cm must lie in (0, 100]"));
        }
        if let Some(p) = self.convergence_point {
            if !(p.x.is_finite() && p.y.is_finite()) {
                return Err(SceneError::invalid("convergence point must be finite"));
            }
        }
        for (i, f) in self.folds.iter().enumerate() {
            let lengths = [
                f.start,
                f.length,
                f.bend_length,
                f.ridge_width,
                f.ridge_height,
                f.crease_width,
            ];
            if lengths.iter().any(|v| !(v.is_finite() && *v >= 0.0)) || f.length <= 0.0 || f.crease_width <= 0.0 {
                return Err(SceneError::unit(format!("fold {i} has a negative or zero dimension")));
            }
            if !(0.0..=1.0).contains(&f.crease_albedo) {
                return Err(SceneError::invalid(format!(
                    "fold {i} crease_albedo must lie in [0, 1]"
                )));
            }
            if self.convergence && !f.exempt && f.offset != 0.0 {
                return Err(SceneError::invalid(format!(
                    "fold {i} is not exempt but its edge misses the convergence point by {} cm",
                    f.offset
                )));
            }
        }
        for (i, s) in self.strokes.iter().enumerate() {
            if s.points.len() < 2 || !(s.width > 0.0) {
                return Err(SceneError::invalid(format!(
                    "stroke {i} needs two points and a positive width"
                )));
            }
        }
        Ok(())
    }
}

/// A user-supplied diffuse mesh (OBJ).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshSpec {
    pub path: String,
    pub translate: Vec3,
    pub scale: f64,
    pub albedo: Rgb,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SceneConfig {
    pub orb: OrbSpec,
    pub camera: CameraSpec,
    pub lights: LightRigSpec,
    pub relief: ReliefSpec,
    pub meshes: Vec<MeshSpec>,
    pub render: RenderSettings,
}

impl SceneConfig {
    pub fn validate(&self) -> Result<(), SceneError> {
        self.orb.validate()?;
        self.camera.validate()?;
        self.lights.validate()?;
        self.relief.validate()?;
        for m in &self.meshes {
            if !(m.scale > 0.0) {
                return Err(SceneError::invalid(format!("mesh {} scale must be positive", m.path)));
            }
        }
        self.render.validate()?;
        Ok(())
    }

    /// Orb centre after the lateral shift.
    pub fn effective_orb_center(&self) -> Point3 {
        self.orb.center - Vec3::X * self.orb.lateral_shift
    }

    /// z of the relief base plane.
    pub fn relief_z(&self) -> f64 {
        self.orb.center.z - self.relief.standoff
    }

    /// Convergence point in relief-plane coordinates.
    pub fn convergence_point(&self) -> Point2 {
        self.relief.convergence_point.unwrap_or_else(|| {
            let eye = self.camera.position;
            let dir = self.orb.center - eye;
            if dir.z.abs() < 1e-300 {
                return Point2::new(self.orb.center.x, self.orb.center.y);
            }
            let t = (self.relief_z() - eye.z) / dir.z;
            let p = eye + dir * t;
            Point2::new(p.x, p.y)
        })
    }
}
