//! Canned scene compositions.

use crate::color::Rgb;
use crate::geom::{Point2, Point3};

use super::config::*;
use super::SceneError;

/// Selective changes to the default composition.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SalvatorOverrides {
    pub thickness: Option<Thickness>,
    pub lateral_shift: Option<f64>,
    pub material: Option<OrbMaterial>,
    pub resolution: Option<(u32, u32)>,
    pub orb_enabled: Option<bool>,
}

/// The default composition: orb in front of a fold relief that converges to
/// the orb's projected centre, lit from above.
pub fn make_salvator_scene(overrides: &SalvatorOverrides) -> SceneConfig {
    let mut cfg = SceneConfig::default();
    if let Some(t) = overrides.thickness {
        cfg.orb.thickness = t;
    }
    if let Some(s) = overrides.lateral_shift {
        cfg.orb.lateral_shift = s;
    }
    if let Some(m) = overrides.material {
        cfg.orb.material = m;
    }
    if let Some((w, h)) = overrides.resolution {
        cfg.camera.width = w;
        cfg.camera.height = h;
    }
    if let Some(e) = overrides.orb_enabled {
        cfg.orb.enabled = e;
    }
    cfg
}

/// Where the three lines of the stage lie on the background plane.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeLinesLayout {
    pub spacing: f64,
    pub width: f64,
    /// Polylines, left to right.
    pub lines: [Vec<Point2>; 3],
}

pub const THREE_LINES_EXTENT: f64 = 70.0;
pub const THREE_LINES_WIDTH: f64 = 0.6;
/// Height of the kink in the middle line, above the orb centre. It lies
/// outside the ball but inside the footprint of its silhouette on the plane.
pub const KINK_HEIGHT: f64 = 8.0;
pub const KINK_DEG: f64 = 10.0;

impl ThreeLinesLayout {
    pub fn new(spacing: f64, bend_middle: bool) -> Self {
        let e = THREE_LINES_EXTENT;
        let straight = |x: f64| vec![Point2::new(x, -e), Point2::new(x, e)];
        let middle = if bend_middle {
            let k = KINK_DEG.to_radians();
            let top = Point2::new((e - KINK_HEIGHT) * k.tan(), e);
            vec![Point2::new(0.0, -e), Point2::new(0.0, KINK_HEIGHT), top]
        } else {
            straight(0.0)
        };
        ThreeLinesLayout {
            spacing,
            width: THREE_LINES_WIDTH,
            lines: [straight(-spacing), middle, straight(spacing)],
        }
    }
}

/// Three dark parallel lines on a light plane, the middle one under the
/// ball's centre, viewed square-on.
pub fn make_three_lines_scene(ball: &OrbSpec, bend_middle: bool, line_spacing: f64) -> Result<SceneConfig, SceneError> {
    if !(line_spacing > 0.0 && line_spacing.is_finite()) {
        return Err(SceneError::invalid(format!(
            "line spacing must be positive, got {line_spacing}"
        )));
    }
    let mut cfg = SceneConfig {
        orb: ball.clone(),
        ..SceneConfig::default()
    };
    cfg.orb.center = Point3::ZERO;
    cfg.orb.lateral_shift = 0.0;
    let sheet = Rgb::gray(0.7);
    cfg.relief.albedo = AlbedoSpec {
        dark: sheet,
        bright: sheet,
        ..AlbedoSpec::default()
    };
    cfg.relief.folds.clear();
    let layout = ThreeLinesLayout::new(line_spacing, bend_middle);
    cfg.relief.strokes = layout
        .lines
        .iter()
        .map(|l| StrokeSpec {
            points: l.clone(),
            width: layout.width,
            albedo: Rgb::gray(0.05),
        })
        .collect();
    cfg.validate()?;
    Ok(cfg)
}

/// Moves the camera, keeping its distance to the relief plane, onto the line
/// through the fold convergence point and the orb centre, and aims it at the
/// orb. The convergence point is pinned so the result is a fixed point.
pub fn align_view(cfg: &SceneConfig) -> Result<SceneConfig, SceneError> {
    let c2 = cfg.convergence_point();
    let z = cfg.relief_z();
    let conv = Point3::new(c2.x, c2.y, z);
    let center = cfg.effective_orb_center();
    if !conv.is_finite() || !center.is_finite() {
        return Err(SceneError::Alignment("convergence point is not finite".into()));
    }
    let axis = center - conv;
    let eye_z = cfg.camera.position.z;
    if axis.z.abs() < 1e-9 || (eye_z - z).abs() < 1e-9 {
        return Err(SceneError::Alignment(
            "orb and camera must stand off the relief plane".into(),
        ));
    }
    let t = (eye_z - z) / axis.z;
    if t <= 1.0 {
        return Err(SceneError::Alignment(
            "camera would not see the orb in front of the relief".into(),
        ));
    }
    let eye = conv + axis * t;
    if (eye - center).length() <= cfg.orb.radius {
        return Err(SceneError::Alignment("aligned camera would sit inside the orb".into()));
    }
    let mut out = cfg.clone();
    out.relief.convergence_point = Some(c2);
    out.camera.position = eye;
    out.camera.look_at = center;
    out.validate().map_err(|e| SceneError::Alignment(e.to_string()))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Vec3;
    use crate::scene::camera::Camera;

    fn collinear_residual(cfg: &SceneConfig) -> f64 {
        let c = cfg.convergence_point();
        let conv = Point3::new(c.x, c.y, cfg.relief_z());
        let eye = cfg.camera.position;
        let d = (cfg.effective_orb_center() - eye).normalized();
        (conv - eye).cross(d).length()
    }

    #[test]
    fn default_scene_is_a_fixed_point() {
        let cfg = make_salvator_scene(&SalvatorOverrides::default());
        let aligned = align_view(&cfg).unwrap();
        assert_eq!(aligned.camera.position, cfg.camera.position);
        assert_eq!(aligned.camera.look_at, cfg.camera.look_at);
        assert_eq!(align_view(&aligned).unwrap(), aligned);
    }

    #[test]
    fn shifted_orb_is_realigned() {
        let cfg = make_salvator_scene(&SalvatorOverrides {
            lateral_shift: Some(1.0),
            ..Default::default()
        });
        assert!(collinear_residual(&cfg) > 0.1);
        let aligned = align_view(&cfg).unwrap();
        assert!(collinear_residual(&aligned) < 1e-9);
        // Shift relative to the relief is preserved.
        assert_eq!(aligned.effective_orb_center(), cfg.effective_orb_center());
        let cam = Camera::new(&aligned.camera);
        let c = aligned.convergence_point();
        let a = cam.project(Point3::new(c.x, c.y, aligned.relief_z())).unwrap();
        let b = cam.project(aligned.effective_orb_center()).unwrap();
        assert!((a - b).length() < 1e-9);
        assert_eq!(align_view(&aligned).unwrap(), aligned);
    }

    #[test]
    fn degenerate_alignment_fails() {
        let mut cfg = SceneConfig::default();
        cfg.relief.convergence_point = Some(Point2::new(f64::INFINITY, 0.0));
        assert!(matches!(align_view(&cfg), Err(SceneError::Alignment(_))));
        let mut cfg = SceneConfig::default();
        cfg.orb.center = Vec3::new(0.0, 0.0, -25.0);
        cfg.relief.standoff = 1e-12;
        assert!(align_view(&cfg).is_err());
    }

    #[test]
    fn lateral_shift_moves_towards_image_left() {
        let cfg = make_salvator_scene(&SalvatorOverrides {
            lateral_shift: Some(1.0),
            ..Default::default()
        });
        assert_eq!(cfg.effective_orb_center(), Vec3::new(-1.0, 0.0, 0.0));
    }

    #[test]
    fn three_lines_stage() {
        let ball = OrbSpec::default();
        let cfg = make_three_lines_scene(&ball, true, 4.0).unwrap();
        assert_eq!(cfg.relief.strokes.len(), 3);
        assert_eq!(cfg.relief.strokes[1].points.len(), 3);
        assert!(cfg.relief.folds.is_empty());
        assert!(make_three_lines_scene(&ball, false, 0.0).is_err());
    }
}
