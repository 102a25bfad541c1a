//! Scene variants and rendering shared by the experiments.

use std::path::Path;

use crate::analysis::{Circle, ExpectedLine};
use crate::geom::{Point2, Point3};
use crate::render::{render_image, CropWindow, Image, RenderSettings};
use crate::scene::{Camera, Scene, SceneConfig};

use super::{ExperimentError, ExperimentSettings};

/// Shell thicknesses of the sweep, in mm. Both 2.6 and 2.7 are kept since
/// sources give either for the thicker alternative.
pub const SWEEP_THICKNESSES_MM: [f64; 6] = [0.5, 1.3, 2.0, 2.6, 2.7, 3.0];

/// Which part of the frame an experiment needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stage {
    /// The orb and a margin around it, `factor` times its radius.
    Orb(f64),
    /// A square of half-size `half` px at 1024 px, centred on the orb.
    Around(f64),
}

pub struct RenderedView {
    pub scene: Scene,
    pub image: Image,
    pub silhouette: Circle,
}

/// Image outline of the orb described by `cfg`, whether or not it is enabled.
pub fn silhouette_of(cfg: &SceneConfig) -> Option<Circle> {
    Camera::new(&cfg.camera)
        .sphere_silhouette(cfg.effective_orb_center(), cfg.orb.radius)
        .map(|(c, r)| Circle::new(c, r))
}

pub(crate) fn at_resolution(cfg: &SceneConfig, settings: &ExperimentSettings) -> SceneConfig {
    let mut cfg = cfg.clone();
    cfg.camera.width = settings.resolution;
    cfg.camera.height = settings.resolution;
    cfg
}

pub(crate) fn render_settings(settings: &ExperimentSettings, crop: CropWindow) -> RenderSettings {
    RenderSettings {
        samples_per_pixel: settings.samples_per_pixel,
        seed: settings.seed,
        crop: Some(crop),
        ..RenderSettings::default()
    }
}

/// Renders the part of `cfg` selected by `stage` at the experiment's
/// resolution.
pub(crate) fn render_view(
    cfg: &SceneConfig,
    settings: &ExperimentSettings,
    stage: Stage,
) -> Result<RenderedView, ExperimentError> {
    let cfg = at_resolution(cfg, settings);
    let silhouette = silhouette_of(&cfg).ok_or(ExperimentError::NoSilhouette)?;
    let scene = Scene::build(&cfg, Path::new("."))?;
    let half = match stage {
        Stage::Orb(factor) => silhouette.radius * factor,
        Stage::Around(px) => settings.px(px),
    };
    let crop = CropWindow::around(
        silhouette.center.x,
        silhouette.center.y,
        half,
        cfg.camera.width,
        cfg.camera.height,
    );
    let image = render_image(&scene, &render_settings(settings, crop), settings.threads)?;
    Ok(RenderedView {
        scene,
        image,
        silhouette,
    })
}

fn project_relief(scene: &Scene, points: &[Point2]) -> Vec<Point2> {
    let z = scene.config.relief_z();
    points
        .iter()
        .filter_map(|p| scene.camera.project(Point3::new(p.x, p.y, z)))
        .collect()
}

/// Straight edges of the relief folds in pixels, with their exemption flag.
pub fn fold_lines(scene: &Scene) -> Vec<(ExpectedLine, bool)> {
    let Some(field) = scene.albedo_field() else {
        return Vec::new();
    };
    field
        .folds()
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let line = ExpectedLine {
                id: format!("fold{i}"),
                points: project_relief(scene, &[f.edge.0, f.edge.1]),
            };
            (line, f.spec.exempt)
        })
        .collect()
}

/// Stroke polylines in pixels. Three strokes are named left, middle, right.
pub fn stroke_lines(scene: &Scene) -> Vec<ExpectedLine> {
    let strokes = &scene.config.relief.strokes;
    let names = ["left", "middle", "right"];
    strokes
        .iter()
        .enumerate()
        .map(|(i, s)| ExpectedLine {
            id: if strokes.len() == 3 {
                names[i].to_string()
            } else {
                format!("stroke{i}")
            },
            points: project_relief(scene, &s.points),
        })
        .collect()
}
