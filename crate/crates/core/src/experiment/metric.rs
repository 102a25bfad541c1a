//! Scalar measurements of an arbitrary scene, for parameter sweeps.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::analysis::{detect_inversion, measure_line_continuity, ContinuityOptions};
use crate::render::{render_image, CropWindow, RenderSettings};
use crate::scene::{Scene, SceneConfig};

use super::setup::{fold_lines, silhouette_of, stroke_lines};
use super::ExperimentError;

/// Margin of the rendered window around the orb, in orb radii.
const WINDOW: f64 = 1.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SceneMetric {
    /// Largest displacement over non-exempt relief folds, px.
    FoldDisplacement,
    /// Largest displacement over stroke lines, px.
    LineDisplacement,
    /// Inversion score against the same scene without the orb.
    Inversion,
    /// Mean luminance of the rendered window.
    MeanLuminance,
}

impl SceneMetric {
    pub const ALL: [SceneMetric; 4] = [
        SceneMetric::FoldDisplacement,
        SceneMetric::LineDisplacement,
        SceneMetric::Inversion,
        SceneMetric::MeanLuminance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SceneMetric::FoldDisplacement => "fold_displacement",
            SceneMetric::LineDisplacement => "line_displacement",
            SceneMetric::Inversion => "inversion",
            SceneMetric::MeanLuminance => "mean_luminance",
        }
    }
}

impl fmt::Display for SceneMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SceneMetric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        SceneMetric::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| {
            let names: Vec<_> = SceneMetric::ALL.iter().map(|m| m.name()).collect();
            format!("unknown metric `{s}` (expected one of {})", names.join(", "))
        })
    }
}

/// Renders the window around the orb of `cfg` with `settings` and measures
/// `metric`. `None` when the measurement fails for the whole scene, such as
/// no fold track being found.
pub fn measure_scene(
    cfg: &SceneConfig,
    base_dir: &Path,
    metric: SceneMetric,
    settings: &RenderSettings,
    threads: usize,
) -> Result<Option<f64>, ExperimentError> {
    let silhouette = silhouette_of(cfg).ok_or(ExperimentError::NoSilhouette)?;
    let (w, h) = (cfg.camera.width, cfg.camera.height);
    let crop = CropWindow::around(
        silhouette.center.x,
        silhouette.center.y,
        silhouette.radius * WINDOW,
        w,
        h,
    );
    let settings = RenderSettings {
        crop: Some(crop),
        ..*settings
    };
    let scene = Scene::build(cfg, base_dir)?;
    let image = render_image(&scene, &settings, threads)?;
    let scale = w as f64 / 1024.0;
    Ok(match metric {
        SceneMetric::FoldDisplacement => {
            let folds = fold_lines(&scene);
            let lines: Vec<_> = folds.iter().filter(|(_, e)| !e).map(|(l, _)| l.clone()).collect();
            let opts = ContinuityOptions {
                search_half_width: 12.0 * scale,
                ..ContinuityOptions::default()
            };
            measure_line_continuity(&image, silhouette, &lines, &opts)?.max_displacement()
        }
        SceneMetric::LineDisplacement => {
            let opts = ContinuityOptions {
                search_half_width: 30.0 * scale,
                ..ContinuityOptions::default()
            };
            measure_line_continuity(&image, silhouette, &stroke_lines(&scene), &opts)?.max_displacement()
        }
        SceneMetric::Inversion => {
            let mut bare = cfg.clone();
            bare.orb.enabled = false;
            let bare = render_image(&Scene::build(&bare, base_dir)?, &settings, threads)?;
            Some(detect_inversion(&image, &bare, silhouette)?.score)
        }
        SceneMetric::MeanLuminance => {
            let lum = image.luminance();
            let n = (crop.width() * crop.height()) as f64;
            let sum: f64 = (crop.y0..crop.y1)
                .flat_map(|y| (crop.x0..crop.x1).map(move |x| (x, y)))
                .map(|(x, y)| lum[(y * w + x) as usize])
                .sum();
            Some(sum / n)
        }
    })
}
