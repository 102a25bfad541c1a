//! Canned experiments: scene setup, rendering, analysis and a pass/fail
//! predicate for each.

mod metric;
mod runs;
mod setup;

pub use metric::{measure_scene, SceneMetric};
pub use runs::*;
pub use setup::{fold_lines, silhouette_of, stroke_lines, RenderedView, Stage, SWEEP_THICKNESSES_MM};

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analysis::AnalysisError;
use crate::render::{Image, RenderError};
use crate::scene::SceneError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentId {
    SolidVsHollow,
    ThreeLines,
    ThreeLinesBent,
    FoldConvergence,
    ThicknessSweep,
    Shift1cm,
    CalciteBirefringence,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 7] = [
        ExperimentId::SolidVsHollow,
        ExperimentId::ThreeLines,
        ExperimentId::ThreeLinesBent,
        ExperimentId::FoldConvergence,
        ExperimentId::ThicknessSweep,
        ExperimentId::Shift1cm,
        ExperimentId::CalciteBirefringence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentId::SolidVsHollow => "solid_vs_hollow",
            ExperimentId::ThreeLines => "three_lines",
            ExperimentId::ThreeLinesBent => "three_lines_bent",
            ExperimentId::FoldConvergence => "fold_convergence",
            ExperimentId::ThicknessSweep => "thickness_sweep",
            ExperimentId::Shift1cm => "shift_1cm",
            ExperimentId::CalciteBirefringence => "calcite_birefringence",
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentId {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExperimentId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| ExperimentError::UnknownExperiment(s.to_string()))
    }
}

/// Resolution and sampling for an experiment run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSettings {
    /// Square image size in pixels.
    pub resolution: u32,
    pub samples_per_pixel: u32,
    pub seed: u64,
    pub threads: usize,
}

impl ExperimentSettings {
    /// Reference quality: 1024 px at 256 samples per pixel.
    pub fn full(threads: usize) -> Self {
        ExperimentSettings {
            resolution: 1024,
            samples_per_pixel: 256,
            seed: 1,
            threads,
        }
    }

    /// Quick look: 256 px at 16 samples per pixel.
    pub fn fast(threads: usize) -> Self {
        ExperimentSettings {
            resolution: 256,
            samples_per_pixel: 16,
            ..ExperimentSettings::full(threads)
        }
    }

    /// Pixel lengths tuned at 1024 px, scaled to this resolution.
    pub fn px(&self, at_1024: f64) -> f64 {
        at_1024 * self.resolution as f64 / 1024.0
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error("analysis failed: {0}")]
    Analysis(#[from] AnalysisError),
    #[error("scene has no orb in view")]
    NoSilhouette,
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Everything an experiment produced.
#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub id: ExperimentId,
    pub passed: bool,
    /// Human-readable report, one finding per line.
    pub summary: Vec<String>,
    pub report: serde_json::Value,
    pub images: Vec<(String, Image)>,
    /// Table for sweeps.
    pub csv: Option<String>,
}

impl ExperimentOutcome {
    /// Writes images, `report.json`, `report.txt` and any CSV under `dir`.
    pub fn write(&self, dir: &Path, gamma: f64) -> Result<Vec<PathBuf>, ExperimentError> {
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |source| ExperimentError::Io { path, source }
        };
        std::fs::create_dir_all(dir).map_err(io(dir))?;
        let mut written = Vec::new();
        for (name, image) in &self.images {
            let path = dir.join(format!("{name}.png"));
            image.write(&path, gamma)?;
            written.push(path);
        }
        let json = dir.join("report.json");
        let text = serde_json::to_string_pretty(&self.report).expect("report serialises");
        std::fs::write(&json, text + "\n").map_err(io(&json))?;
        written.push(json);
        let txt = dir.join("report.txt");
        let mut body = self.summary.join("\n");
        body.push_str(&format!("\nresult: {}\n", if self.passed { "pass" } else { "fail" }));
        std::fs::write(&txt, body).map_err(io(&txt))?;
        written.push(txt);
        if let Some(csv) = &self.csv {
            let path = dir.join(format!("{}.csv", self.id));
            std::fs::write(&path, csv).map_err(io(&path))?;
            written.push(path);
        }
        Ok(written)
    }
}
