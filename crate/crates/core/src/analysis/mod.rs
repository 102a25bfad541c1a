//! Image-space measurements: line continuity across the orb outline, fold
//! convergence, inversion of the background, and image differences.

mod continuity;
mod contour;
mod convergence;
mod inversion;
mod metrics;
mod profile;

pub use continuity::{
    measure_line_continuity, ContinuityOptions, ContinuityReport, CrossingMeasure, ExpectedLine, LineMeasure,
    LineStatus, CONNECTED_THRESHOLD_PX,
};
pub use contour::{detect_double_contour, DoubleContour};
pub use convergence::{fit_fold_convergence, sample_fold_edges, ConvergenceFit, FittedLine};
pub use inversion::{detect_inversion, InversionResult, InversionStatus};
pub use metrics::{image_rmse, image_rmse_affine, Mask};
pub use profile::LogLuminance;

use serde::{Deserialize, Serialize};

use crate::geom::Point2;

/// Circle in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point2,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point2, radius: f64) -> Self {
        Circle { center, radius }
    }

    pub fn contains(&self, p: Point2) -> bool {
        (p - self.center).length() < self.radius
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("images differ in size: {0}x{1} vs {2}x{3}")]
    SizeMismatch(u32, u32, u32, u32),
    #[error("mask selects no pixels")]
    EmptyMask,
    #[error("silhouette circle does not fit in the image")]
    SilhouetteOutside,
    #[error("need at least {needed} {what}, got {got}")]
    TooFewSamples {
        what: &'static str,
        needed: usize,
        got: usize,
    },
    #[error("fold lines are parallel and do not converge")]
    NoConvergence,
}

fn check_same_size(a: &crate::render::Image, b: &crate::render::Image) -> Result<(), AnalysisError> {
    if (a.width, a.height) != (b.width, b.height) {
        return Err(AnalysisError::SizeMismatch(a.width, a.height, b.width, b.height));
    }
    Ok(())
}
