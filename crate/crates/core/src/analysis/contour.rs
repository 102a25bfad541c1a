//! Detection of lines imaged twice inside the orb.

use serde::{Deserialize, Serialize};

use crate::geom::Point2;
use crate::render::Image;

use super::profile::LogLuminance;
use super::{AnalysisError, Circle};

const ROW_SPAN: f64 = 0.6;
const REACH: f64 = 0.9;
const STEP: f64 = 0.5;
const ROW_STEP: f64 = 2.0;
/// Minimum prominence of a dark minimum, in log-luminance units.
const MIN_PROMINENCE: f64 = 0.15;
const MIN_SEPARATION_PX: f64 = 2.0;
const MIN_ROWS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideContour {
    /// Half-rows holding at least one dark track.
    pub rows_with_track: usize,
    /// Half-rows holding two or more separated tracks.
    pub rows_bimodal: usize,
    /// Mean distance between the two strongest tracks on bimodal rows.
    pub mean_separation_px: f64,
    pub detected: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoubleContour {
    pub left: SideContour,
    pub right: SideContour,
    pub detected: bool,
}

/// Positions and prominences of the dark minima of `v`.
fn minima(v: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for i in 1..v.len().saturating_sub(1) {
        let y = v[i].1;
        if !(y < v[i - 1].1 && y <= v[i + 1].1) {
            continue;
        }
        let side_max = |range: &mut dyn Iterator<Item = usize>| {
            let mut m = y;
            for j in range {
                if v[j].1 < y {
                    break;
                }
                m = m.max(v[j].1);
            }
            m
        };
        let left = side_max(&mut (0..i).rev());
        let right = side_max(&mut (i + 1..v.len()));
        out.push((v[i].0, left.min(right) - y));
    }
    out
}

fn side(log: &LogLuminance, c: &Circle, sign: f64, exclude: f64) -> SideContour {
    let (mut with_track, mut bimodal, mut sep_sum) = (0, 0, 0.0);
    let mut dy = -ROW_SPAN * c.radius;
    while dy <= ROW_SPAN * c.radius {
        let y = c.center.y + dy;
        let reach = (REACH * c.radius).powi(2) - dy * dy;
        dy += ROW_STEP;
        if reach <= exclude * exclude {
            continue;
        }
        let mut v = Vec::new();
        let mut dx = exclude;
        while dx <= reach.sqrt() {
            if let Some(l) = log.sample(Point2::new(c.center.x + sign * dx, y)) {
                v.push((dx, l));
            }
            dx += STEP;
        }
        let mut found: Vec<(f64, f64)> = minima(&v).into_iter().filter(|m| m.1 >= MIN_PROMINENCE).collect();
        if found.is_empty() {
            continue;
        }
        with_track += 1;
        found.sort_by(|a, b| b.1.total_cmp(&a.1));
        if let Some(second) = found[1..]
            .iter()
            .find(|m| (m.0 - found[0].0).abs() >= MIN_SEPARATION_PX)
        {
            bimodal += 1;
            sep_sum += (second.0 - found[0].0).abs();
        }
    }
    SideContour {
        rows_with_track: with_track,
        rows_bimodal: bimodal,
        mean_separation_px: if bimodal > 0 { sep_sum / bimodal as f64 } else { 0.0 },
        detected: with_track >= MIN_ROWS && 2 * bimodal >= with_track,
    }
}

/// Scans rows across each half of the orb, skipping `exclude_px` around the
/// vertical through the centre, for pairs of separated dark tracks.
pub fn detect_double_contour(
    image: &Image,
    silhouette: Circle,
    exclude_px: f64,
) -> Result<DoubleContour, AnalysisError> {
    let c = silhouette;
    if !(c.radius > 0.0)
        || c.center.x - c.radius < 0.0
        || c.center.y - c.radius < 0.0
        || c.center.x + c.radius > image.width as f64
        || c.center.y + c.radius > image.height as f64
    {
        return Err(AnalysisError::SilhouetteOutside);
    }
    let log = LogLuminance::new(image);
    let left = side(&log, &c, -1.0, exclude_px);
    let right = side(&log, &c, 1.0, exclude_px);
    Ok(DoubleContour {
        left,
        right,
        detected: left.detected && right.detected,
    })
}
