//! Straight-line fits to fold edges and their common point.

use serde::{Deserialize, Serialize};

use crate::geom::{Point2, Vec2};
use crate::render::Image;

use super::continuity::ExpectedLine;
use super::profile::{locate_track, profile, LogLuminance};
use super::{AnalysisError, Circle};

const MIN_SAMPLES: usize = 10;
const OUTLIER_FACTOR: f64 = 3.0;
/// Residuals under this are never outliers, however small the median.
const OUTLIER_FLOOR_PX: f64 = 0.5;

/// Total-least-squares line through the samples of one fold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FittedLine {
    pub point: Point2,
    /// Unit direction.
    pub dir: Vec2,
}

impl FittedLine {
    pub fn distance(&self, p: Point2) -> f64 {
        (p - self.point).cross(self.dir).abs()
    }

    fn fit(samples: &[Point2]) -> FittedLine {
        let n = samples.len() as f64;
        let mean = samples.iter().fold(Vec2::ZERO, |a, &p| a + p) / n;
        let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
        for &p in samples {
            let d = p - mean;
            sxx += d.x * d.x;
            sxy += d.x * d.y;
            syy += d.y * d.y;
        }
        // Major axis of the scatter matrix.
        let angle = 0.5 * (2.0 * sxy).atan2(sxx - syy);
        FittedLine {
            point: mean,
            dir: Vec2::from_angle(angle),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceFit {
    pub lines: Vec<FittedLine>,
    pub point: Point2,
    /// Point-to-line distance per fold, against the final point.
    pub residuals: Vec<f64>,
    /// RMS residual over the inlier folds.
    pub rms_residual: f64,
    pub outliers: Vec<usize>,
}

/// Point minimising the summed squared distance to `lines`.
fn least_squares_point(lines: &[&FittedLine]) -> Result<Point2, AnalysisError> {
    let (mut a, mut b, mut c, mut bx, mut by) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for l in lines {
        // Projector onto the line normal.
        let n = l.dir.perp();
        let (pxx, pxy, pyy) = (n.x * n.x, n.x * n.y, n.y * n.y);
        a += pxx;
        b += pxy;
        c += pyy;
        bx += pxx * l.point.x + pxy * l.point.y;
        by += pxy * l.point.x + pyy * l.point.y;
    }
    let det = a * c - b * b;
    if det.abs() <= 1e-12 * (a + c).powi(2).max(1e-300) {
        return Err(AnalysisError::NoConvergence);
    }
    Ok(Point2::new((c * bx - b * by) / det, (a * by - b * bx) / det))
}

fn median(v: &[f64]) -> f64 {
    let mut v = v.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Fits one line per fold and their common point. Folds whose residual
/// exceeds three times the median are set aside and the point refit without
/// them, until the set stops changing.
pub fn fit_fold_convergence(folds: &[Vec<Point2>]) -> Result<ConvergenceFit, AnalysisError> {
    if folds.len() < 2 {
        return Err(AnalysisError::TooFewSamples {
            what: "fold edges",
            needed: 2,
            got: folds.len(),
        });
    }
    if let Some(f) = folds.iter().find(|f| f.len() < MIN_SAMPLES) {
        return Err(AnalysisError::TooFewSamples {
            what: "samples per fold",
            needed: MIN_SAMPLES,
            got: f.len(),
        });
    }
    let lines: Vec<FittedLine> = folds.iter().map(|f| FittedLine::fit(f)).collect();
    let mut outliers: Vec<usize> = Vec::new();
    let mut point = least_squares_point(&lines.iter().collect::<Vec<_>>())?;
    // Start from the pairwise intersection with the smallest median residual,
    // so one stray fold cannot drag the starting point.
    let mut best = median(&lines.iter().map(|l| l.distance(point)).collect::<Vec<_>>());
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if let Ok(p) = least_squares_point(&[&lines[i], &lines[j]]) {
                let m = median(&lines.iter().map(|l| l.distance(p)).collect::<Vec<_>>());
                if m < best {
                    best = m;
                    point = p;
                }
            }
        }
    }
    for _ in 0..lines.len() {
        let residuals: Vec<f64> = lines.iter().map(|l| l.distance(point)).collect();
        let inlier_res: Vec<f64> = (0..lines.len())
            .filter(|i| !outliers.contains(i))
            .map(|i| residuals[i])
            .collect();
        let cut = (OUTLIER_FACTOR * median(&inlier_res)).max(OUTLIER_FLOOR_PX);
        let next: Vec<usize> = (0..lines.len()).filter(|&i| residuals[i] > cut).collect();
        if next == outliers || lines.len() - next.len() < 2 {
            break;
        }
        outliers = next;
        let keep: Vec<&FittedLine> = (0..lines.len())
            .filter(|i| !outliers.contains(i))
            .map(|i| &lines[i])
            .collect();
        point = least_squares_point(&keep)?;
    }
    let residuals: Vec<f64> = lines.iter().map(|l| l.distance(point)).collect();
    let inliers: Vec<f64> = (0..lines.len())
        .filter(|i| !outliers.contains(i))
        .map(|i| residuals[i])
        .collect();
    let rms_residual = (inliers.iter().map(|r| r * r).sum::<f64>() / inliers.len() as f64).sqrt();
    Ok(ConvergenceFit {
        lines,
        point,
        residuals,
        rms_residual,
        outliers,
    })
}

/// Centroids of each fold's dark crease sampled every `step` px along its
/// expected segments, keeping only positions clear of the orb outline.
pub fn sample_fold_edges(
    image: &Image,
    silhouette: Option<Circle>,
    folds: &[ExpectedLine],
    search_half_width: f64,
    min_depth: f64,
    step: f64,
) -> Vec<Vec<Point2>> {
    let log = LogLuminance::new(image);
    folds
        .iter()
        .map(|fold| {
            let mut out = Vec::new();
            for seg in fold.points.windows(2) {
                let d = seg[1] - seg[0];
                let len = d.length();
                if len <= 0.0 {
                    continue;
                }
                let (dir, normal) = (d / len, (d / len).perp());
                let mut s = 0.0;
                while s <= len {
                    let p = seg[0] + dir * s;
                    s += step;
                    if silhouette.is_some_and(|c| (p - c.center).length() < 1.02 * c.radius) {
                        continue;
                    }
                    let hit = profile(&log, p, normal, search_half_width)
                        .and_then(|prof| locate_track(&prof, -search_half_width, search_half_width));
                    if let Some(h) = hit.filter(|h| h.depth >= min_depth) {
                        out.push(p + normal * h.offset);
                    }
                }
            }
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ray_samples(from: Point2, angle: f64, offset: f64) -> Vec<Point2> {
        let d = Vec2::from_angle(angle);
        (0..20)
            .map(|i| from + d * (30.0 + 5.0 * i as f64) + d.perp() * offset)
            .collect()
    }

    #[test]
    fn two_exact_lines_meet_at_their_intersection() {
        let p = Point2::new(12.5, -3.25);
        let fit = fit_fold_convergence(&[ray_samples(p, 0.3, 0.0), ray_samples(p, 2.0, 0.0)]).unwrap();
        assert!((fit.point - p).length() < 1e-9);
        assert!(fit.outliers.is_empty());
        assert!(fit.rms_residual < 1e-9);
    }

    #[test]
    fn offset_fold_is_an_outlier() {
        let p = Point2::new(512.0, 512.0);
        let mut folds: Vec<_> = [3.4, 3.7, 4.0, 4.3].iter().map(|&a| ray_samples(p, a, 0.0)).collect();
        folds.insert(0, ray_samples(p, 3.1, 19.0));
        let fit = fit_fold_convergence(&folds).unwrap();
        assert_eq!(fit.outliers, vec![0]);
        assert!((fit.point - p).length() < 1e-9);
    }

    #[test]
    fn parallel_folds_do_not_converge() {
        let folds = vec![
            ray_samples(Point2::new(0.0, 0.0), 0.5, 0.0),
            ray_samples(Point2::new(0.0, 10.0), 0.5, 0.0),
        ];
        assert_eq!(fit_fold_convergence(&folds), Err(AnalysisError::NoConvergence));
    }

    #[test]
    fn short_folds_are_rejected() {
        let short: Vec<Point2> = ray_samples(Point2::ZERO, 0.0, 0.0)[..5].to_vec();
        assert!(matches!(
            fit_fold_convergence(&[short, ray_samples(Point2::ZERO, 1.0, 0.0)]),
            Err(AnalysisError::TooFewSamples { .. })
        ));
    }
}
