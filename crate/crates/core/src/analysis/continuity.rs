//! Displacement of dark line tracks where they cross the orb outline.

use serde::{Deserialize, Serialize};

use crate::geom::{Point2, Vec2};
use crate::render::Image;

use super::profile::{locate_track, poly_eval, polyfit, profile, LogLuminance, PROFILE_STEP};
use super::{AnalysisError, Circle};

/// Displacements at or above this many pixels count as a visible break.
pub const CONNECTED_THRESHOLD_PX: f64 = 1.0;

const OUTSIDE_BAND: (f64, f64) = (1.02, 1.15);
const INSIDE_BAND: (f64, f64) = (0.85, 0.98);
const ALONG_STEP: f64 = 0.5;
const NARROW: f64 = 4.0;
const CURVED_SAGITTA_PX: f64 = 0.5;
const TRIM_MADS: f64 = 3.0;
const MIN_TRIM_PX: f64 = 0.25;
/// Half-width, in profile steps, of the along-line contrast average.
const SMOOTH: usize = 2;
/// How far the track may stray from its fit while its contrast is read.
const TRACK_SLACK: f64 = 1.0;

/// A line as drawn outside the orb, in pixel coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedLine {
    pub id: String,
    pub points: Vec<Point2>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuityOptions {
    /// Half-width of the search window across the line, px.
    pub search_half_width: f64,
    /// Minimum track depth outside the orb, in log-luminance units.
    pub min_depth: f64,
    /// Inside contrast below this fraction of the outside contrast counts as
    /// no track.
    pub relative_floor: f64,
    pub threshold_px: f64,
}

impl Default for ContinuityOptions {
    fn default() -> Self {
        ContinuityOptions {
            search_half_width: 12.0,
            min_depth: 0.1,
            relative_floor: 0.1,
            threshold_px: CONNECTED_THRESHOLD_PX,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineStatus {
    Measured,
    /// The track is visible outside but not inside the orb.
    Interrupted,
    /// The track could not be found outside the orb.
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingMeasure {
    pub point: Point2,
    pub status: LineStatus,
    /// Gap between the two extrapolated tracks at the outline.
    pub gap_px: f64,
    /// Length along the line, from the outline inward, without a usable track.
    pub interruption_px: f64,
    pub displacement_px: f64,
    pub sagitta_px: f64,
    pub outside_depth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineMeasure {
    pub id: String,
    pub status: LineStatus,
    pub displacement_px: f64,
    pub curvature_flag: bool,
    pub connected: bool,
    pub crossings: Vec<CrossingMeasure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub silhouette: Circle,
    pub threshold_px: f64,
    pub lines: Vec<LineMeasure>,
}

impl ContinuityReport {
    pub fn line(&self, id: &str) -> Option<&LineMeasure> {
        self.lines.iter().find(|l| l.id == id)
    }

    /// Largest displacement over lines that were measured at all.
    pub fn max_displacement(&self) -> Option<f64> {
        self.lines
            .iter()
            .filter(|l| l.status != LineStatus::Failed)
            .map(|l| l.displacement_px)
            .reduce(f64::max)
    }
}

struct Track {
    samples: Vec<(f64, f64)>,
    depth: f64,
}

/// Crossing geometry: `point` on the outline, `dir` pointing inward along the
/// line, `normal` across it, `inside_len` usable chord length from `point`.
struct Crossing {
    point: Point2,
    dir: Vec2,
    normal: Vec2,
    inside_len: f64,
}

fn crossings(line: &ExpectedLine, c: &Circle) -> Vec<Crossing> {
    let mut out = Vec::new();
    for seg in line.points.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let d = b - a;
        let len = d.length();
        if len <= 0.0 {
            continue;
        }
        let u = d / len;
        // |a + u s - c|² = R²
        let f = a - c.center;
        let bq = f.dot(u);
        let disc = bq * bq - (f.dot(f) - c.radius * c.radius);
        if disc <= 0.0 {
            continue;
        }
        let root = disc.sqrt();
        let half_chord = root;
        for (s, inward) in [(-bq - root, u), (-bq + root, -u)] {
            if s >= 0.0 && s <= len {
                let point = a + u * s;
                out.push(Crossing {
                    point,
                    dir: inward,
                    normal: inward.perp(),
                    inside_len: half_chord,
                });
            }
        }
    }
    out
}

/// Positions along the line (signed, inward positive) whose radius lies in
/// `band`, stepping outward (`sign` < 0) or inward.
fn band_positions(x: &Crossing, c: &Circle, band: (f64, f64), sign: f64, limit: f64) -> Vec<f64> {
    let (lo, hi) = (band.0 * c.radius, band.1 * c.radius);
    let mut out = Vec::new();
    let mut s = 0.0;
    while s <= limit {
        let r = (x.point + x.dir * (sign * s) - c.center).length();
        if r >= lo && r <= hi {
            out.push(sign * s);
        }
        s += ALONG_STEP;
    }
    out
}

fn search(
    log: &LogLuminance,
    x: &Crossing,
    positions: &[f64],
    center: impl Fn(f64) -> f64,
    window: f64,
    half: f64,
) -> Vec<(f64, f64, f64)> {
    positions
        .iter()
        .filter_map(|&s| {
            let mid = center(s);
            let prof = profile(log, x.point + x.dir * s, x.normal, half + mid.abs() + window)?;
            let hit = locate_track(&prof, mid - window, mid + window)?;
            Some((s, hit.offset, hit.depth))
        })
        .collect()
}

/// Fits a track of the given degree, re-searching within a narrow window of
/// the first fit, and drops samples that stray from the refit.
fn fit_track(
    log: &LogLuminance,
    x: &Crossing,
    positions: &[f64],
    center: impl Fn(f64) -> f64,
    opts: &ContinuityOptions,
    min_depth: f64,
    degree: usize,
) -> Option<(Track, [f64; 3])> {
    let need = (positions.len() / 3).max(degree + 3);
    let wide: Vec<_> = search(
        log,
        x,
        positions,
        &center,
        opts.search_half_width,
        opts.search_half_width,
    )
    .into_iter()
    .filter(|h| h.2 >= min_depth)
    .collect();
    if wide.len() < need {
        return None;
    }
    let mut pts: Vec<(f64, f64)> = wide.iter().map(|h| (h.0, h.1)).collect();
    let mut coef = polyfit(&pts, degree)?;
    for _ in 0..8 {
        let worst = pts
            .iter()
            .enumerate()
            .map(|(i, p)| (i, (p.1 - poly_eval(&coef, p.0)).abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))?;
        if worst.1 <= NARROW || pts.len() <= need {
            break;
        }
        pts.remove(worst.0);
        coef = polyfit(&pts, degree)?;
    }
    let narrow: Vec<_> = search(
        log,
        x,
        positions,
        |s| poly_eval(&coef, s),
        NARROW,
        opts.search_half_width,
    )
    .into_iter()
    .filter(|h| h.2 >= min_depth)
    .collect();
    if narrow.len() < need {
        return None;
    }
    let mut samples: Vec<(f64, f64)> = narrow.iter().map(|h| (h.0, h.1)).collect();
    let mut coef = polyfit(&samples, degree)?;
    // Trim isolated samples against a robust spread estimate.
    for _ in 0..3 {
        let res: Vec<f64> = samples.iter().map(|p| (p.1 - poly_eval(&coef, p.0)).abs()).collect();
        let mut sorted = res.clone();
        sorted.sort_by(f64::total_cmp);
        let cut = (TRIM_MADS * 1.4826 * sorted[sorted.len() / 2]).max(MIN_TRIM_PX);
        let kept: Vec<(f64, f64)> = samples
            .iter()
            .zip(&res)
            .filter(|(_, r)| **r <= cut)
            .map(|(p, _)| *p)
            .collect();
        if kept.len() == samples.len() || kept.len() < need {
            break;
        }
        samples = kept;
        coef = polyfit(&samples, degree)?;
    }
    let depth = narrow.iter().map(|h| h.2).sum::<f64>() / narrow.len() as f64;
    Some((Track { samples, depth }, coef))
}

fn measure_crossing(log: &LogLuminance, c: &Circle, x: &Crossing, opts: &ContinuityOptions) -> CrossingMeasure {
    let mut m = CrossingMeasure {
        point: x.point,
        status: LineStatus::Failed,
        gap_px: 0.0,
        interruption_px: 0.0,
        displacement_px: 0.0,
        sagitta_px: 0.0,
        outside_depth: 0.0,
    };
    let outside_pos = band_positions(x, c, OUTSIDE_BAND, -1.0, c.radius);
    let Some((outside, out_coef)) = fit_track(log, x, &outside_pos, |_| 0.0, opts, opts.min_depth, 1) else {
        return m;
    };
    m.outside_depth = outside.depth;
    let floor = opts.relative_floor * outside.depth;
    let band_len = (INSIDE_BAND.1 - INSIDE_BAND.0) * c.radius;

    let inside_pos = band_positions(x, c, INSIDE_BAND, 1.0, x.inside_len);
    let inside = fit_track(log, x, &inside_pos, |s| poly_eval(&out_coef, s), opts, floor, 2);
    let Some((inside, in_coef)) = inside else {
        m.status = LineStatus::Interrupted;
        m.interruption_px = band_len;
        m.displacement_px = band_len;
        return m;
    };
    m.status = LineStatus::Measured;
    let (s0, s1) = (inside.samples[0].0, inside.samples[inside.samples.len() - 1].0);
    m.sagitta_px = in_coef[2].abs() * (s1 - s0).powi(2) / 4.0;
    // A straight track is extrapolated as a straight line; the quadratic term
    // would only amplify noise at the outline.
    let in_coef = if m.sagitta_px < CURVED_SAGITTA_PX {
        polyfit(&inside.samples, 1).unwrap_or(in_coef)
    } else {
        in_coef
    };
    m.gap_px = (poly_eval(&in_coef, 0.0) - poly_eval(&out_coef, 0.0)).abs();

    // Length of the inside track, from the outline inward, whose contrast at
    // its fitted position, averaged over a short stretch, is below the floor.
    let end = inside.samples.last().map_or(0.0, |p| p.0);
    let steps = (end / PROFILE_STEP).floor() as usize;
    let depths: Vec<f64> = (0..=steps)
        .map(|k| {
            let s = k as f64 * PROFILE_STEP;
            let mid = poly_eval(&in_coef, s);
            profile(
                log,
                x.point + x.dir * s,
                x.normal,
                opts.search_half_width + mid.abs() + TRACK_SLACK,
            )
            .and_then(|p| locate_track(&p, mid - TRACK_SLACK, mid + TRACK_SLACK))
            .map_or(0.0, |h| h.depth)
        })
        .collect();
    let below = (0..depths.len())
        .filter(|&k| {
            let lo = k.saturating_sub(SMOOTH);
            let hi = (k + SMOOTH).min(depths.len() - 1);
            depths[lo..=hi].iter().sum::<f64>() / ((hi - lo + 1) as f64) < floor
        })
        .count();
    m.interruption_px = below as f64 * PROFILE_STEP;

    m.displacement_px = m.gap_px.max(m.interruption_px);
    m
}

/// Measures each expected line where it crosses `silhouette`. Lines that never
/// cross the outline report `Failed`.
pub fn measure_line_continuity(
    image: &Image,
    silhouette: Circle,
    expected_lines: &[ExpectedLine],
    opts: &ContinuityOptions,
) -> Result<ContinuityReport, AnalysisError> {
    let c = silhouette;
    let reach = c.radius * OUTSIDE_BAND.1;
    if !(c.radius > 0.0)
        || c.center.x - reach < 0.0
        || c.center.y - reach < 0.0
        || c.center.x + reach > image.width as f64
        || c.center.y + reach > image.height as f64
    {
        return Err(AnalysisError::SilhouetteOutside);
    }
    let log = LogLuminance::new(image);
    let lines = expected_lines
        .iter()
        .map(|line| {
            let crossings: Vec<CrossingMeasure> = crossings(line, &c)
                .iter()
                .map(|x| measure_crossing(&log, &c, x, opts))
                .collect();
            let usable: Vec<&CrossingMeasure> = crossings.iter().filter(|m| m.status != LineStatus::Failed).collect();
            let status = if usable.is_empty() {
                LineStatus::Failed
            } else if usable.iter().all(|m| m.status == LineStatus::Interrupted) {
                LineStatus::Interrupted
            } else {
                LineStatus::Measured
            };
            let displacement_px = usable.iter().map(|m| m.displacement_px).fold(0.0, f64::max);
            LineMeasure {
                id: line.id.clone(),
                status,
                displacement_px,
                curvature_flag: usable
                    .iter()
                    .any(|m| m.status == LineStatus::Measured && m.sagitta_px >= CURVED_SAGITTA_PX),
                connected: status != LineStatus::Failed && displacement_px < opts.threshold_px,
                crossings,
            }
        })
        .collect();
    Ok(ContinuityReport {
        silhouette: c,
        threshold_px: opts.threshold_px,
        lines,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::Rgb;

    /// Paints a dark vertical band of `width` px centred on `x_of(y)`, with
    /// exact area coverage per pixel.
    fn draw_band(img: &mut Image, width: f64, x_of: impl Fn(f64) -> f64, dark: f64) {
        for py in 0..img.height {
            let xc = x_of(py as f64 + 0.5);
            for px in 0..img.width {
                let lo = (xc - width / 2.0).max(px as f64);
                let hi = (xc + width / 2.0).min(px as f64 + 1.0);
                let cover = (hi - lo).max(0.0);
                if cover > 0.0 {
                    let v = img.get(px, py).r;
                    let out = v * (1.0 - cover) + dark * cover;
                    img.set(px, py, Rgb::gray(out));
                }
            }
        }
    }

    fn jump_image(jump: f64) -> (Image, Circle, ExpectedLine) {
        let c = Circle::new(Point2::new(200.0, 200.0), 100.0);
        let mut img = Image::filled(400, 400, Rgb::gray(0.6));
        let x0 = 230.0;
        draw_band(
            &mut img,
            4.0,
            |y| {
                let inside = (x0 - c.center.x).powi(2) + (y - c.center.y).powi(2) < c.radius.powi(2);
                if inside {
                    x0 + jump
                } else {
                    x0
                }
            },
            0.1,
        );
        let line = ExpectedLine {
            id: "l".into(),
            points: vec![Point2::new(x0, 0.0), Point2::new(x0, 400.0)],
        };
        (img, c, line)
    }

    #[test]
    fn known_jump_is_recovered() {
        let (img, c, line) = jump_image(3.0);
        let r = measure_line_continuity(&img, c, &[line], &ContinuityOptions::default()).unwrap();
        let l = &r.lines[0];
        assert_eq!(l.status, LineStatus::Measured);
        assert_eq!(l.crossings.len(), 2);
        for m in &l.crossings {
            assert!((m.gap_px - 3.0).abs() <= 0.2, "{m:?}");
            assert!(m.interruption_px < 0.5, "{m:?}");
        }
        assert!((l.displacement_px - 3.0).abs() <= 0.2);
        assert!(!l.connected);
        assert!(!l.curvature_flag);
    }

    #[test]
    fn unbroken_line_is_connected() {
        let (img, c, line) = jump_image(0.0);
        let r = measure_line_continuity(&img, c, &[line], &ContinuityOptions::default()).unwrap();
        assert!(r.lines[0].displacement_px < 0.1, "{:?}", r.lines[0]);
        assert!(r.lines[0].connected);
    }

    #[test]
    fn gamma_and_exposure_do_not_move_tracks() {
        let (img, c, line) = jump_image(2.0);
        let opts = ContinuityOptions::default();
        let base = measure_line_continuity(&img, c, std::slice::from_ref(&line), &opts)
            .unwrap()
            .lines[0]
            .displacement_px;
        for (gain, gamma) in [(3.0, 1.0), (0.2, 1.0), (1.0, 2.2), (0.5, 0.6)] {
            let t = img.map(|p| Rgb::gray(gain * p.r.powf(gamma)));
            let d = measure_line_continuity(&t, c, std::slice::from_ref(&line), &opts)
                .unwrap()
                .lines[0]
                .displacement_px;
            assert!((d - base).abs() < 1e-6, "{gain} {gamma}: {d} vs {base}");
        }
    }

    #[test]
    fn vanishing_track_is_interrupted_and_blank_image_fails() {
        let c = Circle::new(Point2::new(200.0, 200.0), 100.0);
        let mut img = Image::filled(400, 400, Rgb::gray(0.6));
        draw_band(&mut img, 4.0, |_| 230.0, 0.1);
        for y in 0..400 {
            for x in 0..400 {
                if c.contains(Point2::new(x as f64 + 0.5, y as f64 + 0.5)) {
                    img.set(x, y, Rgb::gray(0.6));
                }
            }
        }
        let line = ExpectedLine {
            id: "l".into(),
            points: vec![Point2::new(230.0, 0.0), Point2::new(230.0, 400.0)],
        };
        let r = measure_line_continuity(&img, c, std::slice::from_ref(&line), &ContinuityOptions::default()).unwrap();
        assert_eq!(r.lines[0].status, LineStatus::Interrupted);
        assert!(r.lines[0].displacement_px >= 2.0);
        assert!(!r.lines[0].curvature_flag);

        let blank = Image::filled(400, 400, Rgb::gray(0.6));
        let r = measure_line_continuity(&blank, c, &[line], &ContinuityOptions::default()).unwrap();
        assert_eq!(r.lines[0].status, LineStatus::Failed);
        assert!(!r.lines[0].connected);
        assert_eq!(r.max_displacement(), None);
    }

    #[test]
    fn curved_interior_is_flagged() {
        let c = Circle::new(Point2::new(200.0, 200.0), 100.0);
        let mut img = Image::filled(400, 400, Rgb::gray(0.6));
        // Bends away from x = 200 inside, matching the outside at the outline.
        let x0 = 200.0;
        draw_band(
            &mut img,
            4.0,
            |y| {
                let d = (y - c.center.y).abs();
                if d < c.radius {
                    x0 + 0.03 * (c.radius - d).powi(2)
                } else {
                    x0
                }
            },
            0.1,
        );
        let line = ExpectedLine {
            id: "l".into(),
            points: vec![Point2::new(x0, 0.0), Point2::new(x0, 400.0)],
        };
        let r = measure_line_continuity(&img, c, &[line], &ContinuityOptions::default()).unwrap();
        assert!(r.lines[0].curvature_flag, "{:?}", r.lines[0]);
    }

    #[test]
    fn silhouette_must_fit() {
        let img = Image::filled(100, 100, Rgb::gray(0.5));
        let c = Circle::new(Point2::new(50.0, 50.0), 60.0);
        assert_eq!(
            measure_line_continuity(&img, c, &[], &ContinuityOptions::default()),
            Err(AnalysisError::SilhouetteOutside)
        );
    }
}
